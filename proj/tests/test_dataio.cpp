#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "fuzzynet/dataio.hpp"

using namespace fuzzynet;

namespace {

LoadResult parse(const std::string& text, CsvOptions o = {}) {
  std::istringstream in(text);
  return parse_csv(in, o);
}

Dataset two_class(std::size_t per_class) {
  Dataset d;
  d.class_names = {"p", "q"};
  d.feature_names = {"v"};
  d.features = Matrix(2 * per_class, 1);
  for (std::size_t r = 0; r < 2 * per_class; ++r) {
    d.features(r, 0) = static_cast<double>(r);
    d.labels.push_back(r < per_class ? 0 : 1);
  }
  return d;
}

}  // namespace

TEST(Csv, RejectsMalformedRow) {
  std::ostringstream diag;
  std::istringstream in("a,b,label\n1,2,x\n3,oops,y\n5,6,y\n");
  const LoadResult r = parse_csv(in, {}, &diag);
  EXPECT_EQ(r.dataset.rows(), 2u);
  EXPECT_EQ(r.rejected_rows, 1u);
  EXPECT_NE(diag.str().find("line 3"), std::string::npos);
  EXPECT_EQ(r.dataset.class_names, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(r.dataset.feature_names, (std::vector<std::string>{"a", "b"}));
}

TEST(Csv, WrongCellCountIsRejected) {
  const LoadResult r = parse("a,b,c\n1,2,x\n1,x\n3,4,y\n");
  EXPECT_EQ(r.rejected_rows, 1u);
}

TEST(Csv, LabelColumnByNameAndIndex) {
  const std::string text = "cls,f1,f2\nA,1,2\nB,3,4\nA,5,6\n";
  CsvOptions by_name;
  by_name.label_column = ColumnRef{std::string("cls")};
  const Dataset a = parse(text, by_name).dataset;
  EXPECT_EQ(a.width(), 2u);
  EXPECT_EQ(a.labels, (std::vector<std::size_t>{0, 1, 0}));
  EXPECT_EQ(a.row(1)[1], 4.0);
  CsvOptions by_index;
  by_index.label_column = ColumnRef{std::size_t{0}};
  EXPECT_EQ(parse(text, by_index).dataset, a);
  CsvOptions missing;
  missing.label_column = ColumnRef{std::string("nope")};
  EXPECT_THROW(parse(text, missing), std::runtime_error);
}

TEST(Csv, WhitespaceAndNoHeader) {
  CsvOptions o;
  o.delimiter = ' ';
  o.header = false;
  const Dataset d = parse("1  2\tA\n  3 4 B\n", o).dataset;
  EXPECT_EQ(d.rows(), 2u);
  EXPECT_EQ(d.feature_names, (std::vector<std::string>{"0", "1"}));
}

TEST(Csv, Errors) {
  EXPECT_THROW(load_csv("/nonexistent/file.csv"), std::runtime_error);
  EXPECT_THROW(parse("a,b\n1,x\n2,x\n"), std::runtime_error);
  EXPECT_THROW(parse("a,b\n"), std::runtime_error);
  CsvOptions fixed;
  fixed.class_names = {"x", "y"};
  const LoadResult r = parse("a,b\n1,x\n2,z\n3,y\n", fixed);
  EXPECT_EQ(r.rejected_rows, 1u);
}

TEST(Csv, RoundTrip) {
  Dataset d;
  d.class_names = {"neg", "pos"};
  d.feature_names = {"f0", "f1"};
  d.features = Matrix(3, 2);
  d.features.data = {0.1, -2.5e-7, 1.0 / 3.0, 12345.678, -0.0, 7.0};
  d.labels = {1, 0, 1};
  std::ostringstream out;
  write_csv(out, d);
  CsvOptions o;
  o.class_names = d.class_names;
  const Dataset back = parse(out.str(), o).dataset;
  EXPECT_EQ(back.features, d.features);
  EXPECT_EQ(back.labels, d.labels);
  EXPECT_EQ(back.class_names, d.class_names);
}

TEST(Split, Sizes) {
  Dataset d;
  d.class_names = {"a", "b"};
  d.feature_names = {"v"};
  d.features = Matrix(100, 1);
  for (std::size_t r = 0; r < 100; ++r) d.labels.push_back(r % 4 == 0 ? 1 : 0);
  const auto [train, valid] = split(d, {0.7, 1, false});
  EXPECT_EQ(train.rows(), 70u);
  EXPECT_EQ(valid.rows(), 30u);
}

TEST(Split, StratifiedBalanced) {
  const Dataset d = two_class(50);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto [train, valid] = split(d, {0.7, seed, true});
    std::size_t ones = 0;
    for (std::size_t l : train.labels) ones += l;
    EXPECT_NEAR(static_cast<double>(ones), 35.0, 1.0);
    EXPECT_NEAR(static_cast<double>(train.rows() - ones), 35.0, 1.0);
  }
}

TEST(Split, DeterministicDisjointExhaustive) {
  const Dataset d = two_class(40);
  EXPECT_EQ(split_indices(d, {0.7, 9, true}), split_indices(d, {0.7, 9, true}));
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto [train, valid] = split_indices(d, {0.7, seed, seed % 2 == 0});
    std::set<std::size_t> all(train.begin(), train.end());
    for (std::size_t v : valid) EXPECT_TRUE(all.insert(v).second) << "row " << v << " in both";
    EXPECT_EQ(all.size(), d.rows());
  }
}

TEST(Split, SingletonClassGoesToTrain) {
  Dataset d = two_class(5);
  d.features.data.push_back(99);
  d.features.rows += 1;
  d.class_names.push_back("rare");
  d.labels.push_back(2);
  const auto [train, valid] = split(d, {0.7, 3, true});
  EXPECT_EQ(std::count(train.labels.begin(), train.labels.end(), 2u), 1);
  EXPECT_EQ(std::count(valid.labels.begin(), valid.labels.end(), 2u), 0);
}

TEST(Normalizer, FitOnTraining) {
  Dataset d;
  d.class_names = {"a", "b"};
  d.feature_names = {"u", "c"};
  d.features = Matrix(2, 2);
  d.features.data = {2, 5, 4, 5};
  d.labels = {0, 1};
  const NormalizerLayer n = fit_normalizer(d);
  EXPECT_EQ(n.scale(0, 3), 0.0);
  EXPECT_EQ(n.scale(0, 10), 1.0);
  EXPECT_EQ(n.scale(1, 123), 0.0);
  EXPECT_EQ(n.forward(d.row(0))[0], -1.0);
  EXPECT_EQ(n.forward(d.row(1))[0], 1.0);
}

#ifdef FUZZYNET_DATA_DIR
TEST(Datasets, Shapes) {
  const std::filesystem::path dir = FUZZYNET_DATA_DIR;
  const Dataset bc = load_csv(dir / "breast_cancer.csv").dataset;
  EXPECT_EQ(bc.width(), 9u);
  EXPECT_EQ(bc.classes(), 2u);
  const Dataset wf = load_csv(dir / "waveform.csv").dataset;
  EXPECT_EQ(wf.width(), 40u);
  EXPECT_EQ(wf.classes(), 3u);
  EXPECT_EQ(load_csv(dir / "vehicle.csv").dataset.classes(), 4u);
  EXPECT_EQ(load_csv(dir / "yeast.csv").dataset.classes(), 10u);
  EXPECT_EQ(load_csv(dir / "diabetes.csv").dataset.width(), 8u);
}
#endif
