#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fuzzynet/model_io.hpp"

using namespace fuzzynet;

namespace {

Model sample(ModelKind kind) {
  Rng rng(77);
  NormalizerLayer n{{0.1, -3.3333333333333335, 2.0}, {1.7, 5.0, 2.0}};
  Model m;
  m.config.kind = kind;
  m.config.seed = 99;
  m.network = kind == ModelKind::Dnn ? Network::make_dnn(n, 2, 3, 2, rng) : Network::make_fuzzy(n, 2, 3, 2, 0.001, rng);
  std::uniform_real_distribution<double> u(-1, 1);
  for (Layer& l : m.network.layers())
    for (std::size_t i = 0; i < parameter_count(l); ++i) parameter(l, i) = u(rng) * 1e-3 + std::nextafter(u(rng), 2.0);
  m.class_names = {"benign", "malignant"};
  m.feature_names = {"a", "b", "c"};
  m.label_column = ColumnRef{std::string("class")};
  m.split = SplitSpec{0.7, 3, true};
  return m;
}

}  // namespace

TEST(ModelIo, RoundTripIsBitFaithful) {
  for (ModelKind k : {ModelKind::Fuzzy, ModelKind::Dnn}) {
    const Model m = sample(k);
    std::stringstream buf;
    save_model(buf, m);
    const Model back = load_model(buf);
    EXPECT_EQ(back, m);
    std::stringstream again;
    save_model(again, back);
    EXPECT_EQ(again.str(), buf.str());
  }
}

TEST(ModelIo, IndexLabelAndNoSplit) {
  Model m = sample(ModelKind::Fuzzy);
  m.label_column = ColumnRef{std::size_t{4}};
  m.split.reset();
  std::stringstream buf;
  save_model(buf, m);
  EXPECT_EQ(load_model(buf), m);
}

TEST(ModelIo, RejectsCorruptInput) {
  std::stringstream garbage("{not json");
  EXPECT_THROW(load_model(garbage), std::runtime_error);
  std::stringstream wrong(R"({"format": "other", "version": 1})");
  EXPECT_THROW(load_model(wrong), std::runtime_error);

  std::stringstream buf;
  save_model(buf, sample(ModelKind::Fuzzy));
  std::string text = buf.str();
  const auto pos = text.find("\"version\": 1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 12, "\"version\": 9");
  std::stringstream future(text);
  EXPECT_THROW(load_model(future), std::runtime_error);

  std::string truncated = buf.str().substr(0, buf.str().size() / 2);
  std::stringstream half(truncated);
  EXPECT_THROW(load_model(half), std::runtime_error);
  EXPECT_THROW(load_model(std::filesystem::path("/nonexistent.flmodel")), std::runtime_error);
}
