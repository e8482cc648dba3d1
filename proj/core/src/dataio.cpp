#include "fuzzynet/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "fuzzynet/random.hpp"

namespace fuzzynet {

namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

// A space delimiter means "any run of whitespace".
std::vector<std::string_view> split_line(std::string_view line, char delimiter) {
  std::vector<std::string_view> cells;
  if (delimiter == ' ') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      cells.push_back(line.substr(i, j - i));
      i = j;
    }
    return cells;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

bool parse_real(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

bool blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.features = Matrix(indices.size(), width());
  out.labels.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto src = row(indices[k]);
    std::copy(src.begin(), src.end(), out.features.row(k).begin());
    out.labels.push_back(labels.at(indices[k]));
  }
  out.class_names = class_names;
  out.feature_names = feature_names;
  return out;
}

void Dataset::validate() const {
  require(features.rows == labels.size(), "Dataset: feature/label row counts differ");
  require(class_names.size() >= 2, "Dataset: at least two classes are required");
  require(feature_names.size() == features.cols, "Dataset: feature name count mismatch");
  for (std::size_t l : labels) require(l < class_names.size(), "Dataset: class index out of range");
}

LoadResult parse_csv(std::istream& in, const CsvOptions& options, std::ostream* diagnostics) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;

  if (options.header) {
    while (std::getline(in, line)) {
      ++line_no;
      if (blank(line)) continue;
      for (auto cell : split_line(line, options.delimiter)) header.emplace_back(trim(cell));
      break;
    }
    if (header.empty()) throw std::runtime_error("csv: missing header row");
  }

  std::vector<std::vector<std::string>> pending;  // cells of the first data row when no header
  std::size_t columns = header.size();
  std::size_t label_col = 0;
  bool resolved = false;

  auto resolve = [&](std::size_t ncols) {
    columns = ncols;
    if (!options.label_column) {
      label_col = columns - 1;
    } else if (const auto* name = std::get_if<std::string>(&*options.label_column)) {
      const auto it = std::find(header.begin(), header.end(), *name);
      if (it == header.end()) throw std::runtime_error("csv: label column '" + *name + "' not found");
      label_col = static_cast<std::size_t>(it - header.begin());
    } else {
      label_col = std::get<std::size_t>(*options.label_column);
      if (label_col >= columns) throw std::runtime_error("csv: label column index out of range");
    }
    if (columns < 2) throw std::runtime_error("csv: need at least one feature and a label column");
    resolved = true;
  };
  if (options.header) resolve(header.size());

  LoadResult result;
  Dataset& d = result.dataset;
  std::unordered_map<std::string, std::size_t> class_index;
  for (std::size_t c = 0; c < options.class_names.size(); ++c) {
    class_index.emplace(options.class_names[c], c);
    d.class_names.push_back(options.class_names[c]);
  }
  const bool fixed_classes = !options.class_names.empty();

  std::vector<double> values;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split_line(line, options.delimiter);
    if (!resolved) resolve(cells.size());

    auto reject = [&](const std::string& why) {
      ++result.rejected_rows;
      if (diagnostics) *diagnostics << "csv: line " << line_no << " rejected: " << why << '\n';
    };
    if (cells.size() != columns) {
      reject("expected " + std::to_string(columns) + " cells, found " + std::to_string(cells.size()));
      continue;
    }
    row.clear();
    bool ok = true;
    for (std::size_t c = 0; c < cells.size() && ok; ++c) {
      if (c == label_col) continue;
      double v = 0.0;
      if (!parse_real(cells[c], v)) {
        reject("non-numeric cell '" + std::string(cells[c]) + "' in column " + std::to_string(c));
        ok = false;
      }
      row.push_back(v);
    }
    if (!ok) continue;
    const std::string label(trim(cells[label_col]));
    if (label.empty()) {
      reject("empty label");
      continue;
    }
    auto it = class_index.find(label);
    if (it == class_index.end()) {
      if (fixed_classes) {
        reject("unknown class '" + label + "'");
        continue;
      }
      it = class_index.emplace(label, d.class_names.size()).first;
      d.class_names.push_back(label);
    }
    values.insert(values.end(), row.begin(), row.end());
    d.labels.push_back(it->second);
  }
  if (!resolved) throw std::runtime_error("csv: no data rows");

  const std::size_t width = columns - 1;
  d.features.rows = d.labels.size();
  d.features.cols = width;
  d.features.data = std::move(values);
  for (std::size_t c = 0; c < columns; ++c) {
    if (c == label_col) continue;
    d.feature_names.push_back(options.header ? header[c] : std::to_string(d.feature_names.size()));
  }
  if (d.rows() == 0) throw std::runtime_error("csv: no valid data rows");
  if (d.classes() < 2) throw std::runtime_error("csv: at least two classes are required");
  d.validate();
  return result;
}

LoadResult load_csv(const std::filesystem::path& path, const CsvOptions& options,
                    std::ostream* diagnostics) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_csv(in, options, diagnostics);
}

void write_csv(std::ostream& out, const Dataset& data, char delimiter) {
  for (const auto& name : data.feature_names) out << name << delimiter;
  out << "class\n";
  char buf[64];
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (double v : data.row(r)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      out.write(buf, res.ptr - buf);
      out << delimiter;
    }
    out << data.class_names[data.labels[r]] << '\n';
  }
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(const Dataset& data,
                                                                           const SplitSpec& spec) {
  require(spec.train_fraction > 0.0 && spec.train_fraction < 1.0,
          "split: train fraction must lie in (0, 1)");
  require(data.rows() >= 2, "split: need at least two rows");
  Rng rng(spec.seed);
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;

  auto take = [&](std::vector<std::size_t>& pool, bool keep_one) {
    fisher_yates(std::span<std::size_t>(pool), rng);
    auto n = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(pool.size())));
    if (keep_one) n = std::max<std::size_t>(n, 1);
    n = std::min(n, pool.size());
    train.insert(train.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
    valid.insert(valid.end(), pool.begin() + static_cast<std::ptrdiff_t>(n), pool.end());
  };

  if (spec.stratified) {
    std::vector<std::vector<std::size_t>> by_class(std::max<std::size_t>(data.classes(), 1));
    for (std::size_t r = 0; r < data.rows(); ++r) by_class.at(data.labels[r]).push_back(r);
    for (auto& members : by_class)
      if (!members.empty()) take(members, true);
  } else {
    std::vector<std::size_t> all(data.rows());
    for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
    take(all, true);
  }
  if (valid.empty()) throw std::invalid_argument("split: validation partition would be empty");
  std::sort(train.begin(), train.end());
  std::sort(valid.begin(), valid.end());
  return {std::move(train), std::move(valid)};
}

std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec) {
  const auto [train, valid] = split_indices(data, spec);
  return {data.subset(train), data.subset(valid)};
}

NormalizerLayer fit_normalizer(const Dataset& train) {
  require(train.rows() > 0, "fit_normalizer: empty dataset");
  return NormalizerLayer::fit(train.features);
}

}  // namespace fuzzynet
