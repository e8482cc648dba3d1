#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzynet/layers.hpp"
#include "fuzzynet/matrix.hpp"

namespace fuzzynet {

/// Real-valued features with integer class labels.
///
/// Immutable once built; class indices follow first appearance in the
/// source file.
struct Dataset {
  Matrix features;  // [rows x n]
  std::vector<std::size_t> labels;
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;

  std::size_t rows() const { return features.rows; }
  std::size_t width() const { return features.cols; }
  std::size_t classes() const { return class_names.size(); }
  std::span<const double> row(std::size_t r) const { return features.row(r); }

  /// Rows selected by index, in the given order.
  Dataset subset(std::span<const std::size_t> indices) const;

  /// Throws std::invalid_argument if the invariants do not hold.
  void validate() const;

  bool operator==(const Dataset&) const = default;
};

/// Label column chosen by header name or zero-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

struct CsvOptions {
  /// Defaults to the last column.
  std::optional<ColumnRef> label_column;
  char delimiter = ',';
  bool header = true;
  /// Class names in index order. When set, labels must be one of these
  /// instead of being assigned by first appearance.
  std::vector<std::string> class_names;
};

struct LoadResult {
  Dataset dataset;
  std::size_t rejected_rows = 0;
};

/// Rows with an unparseable feature cell are skipped and counted; a note
/// per rejected row goes to `diagnostics` when given.
LoadResult load_csv(const std::filesystem::path& path, const CsvOptions& options = {},
                    std::ostream* diagnostics = nullptr);
LoadResult parse_csv(std::istream& in, const CsvOptions& options = {},
                     std::ostream* diagnostics = nullptr);

/// Writes the dataset with a header row, label last, using the class names.
void write_csv(std::ostream& out, const Dataset& data, char delimiter = ',');

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t seed = 1;
  bool stratified = true;

  bool operator==(const SplitSpec&) const = default;
};

/// Deterministic disjoint partition. Stratified splits round each class's
/// share of training rows to the nearest integer and always keep at least
/// one row of each class in training.
std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec);

/// Row indices of the training and validation partitions.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(const Dataset& data,
                                                                           const SplitSpec& spec);

NormalizerLayer fit_normalizer(const Dataset& train);

}  // namespace fuzzynet
