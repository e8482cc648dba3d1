#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fuzzynet/config.hpp"
#include "fuzzynet/dataio.hpp"
#include "fuzzynet/network.hpp"

namespace fuzzynet {

inline constexpr int kModelFormatVersion = 1;

/// Everything needed to reuse a trained network on new data.
struct Model {
  Network network;
  TrainConfig config;
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;
  std::optional<ColumnRef> label_column;
  std::optional<SplitSpec> split;

  bool operator==(const Model&) const = default;
};

/// JSON text. Doubles are written in shortest round-trip form, so a
/// save/load cycle reproduces every parameter bit for bit.
void save_model(std::ostream& out, const Model& model);
void save_model(const std::filesystem::path& path, const Model& model);

/// Throws std::runtime_error on unreadable, malformed or unsupported input.
Model load_model(std::istream& in);
Model load_model(const std::filesystem::path& path);

}  // namespace fuzzynet
