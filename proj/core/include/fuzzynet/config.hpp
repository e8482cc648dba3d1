#pragma once

#include <cstddef>
#include <cstdint>

#include "fuzzynet/fuzzy_ops.hpp"

namespace fuzzynet {

enum class ModelKind { Fuzzy, Dnn };

struct TrainConfig {
  double learning_rate = 0.01;
  double l1_coefficient = 0.0001;
  double epsilon = 0.001;
  std::size_t epochs = 500;
  std::uint64_t seed = 1;
  std::size_t hidden_width = 16;
  std::size_t logic_depth = 2;
  bool rmsprop = false;
  ModelKind kind = ModelKind::Fuzzy;
  Variant variant = Variant::Absolute;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;

  bool operator==(const TrainConfig&) const = default;
};

}  // namespace fuzzynet
