#pragma once

// Layer types of the fuzzy-logic network and the tanh baseline.
//
// Every layer is a plain value type. Forward/backward are const; updates
// mutate parameters and must not run concurrently with anything else on
// the same layer.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "fuzzynet/fuzzy_ops.hpp"
#include "fuzzynet/matrix.hpp"

namespace fuzzynet {

using Rng = std::mt19937_64;

/// An ordered list of (left, right) operand pairs; slot u feeds fuzzy unit u.
struct PairStream {
  Vector left;
  Vector right;

  std::size_t size() const { return left.size(); }
  bool operator==(const PairStream&) const = default;
};

/// Right-hand operand of a pairing: an input index or a bias constant.
struct PairIndex {
  static constexpr std::int64_t kTrue = -1;
  static constexpr std::int64_t kFalse = -2;

  std::size_t left;
  std::int64_t right;

  bool is_bias() const { return right < 0; }
  bool operator==(const PairIndex&) const = default;
};

/// Step sizes shared by every parameter update.
struct UpdateRule {
  double learning_rate = 0.01;
  double l1 = 0.0001;
  double epsilon = 0.001;
};

/// Pass-through layer. Used for the input layer and for tanh layers in a
/// snapped network.
struct IdentityLayer {
  std::size_t width = 0;

  bool operator==(const IdentityLayer&) const = default;
};

/// Per-column min/max scaling into [-1, 1], clamping out-of-range values.
struct NormalizerLayer {
  Vector min;
  Vector max;

  static NormalizerLayer fit(const Matrix& rows);

  std::size_t width() const { return min.size(); }
  Vector forward(std::span<const double> input) const;
  double scale(std::size_t column, double value) const;

  bool operator==(const NormalizerLayer&) const = default;
};

/// Emits every unordered input pair, then each input paired with TRUE, then
/// each input paired with FALSE. Width n(n-1)/2 + 2n. No parameters.
class AllPairingsLayer {
 public:
  AllPairingsLayer() = default;
  explicit AllPairingsLayer(std::size_t input_width);

  static std::size_t output_width_for(std::size_t n) { return n * (n - 1) / 2 + 2 * n; }

  std::size_t input_width() const { return input_width_; }
  std::size_t output_width() const { return index_.size(); }
  const std::vector<PairIndex>& index() const { return index_; }

  PairStream forward(std::span<const double> input) const;

  /// Blame of each input is the sum of the blame of every pair slot that
  /// references it. Blame routed to bias constants is dropped.
  Vector backward(const PairStream& output_blame) const;

  bool operator==(const AllPairingsLayer&) const = default;

 private:
  std::size_t input_width_ = 0;
  std::vector<PairIndex> index_;
};

/// One interpolating operator per unit, one trainable alpha each.
struct FuzzyLayer {
  Vector alpha;
  Variant variant = Variant::Absolute;

  /// Alphas drawn uniformly from [-1, 1] with (-epsilon, epsilon) excluded.
  static FuzzyLayer random(std::size_t units, double epsilon, Rng& rng);

  std::size_t width() const { return alpha.size(); }
  Vector forward(const PairStream& pairs) const;

  /// Returns the blame of each pair operand; writes dLoss/dalpha into
  /// alpha_gradient (accumulated, not overwritten).
  PairStream backward(const PairStream& pairs, std::span<const double> output_blame,
                      std::span<double> alpha_gradient) const;

  void update(std::span<const double> gradient, const UpdateRule& rule);

  bool operator==(const FuzzyLayer&) const = default;
};

/// Bias-free linear layer with weights clamped to [-1, 1] and L1 shrinkage.
struct FeatureSelectorLayer {
  Matrix weights;  // [outputs x inputs]

  /// Every weight set to 1 / inputs.
  static FeatureSelectorLayer uniform(std::size_t inputs, std::size_t outputs);

  std::size_t input_width() const { return weights.cols; }
  std::size_t output_width() const { return weights.rows; }

  Vector forward(std::span<const double> input) const;
  /// Accumulates dLoss/dW into weight_gradient (row-major, same shape).
  Vector backward(std::span<const double> input, std::span<const double> output_blame,
                  std::span<double> weight_gradient) const;
  void update(std::span<const double> gradient, const UpdateRule& rule);

  bool operator==(const FeatureSelectorLayer&) const = default;
};

struct TanhLayer {
  std::size_t width = 0;

  Vector forward(std::span<const double> input) const;
  /// Uses the forward output: blame * (1 - out^2).
  Vector backward(std::span<const double> output, std::span<const double> output_blame) const;

  bool operator==(const TanhLayer&) const = default;
};

/// Fully connected layer with bias, for the baseline network.
struct LinearLayer {
  Matrix weights;  // [outputs x inputs]
  Vector bias;

  /// Weights uniform in +-1/sqrt(inputs), zero bias.
  static LinearLayer random(std::size_t inputs, std::size_t outputs, Rng& rng);

  std::size_t input_width() const { return weights.cols; }
  std::size_t output_width() const { return weights.rows; }

  Vector forward(std::span<const double> input) const;
  /// Gradient layout: weights row-major followed by bias.
  Vector backward(std::span<const double> input, std::span<const double> output_blame,
                  std::span<double> gradient) const;
  void update(std::span<const double> gradient, const UpdateRule& rule);

  bool operator==(const LinearLayer&) const = default;
};

/// Classification head: index of the largest score, lowest index on ties.
struct MaxLayer {
  std::size_t width = 0;

  std::size_t predict(std::span<const double> scores) const;

  bool operator==(const MaxLayer&) const = default;
};

std::size_t argmax(std::span<const double> scores);

// Update contracts, usable on raw parameter storage.

/// alpha <- alpha - lr * g. A step landing in (-eps, eps) is replaced by
/// the reflection of the pre-update value; if that is still inside the
/// zone it is pushed out to -sign(pre) * eps.
void update_alphas(std::span<double> alphas, std::span<const double> gradient, double learning_rate,
                   double epsilon);

/// w <- clamp(w - lr * (g + l1 * sign(w)), -1, 1) with sign(0) = 0.
void update_selector_weights(std::span<double> weights, std::span<const double> gradient,
                             double learning_rate, double l1);

using Layer = std::variant<IdentityLayer, NormalizerLayer, AllPairingsLayer, FuzzyLayer,
                           FeatureSelectorLayer, TanhLayer, LinearLayer, MaxLayer>;

std::string_view layer_name(const Layer& layer);

/// Number of trainable parameters of a layer.
std::size_t parameter_count(const Layer& layer);

/// Mutable view of the i-th trainable parameter (same order as gradients).
double& parameter(Layer& layer, std::size_t i);

}  // namespace fuzzynet
