#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "fuzzynet/config.hpp"
#include "fuzzynet/layers.hpp"

namespace fuzzynet {

/// Signal flowing between layers: a plain vector, or the pair stream
/// emitted by an AllPairings layer.
using Signal = std::variant<Vector, PairStream>;

/// Per-layer gradient storage, parallel to Network::layers().
using Gradients = std::vector<Vector>;

/// Activations recorded by a forward pass; signals[i] is the input of
/// layer i and the last entry is the network output.
struct Trace {
  std::vector<Signal> signals;
};

/// An ordered layer stack ending in a Max head.
///
/// The fuzzy topology for depth d is
///   identity -> normalizer -> d x (allpairings -> fuzzy -> featureselector)
/// with a tanh layer between consecutive blocks and a max head at the end.
/// The default depth 2 therefore has exactly ten layers.
class Network {
 public:
  Network() = default;
  explicit Network(std::vector<Layer> layers);

  static Network make_fuzzy(const NormalizerLayer& normalizer, std::size_t classes,
                            std::size_t hidden_width, std::size_t depth, double epsilon, Rng& rng,
                            Variant variant = Variant::Absolute);

  /// Fully connected tanh baseline: identity -> normalizer ->
  /// depth x (linear -> tanh) -> linear -> max.
  static Network make_dnn(const NormalizerLayer& normalizer, std::size_t classes,
                          std::size_t hidden_width, std::size_t depth, Rng& rng);

  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& layers() { return layers_; }

  std::size_t input_width() const;
  std::size_t output_width() const;
  ModelKind kind() const;

  /// Scores of the layer feeding the max head.
  Vector scores(std::span<const double> input) const;
  Vector forward(std::span<const double> input, Trace& trace) const;
  std::size_t predict(std::span<const double> input) const;

  Gradients zero_gradients() const;

  /// Accumulates dLoss/dparameter into grads given dLoss/dscores.
  void backward(const Trace& trace, std::span<const double> output_blame, Gradients& grads) const;

  void apply(const Gradients& grads, const UpdateRule& rule);

  std::size_t parameter_count() const;

  bool operator==(const Network&) const = default;

 private:
  void check_widths() const;

  std::vector<Layer> layers_;
};

}  // namespace fuzzynet
