#include "fuzzynet/network.hpp"

#include <stdexcept>
#include <string>

#include "overloaded.hpp"

namespace fuzzynet {

using detail::overloaded;

void TrainConfig::validate() const {
  require(learning_rate > 0.0, "learning rate must be positive");
  require(epsilon > 0.0, "epsilon must be positive");
  require(l1_coefficient >= 0.0, "l1 coefficient must be non-negative");
  require(hidden_width > 0, "hidden width must be positive");
  require(logic_depth > 0, "depth must be positive");
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) { check_widths(); }

Network Network::make_fuzzy(const NormalizerLayer& normalizer, std::size_t classes,
                            std::size_t hidden_width, std::size_t depth, double epsilon, Rng& rng,
                            Variant variant) {
  require(classes >= 1 && hidden_width >= 1 && depth >= 1, "make_fuzzy: bad topology");
  std::size_t width = normalizer.width();
  std::vector<Layer> layers;
  layers.emplace_back(IdentityLayer{width});
  layers.emplace_back(normalizer);
  for (std::size_t block = 0; block < depth; ++block) {
    if (block > 0) layers.emplace_back(TanhLayer{width});
    AllPairingsLayer pairing(width);
    const std::size_t units = pairing.output_width();
    FuzzyLayer fuzzy = FuzzyLayer::random(units, epsilon, rng);
    fuzzy.variant = variant;
    const std::size_t out = block + 1 == depth ? classes : hidden_width;
    layers.emplace_back(std::move(pairing));
    layers.emplace_back(std::move(fuzzy));
    layers.emplace_back(FeatureSelectorLayer::uniform(units, out));
    width = out;
  }
  layers.emplace_back(MaxLayer{classes});
  return Network(std::move(layers));
}

Network Network::make_dnn(const NormalizerLayer& normalizer, std::size_t classes,
                          std::size_t hidden_width, std::size_t depth, Rng& rng) {
  require(classes >= 1 && hidden_width >= 1 && depth >= 1, "make_dnn: bad topology");
  std::size_t width = normalizer.width();
  std::vector<Layer> layers;
  layers.emplace_back(IdentityLayer{width});
  layers.emplace_back(normalizer);
  for (std::size_t block = 0; block < depth; ++block) {
    layers.emplace_back(LinearLayer::random(width, hidden_width, rng));
    layers.emplace_back(TanhLayer{hidden_width});
    width = hidden_width;
  }
  layers.emplace_back(LinearLayer::random(width, classes, rng));
  layers.emplace_back(MaxLayer{classes});
  return Network(std::move(layers));
}

void Network::check_widths() const {
  require(!layers_.empty(), "Network: no layers");
  require(std::holds_alternative<MaxLayer>(layers_.back()), "Network: last layer must be max");
  // Width of the signal entering each layer; pair streams count slots.
  std::size_t width = input_width();
  bool paired = false;
  for (const Layer& layer : layers_) {
    std::visit(overloaded{
                   [&](const IdentityLayer& l) {
                     require(!paired && l.width == width, "Network: identity width mismatch");
                   },
                   [&](const NormalizerLayer& l) {
                     require(!paired && l.width() == width, "Network: normalizer width mismatch");
                   },
                   [&](const AllPairingsLayer& l) {
                     require(!paired && l.input_width() == width, "Network: allpairings width mismatch");
                     width = l.output_width();
                     paired = true;
                   },
                   [&](const FuzzyLayer& l) {
                     require(paired && l.width() == width, "Network: fuzzy width mismatch");
                     paired = false;
                   },
                   [&](const FeatureSelectorLayer& l) {
                     require(!paired && l.input_width() == width, "Network: selector width mismatch");
                     width = l.output_width();
                   },
                   [&](const TanhLayer& l) {
                     require(!paired && l.width == width, "Network: tanh width mismatch");
                   },
                   [&](const LinearLayer& l) {
                     require(!paired && l.input_width() == width && l.bias.size() == l.output_width(),
                             "Network: linear width mismatch");
                     width = l.output_width();
                   },
                   [&](const MaxLayer& l) {
                     require(!paired && l.width == width, "Network: max width mismatch");
                   },
               },
               layer);
  }
}

std::size_t Network::input_width() const {
  return std::visit(overloaded{
                        [](const IdentityLayer& l) { return l.width; },
                        [](const NormalizerLayer& l) { return l.width(); },
                        [](const auto&) -> std::size_t {
                          throw std::invalid_argument("Network: first layer must be identity or normalizer");
                        },
                    },
                    layers_.front());
}

std::size_t Network::output_width() const { return std::get<MaxLayer>(layers_.back()).width; }

ModelKind Network::kind() const {
  for (const Layer& l : layers_)
    if (std::holds_alternative<LinearLayer>(l)) return ModelKind::Dnn;
  return ModelKind::Fuzzy;
}

Vector Network::forward(std::span<const double> input, Trace& trace) const {
  trace.signals.clear();
  trace.signals.reserve(layers_.size() + 1);
  trace.signals.emplace_back(Vector(input.begin(), input.end()));
  for (const Layer& layer : layers_) {
    const Signal& in = trace.signals.back();
    Signal out = std::visit(
        overloaded{
            [&](const AllPairingsLayer& l) -> Signal { return l.forward(std::get<Vector>(in)); },
            [&](const FuzzyLayer& l) -> Signal { return l.forward(std::get<PairStream>(in)); },
            [&](const NormalizerLayer& l) -> Signal { return l.forward(std::get<Vector>(in)); },
            [&](const FeatureSelectorLayer& l) -> Signal { return l.forward(std::get<Vector>(in)); },
            [&](const TanhLayer& l) -> Signal { return l.forward(std::get<Vector>(in)); },
            [&](const LinearLayer& l) -> Signal { return l.forward(std::get<Vector>(in)); },
            [&](const IdentityLayer&) -> Signal { return std::get<Vector>(in); },
            [&](const MaxLayer&) -> Signal { return std::get<Vector>(in); },
        },
        layer);
    trace.signals.push_back(std::move(out));
  }
  return std::get<Vector>(trace.signals.back());
}

Vector Network::scores(std::span<const double> input) const {
  Trace trace;
  return forward(input, trace);
}

std::size_t Network::predict(std::span<const double> input) const {
  return argmax(scores(input));
}

Gradients Network::zero_gradients() const {
  Gradients g;
  g.reserve(layers_.size());
  for (const Layer& l : layers_) g.emplace_back(fuzzynet::parameter_count(l), 0.0);
  return g;
}

void Network::backward(const Trace& trace, std::span<const double> output_blame,
                       Gradients& grads) const {
  require(trace.signals.size() == layers_.size() + 1, "Network::backward: stale trace");
  require(grads.size() == layers_.size(), "Network::backward: gradient shape mismatch");
  require(output_blame.size() == output_width(), "Network::backward: blame width mismatch");

  // Nothing upstream of the first trainable layer needs blame.
  std::size_t first_trainable = layers_.size();
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (fuzzynet::parameter_count(layers_[i]) > 0) {
      first_trainable = i;
      break;
    }
  }

  Signal blame = Vector(output_blame.begin(), output_blame.end());
  for (std::size_t i = layers_.size(); i-- > first_trainable;) {
    const Signal& in = trace.signals[i];
    const Signal& out = trace.signals[i + 1];
    Vector& g = grads[i];
    blame = std::visit(
        overloaded{
            [&](const AllPairingsLayer& l) -> Signal { return l.backward(std::get<PairStream>(blame)); },
            [&](const FuzzyLayer& l) -> Signal {
              return l.backward(std::get<PairStream>(in), std::get<Vector>(blame), g);
            },
            [&](const FeatureSelectorLayer& l) -> Signal {
              return l.backward(std::get<Vector>(in), std::get<Vector>(blame), g);
            },
            [&](const TanhLayer& l) -> Signal {
              return l.backward(std::get<Vector>(out), std::get<Vector>(blame));
            },
            [&](const LinearLayer& l) -> Signal {
              return l.backward(std::get<Vector>(in), std::get<Vector>(blame), g);
            },
            [&](const IdentityLayer&) -> Signal { return std::move(blame); },
            [&](const MaxLayer&) -> Signal { return std::move(blame); },
            [&](const NormalizerLayer&) -> Signal {
              throw std::logic_error("normalizer has no backward pass");
            },
        },
        layers_[i]);
  }
}

void Network::apply(const Gradients& grads, const UpdateRule& rule) {
  require(grads.size() == layers_.size(), "Network::apply: gradient shape mismatch");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    std::visit(overloaded{
                   [&](FuzzyLayer& l) { l.update(grads[i], rule); },
                   [&](FeatureSelectorLayer& l) { l.update(grads[i], rule); },
                   [&](LinearLayer& l) { l.update(grads[i], rule); },
                   [](auto&) {},
               },
               layers_[i]);
  }
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += fuzzynet::parameter_count(l);
  return n;
}

}  // namespace fuzzynet
