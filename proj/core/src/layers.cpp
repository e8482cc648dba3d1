#include "fuzzynet/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "overloaded.hpp"

namespace fuzzynet {

namespace {

double sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

// --- NormalizerLayer --------------------------------------------------------

NormalizerLayer NormalizerLayer::fit(const Matrix& rows) {
  require(rows.rows > 0, "NormalizerLayer::fit: no rows");
  NormalizerLayer n;
  n.min.assign(rows.cols, 0.0);
  n.max.assign(rows.cols, 0.0);
  for (std::size_t c = 0; c < rows.cols; ++c) {
    double lo = rows(0, c);
    double hi = rows(0, c);
    for (std::size_t r = 1; r < rows.rows; ++r) {
      lo = std::min(lo, rows(r, c));
      hi = std::max(hi, rows(r, c));
    }
    n.min[c] = lo;
    n.max[c] = hi;
  }
  return n;
}

double NormalizerLayer::scale(std::size_t c, double value) const {
  const double range = max[c] - min[c];
  if (!(range > 0.0)) return 0.0;
  const double v = 2.0 * (value - min[c]) / range - 1.0;
  return std::clamp(v, -1.0, 1.0);
}

Vector NormalizerLayer::forward(std::span<const double> input) const {
  require(input.size() == width(), "NormalizerLayer: width mismatch");
  Vector out(input.size());
  for (std::size_t c = 0; c < input.size(); ++c) out[c] = scale(c, input[c]);
  return out;
}

// --- AllPairingsLayer -------------------------------------------------------

AllPairingsLayer::AllPairingsLayer(std::size_t n) : input_width_(n) {
  require(n >= 1, "AllPairingsLayer: input width must be positive");
  index_.reserve(output_width_for(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) index_.push_back({i, static_cast<std::int64_t>(j)});
  for (std::size_t i = 0; i < n; ++i) index_.push_back({i, PairIndex::kTrue});
  for (std::size_t i = 0; i < n; ++i) index_.push_back({i, PairIndex::kFalse});
}

PairStream AllPairingsLayer::forward(std::span<const double> input) const {
  require(input.size() == input_width_, "AllPairingsLayer: width mismatch");
  PairStream out;
  out.left.resize(index_.size());
  out.right.resize(index_.size());
  for (std::size_t u = 0; u < index_.size(); ++u) {
    const PairIndex& p = index_[u];
    out.left[u] = input[p.left];
    if (p.right == PairIndex::kTrue)
      out.right[u] = kTrue;
    else if (p.right == PairIndex::kFalse)
      out.right[u] = kFalse;
    else
      out.right[u] = input[static_cast<std::size_t>(p.right)];
  }
  return out;
}

Vector AllPairingsLayer::backward(const PairStream& blame) const {
  require(blame.left.size() == index_.size() && blame.right.size() == index_.size(),
          "AllPairingsLayer: blame width mismatch");
  Vector in(input_width_, 0.0);
  for (std::size_t u = 0; u < index_.size(); ++u) {
    const PairIndex& p = index_[u];
    in[p.left] += blame.left[u];
    if (!p.is_bias()) in[static_cast<std::size_t>(p.right)] += blame.right[u];
  }
  return in;
}

// --- FuzzyLayer -------------------------------------------------------------

FuzzyLayer FuzzyLayer::random(std::size_t units, double epsilon, Rng& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  FuzzyLayer layer;
  layer.alpha.resize(units);
  for (double& a : layer.alpha) {
    do {
      a = dist(rng);
    } while (std::abs(a) < epsilon);
  }
  return layer;
}

Vector FuzzyLayer::forward(const PairStream& pairs) const {
  require(pairs.size() == alpha.size(), "FuzzyLayer: unit count mismatch");
  Vector out(alpha.size());
  for (std::size_t u = 0; u < alpha.size(); ++u)
    out[u] = evaluate(variant, pairs.left[u], pairs.right[u], alpha[u]);
  return out;
}

PairStream FuzzyLayer::backward(const PairStream& pairs, std::span<const double> blame,
                                std::span<double> alpha_gradient) const {
  require(pairs.size() == alpha.size() && blame.size() == alpha.size() &&
              alpha_gradient.size() == alpha.size(),
          "FuzzyLayer: unit count mismatch");
  PairStream in;
  in.left.resize(alpha.size());
  in.right.resize(alpha.size());
  for (std::size_t u = 0; u < alpha.size(); ++u) {
    const Partials p = partials(variant, pairs.left[u], pairs.right[u], alpha[u]);
    in.left[u] = blame[u] * p.dx;
    in.right[u] = blame[u] * p.dy;
    alpha_gradient[u] += blame[u] * p.dalpha;
  }
  return in;
}

void FuzzyLayer::update(std::span<const double> gradient, const UpdateRule& rule) {
  if (variant == Variant::Absolute) {
    update_alphas(alpha, gradient, rule.learning_rate, rule.epsilon);
    return;
  }
  require(gradient.size() == alpha.size(), "FuzzyLayer: gradient size mismatch");
  for (std::size_t u = 0; u < alpha.size(); ++u) alpha[u] -= rule.learning_rate * gradient[u];
}

void update_alphas(std::span<double> alphas, std::span<const double> gradient, double lr,
                   double epsilon) {
  require(gradient.size() == alphas.size(), "update_alphas: size mismatch");
  for (std::size_t u = 0; u < alphas.size(); ++u) {
    const double before = alphas[u];
    double after = before - lr * gradient[u];
    if (std::abs(after) < epsilon) {
      after = -before;
      if (std::abs(after) < epsilon) after = before < 0.0 ? epsilon : -epsilon;
    }
    alphas[u] = after;
  }
}

// --- FeatureSelectorLayer ---------------------------------------------------

FeatureSelectorLayer FeatureSelectorLayer::uniform(std::size_t inputs, std::size_t outputs) {
  require(inputs > 0 && outputs > 0, "FeatureSelectorLayer: empty shape");
  return {Matrix(outputs, inputs, 1.0 / static_cast<double>(inputs))};
}

Vector FeatureSelectorLayer::forward(std::span<const double> input) const {
  require(input.size() == weights.cols, "FeatureSelectorLayer: width mismatch");
  Vector out(weights.rows, 0.0);
  for (std::size_t o = 0; o < weights.rows; ++o) {
    const auto w = weights.row(o);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * input[i];
    out[o] = acc;
  }
  return out;
}

Vector FeatureSelectorLayer::backward(std::span<const double> input,
                                      std::span<const double> blame,
                                      std::span<double> grad) const {
  require(input.size() == weights.cols && blame.size() == weights.rows &&
              grad.size() == weights.data.size(),
          "FeatureSelectorLayer: shape mismatch");
  Vector in(weights.cols, 0.0);
  for (std::size_t o = 0; o < weights.rows; ++o) {
    const double b = blame[o];
    if (b == 0.0) continue;
    const auto w = weights.row(o);
    double* g = grad.data() + o * weights.cols;
    for (std::size_t i = 0; i < weights.cols; ++i) {
      in[i] += w[i] * b;
      g[i] += b * input[i];
    }
  }
  return in;
}

void FeatureSelectorLayer::update(std::span<const double> gradient, const UpdateRule& rule) {
  update_selector_weights(weights.data, gradient, rule.learning_rate, rule.l1);
}

void update_selector_weights(std::span<double> weights, std::span<const double> gradient,
                             double lr, double l1) {
  require(gradient.size() == weights.size(), "update_selector_weights: size mismatch");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i] - lr * (gradient[i] + l1 * sign(weights[i]));
    weights[i] = std::clamp(w, -1.0, 1.0);
  }
}

// --- TanhLayer --------------------------------------------------------------

Vector TanhLayer::forward(std::span<const double> input) const {
  Vector out(input.size());
  std::transform(input.begin(), input.end(), out.begin(), [](double v) { return std::tanh(v); });
  return out;
}

Vector TanhLayer::backward(std::span<const double> output, std::span<const double> blame) const {
  require(output.size() == blame.size(), "TanhLayer: width mismatch");
  Vector in(output.size());
  for (std::size_t i = 0; i < output.size(); ++i) in[i] = blame[i] * (1.0 - output[i] * output[i]);
  return in;
}

// --- LinearLayer ------------------------------------------------------------

LinearLayer LinearLayer::random(std::size_t inputs, std::size_t outputs, Rng& rng) {
  require(inputs > 0 && outputs > 0, "LinearLayer: empty shape");
  const double bound = 1.0 / std::sqrt(static_cast<double>(inputs));
  std::uniform_real_distribution<double> dist(-bound, bound);
  LinearLayer layer{Matrix(outputs, inputs), Vector(outputs, 0.0)};
  for (double& w : layer.weights.data) w = dist(rng);
  return layer;
}

Vector LinearLayer::forward(std::span<const double> input) const {
  require(input.size() == weights.cols, "LinearLayer: width mismatch");
  Vector out(bias);
  for (std::size_t o = 0; o < weights.rows; ++o) {
    const auto w = weights.row(o);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * input[i];
    out[o] += acc;
  }
  return out;
}

Vector LinearLayer::backward(std::span<const double> input, std::span<const double> blame,
                             std::span<double> grad) const {
  require(input.size() == weights.cols && blame.size() == weights.rows &&
              grad.size() == weights.data.size() + bias.size(),
          "LinearLayer: shape mismatch");
  Vector in(weights.cols, 0.0);
  double* gb = grad.data() + weights.data.size();
  for (std::size_t o = 0; o < weights.rows; ++o) {
    const double b = blame[o];
    const auto w = weights.row(o);
    double* g = grad.data() + o * weights.cols;
    for (std::size_t i = 0; i < weights.cols; ++i) {
      in[i] += w[i] * b;
      g[i] += b * input[i];
    }
    gb[o] += b;
  }
  return in;
}

void LinearLayer::update(std::span<const double> gradient, const UpdateRule& rule) {
  require(gradient.size() == weights.data.size() + bias.size(), "LinearLayer: gradient size mismatch");
  for (std::size_t i = 0; i < weights.data.size(); ++i)
    weights.data[i] -= rule.learning_rate * gradient[i];
  for (std::size_t o = 0; o < bias.size(); ++o)
    bias[o] -= rule.learning_rate * gradient[weights.data.size() + o];
}

// --- MaxLayer ---------------------------------------------------------------

std::size_t argmax(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("argmax: empty scores");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

std::size_t MaxLayer::predict(std::span<const double> scores) const { return argmax(scores); }

// --- variant helpers --------------------------------------------------------

using detail::overloaded;

std::string_view layer_name(const Layer& layer) {
  return std::visit(overloaded{
                        [](const IdentityLayer&) { return std::string_view("identity"); },
                        [](const NormalizerLayer&) { return std::string_view("normalizer"); },
                        [](const AllPairingsLayer&) { return std::string_view("allpairings"); },
                        [](const FuzzyLayer&) { return std::string_view("fuzzy"); },
                        [](const FeatureSelectorLayer&) { return std::string_view("featureselector"); },
                        [](const TanhLayer&) { return std::string_view("tanh"); },
                        [](const LinearLayer&) { return std::string_view("linear"); },
                        [](const MaxLayer&) { return std::string_view("max"); },
                    },
                    layer);
}

std::size_t parameter_count(const Layer& layer) {
  return std::visit(overloaded{
                        [](const FuzzyLayer& l) { return l.alpha.size(); },
                        [](const FeatureSelectorLayer& l) { return l.weights.data.size(); },
                        [](const LinearLayer& l) { return l.weights.data.size() + l.bias.size(); },
                        [](const auto&) { return std::size_t{0}; },
                    },
                    layer);
}

double& parameter(Layer& layer, std::size_t i) {
  return std::visit(overloaded{
                        [i](FuzzyLayer& l) -> double& { return l.alpha.at(i); },
                        [i](FeatureSelectorLayer& l) -> double& { return l.weights.data.at(i); },
                        [i](LinearLayer& l) -> double& {
                          return i < l.weights.data.size() ? l.weights.data[i]
                                                           : l.bias.at(i - l.weights.data.size());
                        },
                        [](auto&) -> double& { throw std::out_of_range("layer has no parameters"); },
                    },
                    layer);
}

}  // namespace fuzzynet
