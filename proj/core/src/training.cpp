#include "fuzzynet/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "fuzzynet/random.hpp"

namespace fuzzynet {

namespace {

constexpr double kRmsDecay = 0.9;
constexpr double kRmsFloor = 1e-8;

// Offset separating the shuffle stream from the initialization stream.
constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;

}  // namespace

Vector encode_targets(std::size_t label, std::size_t classes) {
  if (label >= classes) throw std::out_of_range("encode_targets: label out of range");
  Vector t(classes, -1.0);
  t[label] = 1.0;
  return t;
}

double squared_error(std::span<const double> scores, std::span<const double> target) {
  require(scores.size() == target.size(), "squared_error: width mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double d = scores[i] - target[i];
    sum += d * d;
  }
  return 0.5 * sum;
}

double mean_loss(const Network& net, const Dataset& data) {
  require(data.rows() > 0, "mean_loss: empty dataset");
  double total = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r)
    total += squared_error(net.scores(data.row(r)), encode_targets(data.labels[r], net.output_width()));
  return total / static_cast<double>(data.rows());
}

EvalReport evaluate(const Predictor& predict, const Dataset& data) {
  if (data.rows() == 0) throw std::invalid_argument("evaluate: empty dataset");
  const std::size_t k = data.classes();
  EvalReport report;
  report.patterns = data.rows();
  report.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const std::size_t predicted = predict(data.row(r));
    const std::size_t actual = data.labels[r];
    if (predicted != actual) ++report.errors;
    if (predicted < k) ++report.confusion[actual][predicted];
  }
  report.misclassification_rate =
      static_cast<double>(report.errors) / static_cast<double>(report.patterns);
  return report;
}

EvalReport evaluate(const Network& net, const Dataset& data) {
  return evaluate([&net](std::span<const double> x) { return net.predict(x); }, data);
}

// --- training loop ------------------------------------------------------------

Optimizer::Optimizer(const Network& net, const TrainConfig& config) : config_(config) {
  if (config_.rmsprop) cache_ = net.zero_gradients();
}

void Optimizer::step(Network& net, Gradients& grads) {
  if (config_.rmsprop) {
    for (std::size_t l = 0; l < grads.size(); ++l) {
      for (std::size_t i = 0; i < grads[l].size(); ++i) {
        double& c = cache_[l][i];
        const double g = grads[l][i];
        c = kRmsDecay * c + (1.0 - kRmsDecay) * g * g;
        grads[l][i] = g / (std::sqrt(c) + kRmsFloor);
      }
    }
  }
  net.apply(grads, {config_.learning_rate, config_.l1_coefficient, config_.epsilon});
}

double train_epoch(Network& net, const Dataset& data, Optimizer& optimizer, Rng& rng) {
  if (data.rows() == 0) throw std::invalid_argument("train_epoch: empty dataset");
  require(data.width() == net.input_width(), "train_epoch: dataset width does not match network");
  require(data.classes() == net.output_width(), "train_epoch: class count does not match network");

  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  fisher_yates(std::span<std::size_t>(order), rng);

  Trace trace;
  Gradients grads = net.zero_gradients();
  Vector blame(net.output_width());
  double total = 0.0;
  for (std::size_t r : order) {
    const Vector out = net.forward(data.row(r), trace);
    const Vector target = encode_targets(data.labels[r], net.output_width());
    total += squared_error(out, target);
    for (std::size_t k = 0; k < out.size(); ++k) blame[k] = out[k] - target[k];
    for (auto& g : grads) std::fill(g.begin(), g.end(), 0.0);
    net.backward(trace, blame, grads);
    optimizer.step(net, grads);
  }
  return total / static_cast<double>(data.rows());
}

double train_epoch(Network& net, const Dataset& data, const TrainConfig& config, Rng& rng) {
  require(config.learning_rate >= 0.0, "train_epoch: negative learning rate");
  Optimizer optimizer(net, config);
  return train_epoch(net, data, optimizer, rng);
}

Network initial_network(const NormalizerLayer& normalizer, std::size_t classes,
                        const TrainConfig& config) {
  Rng rng(config.seed);
  if (config.kind == ModelKind::Dnn)
    return Network::make_dnn(normalizer, classes, config.hidden_width, config.logic_depth, rng);
  return Network::make_fuzzy(normalizer, classes, config.hidden_width, config.logic_depth,
                             config.epsilon, rng, config.variant);
}

std::vector<double> train(Network& net, const Dataset& data, const TrainConfig& config,
                          const EpochCallback& on_epoch) {
  Optimizer optimizer(net, config);
  Rng seeds(config.seed ^ kShuffleStream);
  std::vector<double> losses;
  losses.reserve(config.epochs);
  for (std::size_t e = 0; e < config.epochs; ++e) {
    Rng epoch_rng(seeds());
    losses.push_back(train_epoch(net, data, optimizer, epoch_rng));
    if (on_epoch && !on_epoch(e, losses.back())) break;
  }
  return losses;
}

void write_loss_log(std::ostream& out, std::span<const double> losses) {
  const auto old = out.precision(17);
  for (std::size_t e = 0; e < losses.size(); ++e) out << e << '\t' << losses[e] << '\n';
  out.precision(old);
}

// --- gradient checking --------------------------------------------------------

GradCheckReport grad_check(Network& net, std::span<const double> row,
                           std::span<const double> target, const GradCheckOptions& options) {
  for (const Layer& layer : net.layers()) {
    if (const auto* fuzzy = std::get_if<FuzzyLayer>(&layer)) {
      for (double a : fuzzy->alpha)
        if (!(std::abs(a) >= options.min_alpha))
          throw std::domain_error("grad_check: every |alpha| must be at least " +
                                  std::to_string(options.min_alpha));
    }
  }

  Trace trace;
  const Vector out = net.forward(row, trace);
  Vector blame(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) blame[k] = out[k] - target[k];
  Gradients analytic = net.zero_gradients();
  net.backward(trace, blame, analytic);
  if (options.analytic_hook)
    for (std::size_t l = 0; l < analytic.size(); ++l) options.analytic_hook(l, analytic[l]);

  auto loss = [&] { return squared_error(net.scores(row), target); };

  GradCheckReport report;
  auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t i = 0; i < analytic[l].size(); ++i) {
      double& p = parameter(layers[l], i);
      const double saved = p;
      p = saved + options.step;
      const double up = loss();
      p = saved - options.step;
      const double down = loss();
      p = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double a = analytic[l][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), options.floor});
      const double rel = std::abs(a - numeric) / denom;
      report.entries.push_back({l, i, a, numeric, rel});
      report.max_relative_error = std::max(report.max_relative_error, rel);
      if (!(rel <= options.tolerance)) ++report.failures;
    }
  }
  return report;
}

GradCheckReport grad_check(Network& net, std::span<const double> row, std::size_t label,
                           const GradCheckOptions& options) {
  const Vector target = encode_targets(label, net.output_width());
  return grad_check(net, row, target, options);
}

GradCheckFixture gradcheck_fixture(std::uint64_t seed) {
  constexpr std::size_t kInputs = 3;
  constexpr std::size_t kHidden = 2;
  constexpr std::size_t kClasses = 2;
  constexpr double kMinAlpha = 0.05;

  Rng rng(seed);
  NormalizerLayer identity{Vector(kInputs, -1.0), Vector(kInputs, 1.0)};
  Network net = Network::make_fuzzy(identity, kClasses, kHidden, 2, kMinAlpha, rng);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (Layer& layer : net.layers()) {
    if (auto* sel = std::get_if<FeatureSelectorLayer>(&layer))
      for (double& w : sel->weights.data) w = unit(rng);
  }
  GradCheckFixture fx{std::move(net), Vector(kInputs), 0};
  for (double& v : fx.row) v = unit(rng);
  fx.label = std::uniform_int_distribution<std::size_t>(0, kClasses - 1)(rng);
  return fx;
}

// --- operator comparison ------------------------------------------------------

std::vector<ComparisonRow> compare_operators(double x, double y, double target,
                                             std::span<const double> alpha_grid, double step) {
  constexpr Variant kVariants[] = {Variant::Quadratic, Variant::Absolute, Variant::SignedRoot};
  std::vector<ComparisonRow> rows;
  rows.reserve(alpha_grid.size());
  for (double a : alpha_grid) {
    ComparisonRow row{a, {}, {}};
    for (int v = 0; v < 3; ++v) {
      auto loss = [&](double alpha) {
        const double d = evaluate(kVariants[v], x, y, alpha) - target;
        return 0.5 * d * d;
      };
      row.output[v] = evaluate(kVariants[v], x, y, a);
      row.slope[v] = (loss(a + step) - loss(a - step)) / (2.0 * step);
    }
    rows.push_back(row);
  }
  return rows;
}

Vector linspace(double lo, double hi, std::size_t steps) {
  Vector v;
  if (steps == 0) return v;
  v.reserve(steps);
  if (steps == 1) {
    v.push_back(lo);
    return v;
  }
  const double span = hi - lo;
  for (std::size_t i = 0; i < steps; ++i)
    v.push_back(lo + span * static_cast<double>(i) / static_cast<double>(steps - 1));
  v.back() = hi;
  return v;
}

// --- gate learning ------------------------------------------------------------

Dataset gate_dataset(OperatorKind gate) {
  require(arity(gate) > 0, "gate_dataset: constants have no truth table to learn");
  Dataset d;
  d.class_names = {"false", "true"};
  d.feature_names = {"0", "1"};
  d.features = Matrix(4, 2);
  std::size_t r = 0;
  for (double x : {kFalse, kTrue}) {
    for (double y : {kFalse, kTrue}) {
      d.features(r, 0) = x;
      d.features(r, 1) = y;
      const auto table = boolean_table(gate, true);
      double out = 0.0;
      for (const TruthRow& t : table) {
        const bool match = t.inputs[0] == x && (t.inputs.size() < 2 || t.inputs[1] == y);
        if (match) out = t.output;
      }
      d.labels.push_back(out > 0.0 ? 1 : 0);
      ++r;
    }
  }
  return d;
}

GateRun train_gate(OperatorKind gate, std::uint64_t seed, const GateOptions& options) {
  const Dataset data = gate_dataset(gate);
  TrainConfig config;
  config.learning_rate = options.learning_rate;
  config.l1_coefficient = options.l1;
  config.epsilon = options.epsilon;
  config.epochs = options.max_epochs;
  config.seed = seed;
  config.logic_depth = 1;
  config.variant = options.variant;

  GateRun run{gate, seed, false, 0, {}, {}};
  run.network = initial_network(fit_normalizer(data), data.classes(), config);
  run.losses = train(run.network, data, config, [&](std::size_t epoch, double) {
    if (!run.converged && evaluate(run.network, data).errors == 0) {
      run.converged = true;
      run.epochs_to_converge = epoch + 1;
    }
    return !(run.converged && options.stop_at_convergence);
  });
  return run;
}

UnitRun train_unit(std::span<const TruthRow> rows, double alpha0, std::size_t epochs,
                   std::uint64_t seed, Variant variant, double learning_rate, double epsilon) {
  for (const TruthRow& r : rows) require(r.inputs.size() == 2, "train_unit: rows need two inputs");
  Rng seeds(seed ^ kShuffleStream);
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  UnitRun run{alpha0, {}};
  run.losses.reserve(epochs);
  for (std::size_t e = 0; e < epochs; ++e) {
    Rng rng(seeds());
    fisher_yates(std::span<std::size_t>(order), rng);
    double total = 0.0;
    for (std::size_t i : order) {
      const TruthRow& r = rows[i];
      const double x = r.inputs[0];
      const double y = r.inputs[1];
      const double err = evaluate(variant, x, y, run.alpha) - r.output;
      total += 0.5 * err * err;
      const double g = err * partials(variant, x, y, run.alpha).dalpha;
      if (variant == Variant::Absolute) {
        update_alphas(std::span<double>(&run.alpha, 1), std::span<const double>(&g, 1), learning_rate,
                      epsilon);
      } else {
        run.alpha -= learning_rate * g;
      }
    }
    run.losses.push_back(total / static_cast<double>(rows.size()));
  }
  return run;
}

}  // namespace fuzzynet
