#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "fuzzynet/config.hpp"
#include "fuzzynet/dataio.hpp"
#include "fuzzynet/network.hpp"

namespace fuzzynet {

/// +1 at the label position, -1 elsewhere.
Vector encode_targets(std::size_t label, std::size_t classes);

/// 0.5 * sum (score - target)^2. Its gradient with respect to the scores is
/// score - target, which is the blame fed into backpropagation.
double squared_error(std::span<const double> scores, std::span<const double> target);

/// Mean squared_error over every row, without touching parameters.
double mean_loss(const Network& net, const Dataset& data);

struct EvalReport {
  double misclassification_rate = 0.0;
  std::size_t patterns = 0;
  std::size_t errors = 0;
  /// confusion[actual][predicted]
  std::vector<std::vector<std::size_t>> confusion;

  bool operator==(const EvalReport&) const = default;
};

using Predictor = std::function<std::size_t(std::span<const double>)>;

EvalReport evaluate(const Predictor& predict, const Dataset& data);
EvalReport evaluate(const Network& net, const Dataset& data);

/// Per-parameter optimizer state kept across epochs.
class Optimizer {
 public:
  Optimizer(const Network& net, const TrainConfig& config);

  /// Applies one update from grads (which may be rescaled in place).
  void step(Network& net, Gradients& grads);

 private:
  TrainConfig config_;
  Gradients cache_;  // RMSProp running mean of squared gradients
};

/// One online pass over `data` in an order shuffled by `rng`: per row,
/// forward, squared-error blame, backprop, update. Returns the mean loss of
/// the rows as seen before each row's own update.
double train_epoch(Network& net, const Dataset& data, const TrainConfig& config, Rng& rng);
double train_epoch(Network& net, const Dataset& data, Optimizer& optimizer, Rng& rng);

/// Builds the initial network for `config` from a fitted normalizer.
Network initial_network(const NormalizerLayer& normalizer, std::size_t classes,
                        const TrainConfig& config);

/// Per-epoch hook: (epoch index starting at 0, mean loss). Returning false
/// stops training early.
using EpochCallback = std::function<bool(std::size_t, double)>;

/// Runs config.epochs epochs. Epoch e shuffles with a generator seeded from
/// the e-th draw of a sequence seeded by config.seed, so runs are
/// reproducible. Returns the per-epoch mean losses.
std::vector<double> train(Network& net, const Dataset& data, const TrainConfig& config,
                          const EpochCallback& on_epoch = {});

/// Writes "<epoch>\t<loss>" lines.
void write_loss_log(std::ostream& out, std::span<const double> losses);

// --- gradient checking ------------------------------------------------------

struct GradCheckEntry {
  std::size_t layer;
  std::size_t index;
  double analytic;
  double numeric;
  double relative_error;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_relative_error = 0.0;
  std::size_t failures = 0;

  bool passed() const { return failures == 0; }
};

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  /// Relative error is |a - n| / max(|a|, |n|, floor).
  double floor = 1e-6;
  /// Smallest |alpha| the check accepts; the analytic derivative is
  /// discontinuous at zero.
  double min_alpha = 0.05;
  /// Called with (layer index, analytic gradient) before comparison.
  std::function<void(std::size_t, Vector&)> analytic_hook;
};

/// Compares backprop gradients of squared_error(scores(row), target) with
/// central finite differences for every trainable parameter. Throws
/// std::domain_error if a fuzzy alpha is closer to zero than min_alpha.
GradCheckReport grad_check(Network& net, std::span<const double> row,
                           std::span<const double> target, const GradCheckOptions& options = {});
GradCheckReport grad_check(Network& net, std::span<const double> row, std::size_t label,
                           const GradCheckOptions& options = {});

/// Tiny reference network (3 inputs, hidden 2, 2 classes) with all
/// |alpha| >= 0.05, plus a random input row and label.
struct GradCheckFixture {
  Network network;
  Vector row;
  std::size_t label;
};
GradCheckFixture gradcheck_fixture(std::uint64_t seed);

// --- operator comparison ----------------------------------------------------

struct ComparisonRow {
  double alpha;
  double output[3];  // quadratic, absolute, signed-root
  double slope[3];   // d(0.5 (out - target)^2)/dalpha by central differences
};

std::vector<ComparisonRow> compare_operators(double x, double y, double target,
                                             std::span<const double> alpha_grid,
                                             double step = 1e-5);

/// `steps` evenly spaced points from lo to hi inclusive (lo alone when steps == 1).
Vector linspace(double lo, double hi, std::size_t steps);

// --- gate learning ----------------------------------------------------------

/// The remapped truth table of a logic operator as a 2-input, 2-class
/// dataset (class 0 = false, class 1 = true). Unary operators ignore input 1.
Dataset gate_dataset(OperatorKind gate);

struct GateOptions {
  Variant variant = Variant::Absolute;
  std::size_t max_epochs = 2000;
  double learning_rate = 0.01;
  double l1 = 0.0001;
  double epsilon = 0.001;
  bool stop_at_convergence = true;
};

struct GateRun {
  OperatorKind gate;
  std::uint64_t seed;
  bool converged = false;
  /// Epochs completed when the training error first reached zero.
  std::size_t epochs_to_converge = 0;
  std::vector<double> losses;
  Network network;
};

/// Trains a depth-1 fuzzy network on a gate's truth table.
GateRun train_gate(OperatorKind gate, std::uint64_t seed, const GateOptions& options = {});

struct UnitRun {
  double alpha;
  std::vector<double> losses;
};

/// Online training of a single fuzzy unit's alpha (no selector) on
/// (x, y, target) rows.
UnitRun train_unit(std::span<const TruthRow> rows, double alpha0, std::size_t epochs,
                   std::uint64_t seed, Variant variant = Variant::Absolute,
                   double learning_rate = 0.01, double epsilon = 0.001);

}  // namespace fuzzynet
