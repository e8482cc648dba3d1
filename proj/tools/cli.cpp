#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzynet/extraction.hpp"
#include "fuzzynet/model_io.hpp"
#include "fuzzynet/training.hpp"

namespace fuzzynet::cli {

namespace {

constexpr double kGatePassRate = 0.95;

std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Echo {
  std::ostream& out;
  template <class T>
  Echo& operator()(const char* key, const T& value) {
    out << "# " << key << ": " << value << '\n';
    return *this;
  }
  Echo& operator()(const char* key, double value) {
    out << "# " << key << ": " << num(value) << '\n';
    return *this;
  }
  Echo& operator()(const char* key, bool value) {
    out << "# " << key << ": " << (value ? "true" : "false") << '\n';
    return *this;
  }
};

std::optional<ColumnRef> parse_column(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    return static_cast<std::size_t>(std::stoull(s));
  return s;
}

std::string column_text(const std::optional<ColumnRef>& c) {
  if (!c) return "last";
  if (const auto* s = std::get_if<std::string>(&*c)) return *s;
  return std::to_string(std::get<std::size_t>(*c));
}

char parse_delimiter(const std::string& s) {
  if (s == "tab" || s == "\\t") return '\t';
  if (s == "space" || s == "whitespace") return ' ';
  if (s.size() != 1) throw CLI::ValidationError("--delimiter", "expected one character, 'tab' or 'space'");
  return s[0];
}

std::vector<double> parse_list(const std::string& s, char sep, const char* what) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string cell;
  while (std::getline(in, cell, sep)) {
    double d = 0.0;
    const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), d);
    if (cell.empty() || r.ec != std::errc() || r.ptr != cell.data() + cell.size())
      throw std::invalid_argument(std::string("malformed ") + what + ": '" + s + "'");
    v.push_back(d);
  }
  return v;
}

void write_report(std::ostream& out, const std::string& partition, const EvalReport& r) {
  out << partition << '\t' << r.patterns << '\t' << r.errors << '\t' << num(r.misclassification_rate) << '\n';
}

void write_confusion(std::ostream& out, const EvalReport& r, const std::vector<std::string>& names) {
  out << "actual\\predicted";
  for (const auto& n : names) out << '\t' << n;
  out << '\n';
  for (std::size_t a = 0; a < r.confusion.size(); ++a) {
    out << names[a];
    for (std::size_t p : r.confusion[a]) out << '\t' << p;
    out << '\n';
  }
}

struct DataFlags {
  std::string path;
  std::string label_col;
  std::string delimiter = ",";
  bool no_header = false;

  void add(CLI::App& app, bool required) {
    auto* opt = app.add_option("--data", path, "delimiter-separated data file");
    if (required) opt->required();
    app.add_option("--label-col", label_col, "label column name or zero-based index (default: last)");
    app.add_option("--delimiter", delimiter, "cell delimiter: one character, 'tab' or 'space'");
    app.add_flag("--no-header", no_header, "the file has no header row");
  }

  CsvOptions options() const {
    CsvOptions o;
    o.label_column = parse_column(label_col);
    o.delimiter = parse_delimiter(delimiter);
    o.header = !no_header;
    return o;
  }
};

Dataset load(const DataFlags& flags, CsvOptions opts, std::ostream& err) {
  LoadResult r = load_csv(flags.path, opts, &err);
  if (r.rejected_rows) err << "rejected rows: " << r.rejected_rows << '\n';
  return std::move(r.dataset);
}

// --- train ------------------------------------------------------------------

struct TrainFlags {
  DataFlags data;
  TrainConfig config;
  double split = 0.7;
  std::optional<std::uint64_t> split_seed;
  bool no_stratify = false;
  std::string model_out = "model.flmodel";
  std::string loss_log;
  std::string op = "eq2";
  bool dnn = false;
  std::size_t log_every = 50;
};

int cmd_train(const TrainFlags& f, std::ostream& out, std::ostream& err) {
  TrainConfig config = f.config;
  config.kind = f.dnn ? ModelKind::Dnn : ModelKind::Fuzzy;
  config.variant = variant_from_string(f.op);
  config.validate();
  if (config.variant == Variant::SignedRoot) throw std::invalid_argument("eq3 has no trainable gradient");
  const SplitSpec spec{f.split, f.split_seed.value_or(config.seed), !f.no_stratify};
  const CsvOptions csv = f.data.options();

  Echo{out}("command", "train")("data", f.data.path)("label_col", column_text(csv.label_column))(
      "delimiter", f.data.delimiter)("header", !f.data.no_header)("model", f.dnn ? "dnn" : "fuzzy")(
      "op", to_string(config.variant))("seed", config.seed)("epochs", config.epochs)(
      "lr", config.learning_rate)("l1", config.l1_coefficient)("epsilon", config.epsilon)(
      "hidden", config.hidden_width)("depth", config.logic_depth)("rmsprop", config.rmsprop)(
      "split", spec.train_fraction)("split_seed", spec.seed)("stratified", spec.stratified)(
      "model_out", f.model_out)("loss_log", f.loss_log.empty() ? "none" : f.loss_log);

  const Dataset data = load(f.data, csv, err);
  const auto [train_set, valid_set] = split(data, spec);
  Network net = initial_network(fit_normalizer(train_set), data.classes(), config);

  const auto start = std::chrono::steady_clock::now();
  const auto losses = train(net, train_set, config, [&](std::size_t epoch, double loss) {
    if (f.log_every && (epoch + 1) % f.log_every == 0) err << "epoch " << epoch + 1 << " loss " << num(loss) << '\n';
    return true;
  });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << "trained " << losses.size() << " epochs in " << seconds << " s\n";

  if (!f.loss_log.empty()) {
    std::ofstream log(f.loss_log);
    if (!log) throw std::runtime_error("cannot write " + f.loss_log);
    write_loss_log(log, losses);
  }

  Model model{net, config, data.class_names, data.feature_names, csv.label_column, spec};
  save_model(f.model_out, model);
  err << "wrote " << f.model_out << '\n';

  out << "partition\tpatterns\terrors\terror_rate\n";
  write_report(out, "train", evaluate(net, train_set));
  write_report(out, "validation", evaluate(net, valid_set));
  return 0;
}

// --- eval -------------------------------------------------------------------

struct EvalFlags {
  std::string model;
  DataFlags data;
  std::string partition = "all";
  bool snapped = false;
  bool confusion = false;
};

Dataset partition_of(const Dataset& data, const Model& m, const std::string& which) {
  if (which == "all") return data;
  if (!m.split) throw std::invalid_argument("model records no split; use --partition all");
  auto parts = split(data, *m.split);
  return which == "train" ? std::move(parts.first) : std::move(parts.second);
}

CsvOptions model_csv(const DataFlags& flags, const Model& m) {
  CsvOptions o = flags.options();
  if (!o.label_column) o.label_column = m.label_column;
  o.class_names = m.class_names;
  return o;
}

int cmd_eval(const EvalFlags& f, std::ostream& out, std::ostream& err) {
  const Model m = load_model(std::filesystem::path(f.model));
  const CsvOptions csv = model_csv(f.data, m);
  Echo{out}("command", "eval")("model", f.model)("data", f.data.path)("label_col", column_text(csv.label_column))(
      "delimiter", f.data.delimiter)("header", !f.data.no_header)("partition", f.partition)("snapped", f.snapped);

  const Dataset data = partition_of(load(f.data, csv, err), m, f.partition);
  if (data.width() != m.network.input_width())
    throw std::invalid_argument("data has " + std::to_string(data.width()) + " features, model expects " +
                                std::to_string(m.network.input_width()));
  const Network net = f.snapped ? snap_network(m.network) : m.network;
  const EvalReport r = evaluate(net, data);
  out << "partition\tpatterns\terrors\terror_rate\n";
  write_report(out, f.partition, r);
  if (f.confusion) write_confusion(out, r, m.class_names);
  return 0;
}

// --- extract ----------------------------------------------------------------

struct ExtractFlags {
  std::string model;
  DataFlags data;
  std::string partition = "validation";
  bool flatten = false;
  bool dump = false;
};

int cmd_extract(const ExtractFlags& f, std::ostream& out, std::ostream& err) {
  const Model m = load_model(std::filesystem::path(f.model));
  Echo{out}("command", "extract")("model", f.model)("flatten", f.flatten)("dump", f.dump)(
      "data", f.data.path.empty() ? "none" : f.data.path)("partition", f.partition);
  for (std::size_t i = 0; i < m.class_names.size(); ++i) out << "# class c" << i << ": " << m.class_names[i] << '\n';

  const Network snapped = snap_network(m.network);
  const Extraction ex = extract(snapped);
  write_expressions(out, ex, f.flatten);
  if (f.dump) {
    const auto exprs = f.flatten ? flatten(ex) : ex.classes();
    for (std::size_t i = 0; i < exprs.size(); ++i) out << "# ast c" << i << ": " << dump(*exprs[i]) << '\n';
  }

  if (!f.data.path.empty()) {
    const Dataset data = partition_of(load(f.data, model_csv(f.data, m), err), m, f.partition);
    out << "partition\tmodel\tpatterns\terrors\terror_rate\n";
    const EvalReport plain = evaluate(m.network, data);
    const EvalReport snap = eval_snapped(snapped, data);
    out << f.partition << "\tunsnapped\t" << plain.patterns << '\t' << plain.errors << '\t'
        << num(plain.misclassification_rate) << '\n';
    out << f.partition << "\tsnapped\t" << snap.patterns << '\t' << snap.errors << '\t'
        << num(snap.misclassification_rate) << '\n';
  }
  return 0;
}

// --- gradcheck --------------------------------------------------------------

struct GradcheckFlags {
  std::uint64_t seed = 1;
  double tolerance = 1e-4;
  double step = 1e-5;
  bool inject_zero = false;
  bool verbose = false;
};

int cmd_gradcheck(const GradcheckFlags& f, std::ostream& out, std::ostream& err) {
  Echo{out}("command", "gradcheck")("seed", f.seed)("tolerance", f.tolerance)("step", f.step)(
      "inject_zero", f.inject_zero);
  GradCheckFixture fx = gradcheck_fixture(f.seed);
  if (f.inject_zero) {
    for (Layer& l : fx.network.layers()) {
      if (auto* fuzzy = std::get_if<FuzzyLayer>(&l)) {
        fuzzy->alpha.front() = 0.0;
        break;
      }
    }
  }
  GradCheckOptions opts;
  opts.tolerance = f.tolerance;
  opts.step = f.step;
  GradCheckReport report;
  try {
    report = grad_check(fx.network, fx.row, fx.label, opts);
  } catch (const std::domain_error& e) {
    err << "gradcheck: " << e.what() << '\n';
    return 2;
  }
  if (f.verbose) {
    out << "layer\tindex\tanalytic\tnumeric\trelative_error\n";
    for (const auto& e : report.entries)
      out << e.layer << '\t' << e.index << '\t' << num(e.analytic) << '\t' << num(e.numeric) << '\t'
          << num(e.relative_error) << '\n';
  }
  out << "parameters\tfailures\tmax_relative_error\tresult\n";
  out << report.entries.size() << '\t' << report.failures << '\t' << num(report.max_relative_error) << '\t'
      << (report.passed() ? "pass" : "fail") << '\n';
  return report.passed() ? 0 : 1;
}

// --- gates ------------------------------------------------------------------

struct GatesFlags {
  std::size_t seeds = 100;
  std::uint64_t first_seed = 1;
  std::string op = "eq2";
  std::string gate = "all";
  std::size_t max_epochs = 2000;
  double lr = 0.01;
  double l1 = 0.0001;
  double epsilon = 0.001;
};

int cmd_gates(const GatesFlags& f, std::ostream& out, std::ostream& err) {
  GateOptions opts;
  opts.variant = variant_from_string(f.op);
  if (opts.variant == Variant::SignedRoot) throw std::invalid_argument("eq3 has no trainable gradient");
  opts.max_epochs = f.max_epochs;
  opts.learning_rate = f.lr;
  opts.l1 = f.l1;
  opts.epsilon = f.epsilon;
  if (f.seeds == 0) throw std::invalid_argument("--seeds must be positive");

  std::vector<OperatorKind> gates;
  if (f.gate == "all")
    gates.assign(std::begin(kLogicOperators), std::end(kLogicOperators));
  else
    gates.push_back(operator_from_string(f.gate));

  Echo{out}("command", "gates")("op", to_string(opts.variant))("gate", f.gate)("seeds", f.seeds)(
      "first_seed", f.first_seed)("max_epochs", f.max_epochs)("lr", f.lr)("l1", f.l1)("epsilon", f.epsilon)(
      "pass_rate", kGatePassRate);
  out << "gate\tseed\tconverged\tepochs\tfinal_loss\n";
  bool ok = true;
  for (OperatorKind g : gates) {
    std::size_t converged = 0;
    for (std::size_t k = 0; k < f.seeds; ++k) {
      const std::uint64_t seed = f.first_seed + k;
      const GateRun run = train_gate(g, seed, opts);
      converged += run.converged;
      out << to_string(g) << '\t' << seed << '\t' << (run.converged ? 1 : 0) << '\t' << run.epochs_to_converge
          << '\t' << num(run.losses.empty() ? 0.0 : run.losses.back()) << '\n';
    }
    const double rate = static_cast<double>(converged) / static_cast<double>(f.seeds);
    err << to_string(g) << ": " << converged << '/' << f.seeds << " converged\n";
    if (rate < kGatePassRate) ok = false;
  }
  return ok ? 0 : 1;
}

// --- compare-ops ------------------------------------------------------------

struct CompareFlags {
  std::string pattern = "1,1,1";
  std::string grid = "-1:1:81";
  double step = 1e-5;
};

int cmd_compare(const CompareFlags& f, std::ostream& out, std::ostream&) {
  const auto p = parse_list(f.pattern, ',', "pattern");
  if (p.size() != 3) throw std::invalid_argument("pattern must be x,y,target");
  const auto g = parse_list(f.grid, ':', "grid");
  if (g.size() != 3 || g[2] < 1 || g[2] != static_cast<double>(static_cast<std::size_t>(g[2])))
    throw std::invalid_argument("grid must be lo:hi:steps with a positive integer step count");
  Echo{out}("command", "compare-ops")("pattern", f.pattern)("grid", f.grid)("step", f.step);
  const Vector alphas = linspace(g[0], g[1], static_cast<std::size_t>(g[2]));
  out << "alpha\teq1_out\teq2_out\teq3_out\teq1_slope\teq2_slope\teq3_slope\n";
  for (const ComparisonRow& r : compare_operators(p[0], p[1], p[2], alphas, f.step)) {
    out << num(r.alpha);
    for (double v : r.output) out << '\t' << num(v);
    for (double v : r.slope) out << '\t' << num(v);
    out << '\n';
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy-logic networks: train, evaluate and extract boolean expressions"};
  app.require_subcommand(1);

  TrainFlags train_f;
  auto* train_cmd = app.add_subcommand("train", "train a network and write a model file");
  train_f.data.add(*train_cmd, true);
  train_cmd->add_option("--seed", train_f.config.seed, "initialization and shuffle seed");
  train_cmd->add_option("--epochs", train_f.config.epochs, "training epochs");
  train_cmd->add_option("--lr", train_f.config.learning_rate, "learning rate");
  train_cmd->add_option("--l1", train_f.config.l1_coefficient, "L1 coefficient on selector weights");
  train_cmd->add_option("--epsilon", train_f.config.epsilon, "alpha exclusion zone half-width");
  train_cmd->add_option("--hidden", train_f.config.hidden_width, "hidden selector width");
  train_cmd->add_option("--depth", train_f.config.logic_depth, "number of logic blocks");
  train_cmd->add_option("--split", train_f.split, "training fraction")->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--split-seed", train_f.split_seed, "split seed (default: --seed)");
  train_cmd->add_flag("--no-stratify", train_f.no_stratify, "plain random split");
  train_cmd->add_option("--model-out", train_f.model_out, "model file to write");
  train_cmd->add_option("--loss-log", train_f.loss_log, "write per-epoch mean loss here");
  train_cmd->add_option("--op", train_f.op, "fuzzy operator: eq1/quadratic or eq2/absolute");
  train_cmd->add_flag("--baseline-dnn", train_f.dnn, "train the tanh network instead");
  train_cmd->add_flag("--rmsprop", train_f.config.rmsprop, "scale steps by RMSProp");
  train_cmd->add_option("--log-every", train_f.log_every, "epochs between progress lines (0: off)");

  EvalFlags eval_f;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on data");
  eval_cmd->add_option("--model", eval_f.model, "model file")->required();
  eval_f.data.add(*eval_cmd, true);
  eval_cmd->add_option("--partition", eval_f.partition, "all, train or validation (uses the model's split)")
      ->check(CLI::IsMember({"all", "train", "validation"}));
  eval_cmd->add_flag("--snapped", eval_f.snapped, "evaluate the snapped network");
  eval_cmd->add_flag("--confusion", eval_f.confusion, "print the confusion matrix");

  ExtractFlags extract_f;
  auto* extract_cmd = app.add_subcommand("extract", "print the snapped boolean expressions");
  extract_cmd->add_option("--model", extract_f.model, "model file")->required();
  extract_cmd->add_flag("--flatten", extract_f.flatten, "substitute hidden definitions");
  extract_cmd->add_flag("--dump", extract_f.dump, "also print each class AST");
  extract_f.data.add(*extract_cmd, false);
  extract_cmd->add_option("--partition", extract_f.partition, "all, train or validation")
      ->check(CLI::IsMember({"all", "train", "validation"}));

  GradcheckFlags grad_f;
  auto* grad_cmd = app.add_subcommand("gradcheck", "check backprop against finite differences");
  grad_cmd->add_option("--seed", grad_f.seed, "fixture seed");
  grad_cmd->add_option("--tolerance", grad_f.tolerance, "maximum relative error");
  grad_cmd->add_option("--step", grad_f.step, "finite difference step");
  grad_cmd->add_flag("--inject-zero", grad_f.inject_zero, "set one alpha to 0 (must be rejected)");
  grad_cmd->add_flag("--verbose", grad_f.verbose, "print every parameter");

  GatesFlags gates_f;
  auto* gates_cmd = app.add_subcommand("gates", "learn each logic gate from its truth table");
  gates_cmd->add_option("--seeds", gates_f.seeds, "seeds per gate");
  gates_cmd->add_option("--first-seed", gates_f.first_seed, "first seed");
  gates_cmd->add_option("--op", gates_f.op, "fuzzy operator: eq1/quadratic or eq2/absolute");
  gates_cmd->add_option("--gate", gates_f.gate, "one gate name, or all");
  gates_cmd->add_option("--max-epochs", gates_f.max_epochs, "epoch budget per run");
  gates_cmd->add_option("--lr", gates_f.lr, "learning rate");
  gates_cmd->add_option("--l1", gates_f.l1, "L1 coefficient");
  gates_cmd->add_option("--epsilon", gates_f.epsilon, "alpha exclusion zone half-width");

  CompareFlags compare_f;
  auto* compare_cmd = app.add_subcommand("compare-ops", "operator outputs and loss slopes over alpha");
  compare_cmd->add_option("--pattern", compare_f.pattern, "x,y,target");
  compare_cmd->add_option("--grid", compare_f.grid, "lo:hi:steps");
  compare_cmd->add_option("--step", compare_f.step, "finite difference step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train_f, out, err);
    if (eval_cmd->parsed()) return cmd_eval(eval_f, out, err);
    if (extract_cmd->parsed()) return cmd_extract(extract_f, out, err);
    if (grad_cmd->parsed()) return cmd_gradcheck(grad_f, out, err);
    if (gates_cmd->parsed()) return cmd_gates(gates_f, out, err);
    if (compare_cmd->parsed()) return cmd_compare(compare_f, out, err);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace fuzzynet::cli
