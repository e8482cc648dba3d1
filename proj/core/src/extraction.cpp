#include "fuzzynet/extraction.hpp"

#include <ostream>
#include <stdexcept>

namespace fuzzynet {

namespace {

bool is_binop(OperatorKind op) {
  switch (op) {
    case OperatorKind::And:
    case OperatorKind::Or:
    case OperatorKind::Xor:
    case OperatorKind::Nxor:
    case OperatorKind::Nor:
    case OperatorKind::Nand: return true;
    default: return false;
  }
}

OperatorKind negated(OperatorKind op) {
  switch (op) {
    case OperatorKind::And: return OperatorKind::Nand;
    case OperatorKind::Nand: return OperatorKind::And;
    case OperatorKind::Or: return OperatorKind::Nor;
    case OperatorKind::Nor: return OperatorKind::Or;
    case OperatorKind::Xor: return OperatorKind::Nxor;
    case OperatorKind::Nxor: return OperatorKind::Xor;
    default: throw std::invalid_argument("negated: not a binary operator");
  }
}

// and, nor and nxor are single units; the rest are their negations.
double apply(OperatorKind op, double x, double y) {
  switch (op) {
    case OperatorKind::And: return fuzzy(x, y, 1.0);
    case OperatorKind::Nor: return fuzzy(x, y, -1.0);
    case OperatorKind::Nxor: return fuzzy(x, y, 0.0);
    case OperatorKind::Nand: return -fuzzy(x, y, 1.0);
    case OperatorKind::Or: return -fuzzy(x, y, -1.0);
    case OperatorKind::Xor: return -fuzzy(x, y, 0.0);
    default: throw std::invalid_argument("apply: not a binary operator");
  }
}

double truth(bool v) { return v ? kTrue : kFalse; }

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

// op(a, c) for a constant c, by the operator's values at a = false and a = true.
ExprPtr reduce_const(OperatorKind op, const ExprPtr& a, bool c) {
  const double lo = apply(op, kFalse, truth(c));
  const double hi = apply(op, kTrue, truth(c));
  if (lo == hi) return make_const(hi > 0.0);
  if (hi > lo) return a;
  return make_not(a);
}

ExprPtr simplify_once(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Const:
    case ExprKind::Var: return e;
    case ExprKind::Not: {
      ExprPtr c = simplify_once(e->children[0]);
      if (c->kind == ExprKind::Not) return c->children[0];
      if (c->kind == ExprKind::Const) return make_const(!c->value);
      if (c->kind == ExprKind::BinOp) return make_binop(negated(c->op), c->children[0], c->children[1]);
      return make_not(std::move(c));
    }
    case ExprKind::BinOp: {
      ExprPtr l = simplify_once(e->children[0]);
      ExprPtr r = simplify_once(e->children[1]);
      if (l->kind == ExprKind::Const && r->kind == ExprKind::Const)
        return make_const(apply(e->op, truth(l->value), truth(r->value)) > 0.0);
      if (r->kind == ExprKind::Const) return reduce_const(e->op, l, r->value);
      if (l->kind == ExprKind::Const) return reduce_const(e->op, r, l->value);
      return make_binop(e->op, std::move(l), std::move(r));
    }
    case ExprKind::Sum: {
      if (e->children.size() == 1) return simplify_once(e->children[0]);
      std::vector<ExprPtr> kids;
      kids.reserve(e->children.size());
      for (const ExprPtr& c : e->children) kids.push_back(simplify_once(c));
      return make_sum(std::move(kids));
    }
  }
  return e;
}

std::string var_name(const Expr& e) {
  if (e.level == 0) return std::to_string(e.index);
  return "h" + std::to_string(e.level) + "_" + std::to_string(e.index);
}

const char* symbol(OperatorKind op) {
  switch (op) {
    case OperatorKind::And:
    case OperatorKind::Nand: return " & ";
    case OperatorKind::Or:
    case OperatorKind::Nor: return " | ";
    default: return " ⊕ ";
  }
}

bool negative_form(OperatorKind op) {
  return op == OperatorKind::Nand || op == OperatorKind::Nor || op == OperatorKind::Nxor;
}

std::string render_node(const Expr& e, bool top);

// Atoms and negated forms stand alone; other compounds get parentheses.
std::string operand(const Expr& e) {
  if (e.kind == ExprKind::BinOp && negative_form(e.op)) return render_node(e, true);
  if (e.kind == ExprKind::Sum && !e.children.empty()) return "(" + render_node(e, true) + ")";
  return render_node(e, false);
}

std::string render_node(const Expr& e, bool top) {
  switch (e.kind) {
    case ExprKind::Const: return e.value ? "⊤" : "⊥";
    case ExprKind::Var: return var_name(e);
    case ExprKind::Not: return "¬" + operand(*e.children[0]);
    case ExprKind::BinOp: {
      const std::string body = operand(*e.children[0]) + symbol(e.op) + operand(*e.children[1]);
      if (negative_form(e.op)) return "¬(" + body + ")";
      return top ? body : "(" + body + ")";
    }
    case ExprKind::Sum: {
      if (e.children.empty()) return "()";
      std::string s;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) s += " + ";
        const Expr& c = *e.children[i];
        s += c.kind == ExprKind::Sum ? "(" + render_node(c, true) + ")" : render_node(c, false);
      }
      return s;
    }
  }
  return "?";
}

ExprPtr substitute(const ExprPtr& e, const std::vector<std::vector<ExprPtr>>& defs) {
  switch (e->kind) {
    case ExprKind::Const: return e;
    case ExprKind::Var: return e->level == 0 ? e : defs.at(e->level - 1).at(e->index);
    default: {
      Expr copy = *e;
      for (ExprPtr& c : copy.children) c = substitute(c, defs);
      return make(std::move(copy));
    }
  }
}

struct Block {
  const AllPairingsLayer* pairs;
  const FuzzyLayer* fuzzy;
  const FeatureSelectorLayer* selector;
};

std::vector<Block> blocks_of(const Network& net) {
  std::vector<Block> blocks;
  const auto& layers = net.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (const auto* p = std::get_if<AllPairingsLayer>(&layers[i])) {
      if (i + 2 >= layers.size()) throw std::invalid_argument("extract: truncated block");
      const auto* f = std::get_if<FuzzyLayer>(&layers[i + 1]);
      const auto* s = std::get_if<FeatureSelectorLayer>(&layers[i + 2]);
      if (!f || !s) throw std::invalid_argument("extract: malformed block");
      blocks.push_back({p, f, s});
    }
    if (std::holds_alternative<LinearLayer>(layers[i]) || std::holds_alternative<TanhLayer>(layers[i]))
      throw std::invalid_argument("extract: network is not a snapped fuzzy network");
  }
  if (blocks.empty()) throw std::invalid_argument("extract: no fuzzy blocks");
  return blocks;
}

const NormalizerLayer& normalizer_of(const Network& net) {
  for (const Layer& l : net.layers())
    if (const auto* n = std::get_if<NormalizerLayer>(&l)) return *n;
  throw std::invalid_argument("extract: network has no normalizer");
}

}  // namespace

ExprPtr make_const(bool value) {
  Expr e;
  e.kind = ExprKind::Const;
  e.value = value;
  return make(std::move(e));
}

ExprPtr make_var(std::size_t level, std::size_t index) {
  Expr e;
  e.kind = ExprKind::Var;
  e.level = level;
  e.index = index;
  return make(std::move(e));
}

ExprPtr make_not(ExprPtr child) {
  Expr e;
  e.kind = ExprKind::Not;
  e.children.push_back(std::move(child));
  return make(std::move(e));
}

ExprPtr make_binop(OperatorKind op, ExprPtr left, ExprPtr right) {
  if (!is_binop(op)) throw std::invalid_argument("make_binop: not a binary operator");
  Expr e;
  e.kind = ExprKind::BinOp;
  e.op = op;
  e.children = {std::move(left), std::move(right)};
  return make(std::move(e));
}

ExprPtr make_sum(std::vector<ExprPtr> children) {
  Expr e;
  e.kind = ExprKind::Sum;
  e.children = std::move(children);
  return make(std::move(e));
}

bool same(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case ExprKind::Const: return a.value == b.value;
    case ExprKind::Var: return a.level == b.level && a.index == b.index;
    case ExprKind::BinOp:
      if (a.op != b.op) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same(*a.children[i], *b.children[i])) return false;
  return true;
}

double evaluate(const Expr& e, const Environment& env) {
  switch (e.kind) {
    case ExprKind::Const: return truth(e.value);
    case ExprKind::Var: return env.at(e.level).at(e.index);
    case ExprKind::Not: return -evaluate(*e.children[0], env);
    case ExprKind::BinOp:
      return apply(e.op, evaluate(*e.children[0], env), evaluate(*e.children[1], env));
    case ExprKind::Sum: {
      double acc = 0.0;
      for (const ExprPtr& c : e.children) acc += evaluate(*c, env);
      return acc;
    }
  }
  return 0.0;
}

ExprPtr simplify(const ExprPtr& e) {
  ExprPtr cur = e;
  while (true) {
    ExprPtr next = simplify_once(cur);
    if (same(*next, *cur)) return next;
    cur = std::move(next);
  }
}

std::string render(const Expr& e) { return render_node(e, true); }

std::string dump(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Const: return e.value ? "(true)" : "(false)";
    case ExprKind::Var: return "(var " + std::to_string(e.level) + " " + std::to_string(e.index) + ")";
    default: break;
  }
  std::string s = "(";
  if (e.kind == ExprKind::Not)
    s += "not";
  else if (e.kind == ExprKind::Sum)
    s += "sum";
  else
    s += to_string(e.op);
  for (const ExprPtr& c : e.children) s += " " + dump(*c);
  return s + ")";
}

Network snap_network(const Network& net) {
  if (net.kind() != ModelKind::Fuzzy) throw std::invalid_argument("snap_network: not a fuzzy network");
  std::vector<Layer> layers;
  layers.reserve(net.layers().size());
  for (const Layer& l : net.layers()) {
    if (const auto* f = std::get_if<FuzzyLayer>(&l)) {
      FuzzyLayer s = *f;
      for (double& a : s.alpha) a = snap_value(a);
      s.variant = Variant::Absolute;
      layers.emplace_back(std::move(s));
    } else if (const auto* sel = std::get_if<FeatureSelectorLayer>(&l)) {
      FeatureSelectorLayer s = *sel;
      for (double& w : s.weights.data) w = snap_value(w);
      layers.emplace_back(std::move(s));
    } else if (const auto* t = std::get_if<TanhLayer>(&l)) {
      layers.emplace_back(IdentityLayer{t->width});
    } else {
      layers.push_back(l);
    }
  }
  return Network(std::move(layers));
}

Extraction extract_raw(const Network& snapped) {
  Extraction ex;
  const auto blocks = blocks_of(snapped);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Block& blk = blocks[b];
    std::vector<ExprPtr> units;
    const auto& index = blk.pairs->index();
    for (std::size_t u = 0; u < index.size(); ++u) {
      const double a = blk.fuzzy->alpha[u];
      if (a != -1.0 && a != 0.0 && a != 1.0)
        throw std::invalid_argument("extract: alpha is not snapped");
      const PairIndex& p = index[u];
      ExprPtr left = make_var(b, p.left);
      ExprPtr right = p.right == PairIndex::kTrue    ? make_const(true)
                      : p.right == PairIndex::kFalse ? make_const(false)
                                                     : make_var(b, static_cast<std::size_t>(p.right));
      units.push_back(make_binop(snap_alpha(a), std::move(left), std::move(right)));
    }
    BlockExpressions out;
    const Matrix& w = blk.selector->weights;
    for (std::size_t o = 0; o < w.rows; ++o) {
      std::vector<ExprPtr> terms;
      for (std::size_t u = 0; u < w.cols; ++u) {
        const double v = w(o, u);
        if (v == 1.0)
          terms.push_back(units[u]);
        else if (v == -1.0)
          terms.push_back(make_not(units[u]));
        else if (v != 0.0)
          throw std::invalid_argument("extract: selector weight is not snapped");
      }
      out.outputs.push_back(make_sum(std::move(terms)));
    }
    ex.blocks.push_back(std::move(out));
  }
  return ex;
}

Extraction simplify(const Extraction& ex) {
  Extraction out;
  for (const auto& block : ex.blocks) {
    BlockExpressions b;
    for (const ExprPtr& e : block.outputs) b.outputs.push_back(simplify(e));
    out.blocks.push_back(std::move(b));
  }
  return out;
}

Extraction extract(const Network& snapped) { return simplify(extract_raw(snapped)); }

std::vector<ExprPtr> flatten(const Extraction& ex) {
  std::vector<std::vector<ExprPtr>> defs;
  for (std::size_t b = 0; b + 1 < ex.blocks.size(); ++b) {
    std::vector<ExprPtr> level;
    for (const ExprPtr& e : ex.blocks[b].outputs) level.push_back(simplify(substitute(e, defs)));
    defs.push_back(std::move(level));
  }
  std::vector<ExprPtr> out;
  for (const ExprPtr& e : ex.classes()) out.push_back(simplify(substitute(e, defs)));
  return out;
}

Vector expression_scores(const Network& snapped, const Extraction& ex, std::span<const double> input) {
  Environment env;
  env.push_back(normalizer_of(snapped).forward(input));
  for (const auto& block : ex.blocks) {
    Vector next;
    next.reserve(block.outputs.size());
    for (const ExprPtr& e : block.outputs) next.push_back(evaluate(*e, env));
    env.push_back(std::move(next));
  }
  return env.back();
}

EvalReport eval_snapped(const Network& snapped, const Dataset& data) { return evaluate(snapped, data); }

void write_expressions(std::ostream& out, const Extraction& ex, bool flattened) {
  if (flattened) {
    const auto classes = flatten(ex);
    for (std::size_t i = 0; i < classes.size(); ++i) out << 'c' << i << " = " << render(*classes[i]) << '\n';
    return;
  }
  for (std::size_t b = 0; b + 1 < ex.blocks.size(); ++b) {
    const auto& outs = ex.blocks[b].outputs;
    for (std::size_t j = 0; j < outs.size(); ++j)
      out << 'h' << b + 1 << '_' << j << " = " << render(*outs[j]) << '\n';
  }
  const auto& classes = ex.classes();
  for (std::size_t i = 0; i < classes.size(); ++i) out << 'c' << i << " = " << render(*classes[i]) << '\n';
}

}  // namespace fuzzynet
