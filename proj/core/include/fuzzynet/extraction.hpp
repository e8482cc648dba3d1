#pragma once

// Symbolic view of a trained fuzzy network: snap parameters to whole values,
// read the snapped network back as boolean expressions, simplify and print.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fuzzynet/dataio.hpp"
#include "fuzzynet/network.hpp"
#include "fuzzynet/training.hpp"

namespace fuzzynet {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Const, Var, Not, BinOp, Sum };

/// Immutable expression node. Var(level, index) names input `index` of
/// block `level`: level 0 is the normalized network input, level b > 0 the
/// b-th hidden block output.
struct Expr {
  ExprKind kind = ExprKind::Const;
  bool value = false;            // Const
  std::size_t level = 0;         // Var
  std::size_t index = 0;         // Var
  OperatorKind op = OperatorKind::And;  // BinOp
  std::vector<ExprPtr> children;  // Not: 1, BinOp: 2, Sum: any
};

ExprPtr make_const(bool value);
ExprPtr make_var(std::size_t level, std::size_t index);
ExprPtr make_not(ExprPtr child);
/// op must be one of and, or, xor, nxor, nor, nand.
ExprPtr make_binop(OperatorKind op, ExprPtr left, ExprPtr right);
ExprPtr make_sum(std::vector<ExprPtr> children);

/// Structural equality.
bool same(const Expr& a, const Expr& b);

/// Values of every block's inputs; env[level][index].
using Environment = std::vector<Vector>;

/// Const is +-1, Not is negation, and/nor/nxor are fuzzy() at alpha 1/-1/0,
/// or/xor/nand their negations, Sum adds its children left to right from 0.
double evaluate(const Expr& e, const Environment& env);

/// Rewrites to a fixed point: double negation, Not folded into a BinOp,
/// constant operands and Not(Const) reduced, single-child Sum unwrapped.
ExprPtr simplify(const ExprPtr& e);

/// Infix form: variables as integers (hidden ones as h<level>_<index>),
/// prefix ¬, & | ⊕, nand/nor/nxor as ¬(...), sums joined by " + ".
/// An empty sum prints as "()".
std::string render(const Expr& e);

/// Nested parenthesized dump, e.g. (sum (or (var 0 0) (var 0 3))).
std::string dump(const Expr& e);

/// Copy of a fuzzy network with every alpha and selector weight rounded to
/// -1, 0 or 1 (ties away from zero) and tanh layers replaced by identity.
Network snap_network(const Network& net);

/// Expressions of one block: outputs[j] defines output j of the block.
struct BlockExpressions {
  std::vector<ExprPtr> outputs;
};

/// Expressions read off a snapped network. blocks.back() holds one
/// expression per class.
struct Extraction {
  std::vector<BlockExpressions> blocks;

  const std::vector<ExprPtr>& classes() const { return blocks.back().outputs; }
};

/// Throws std::invalid_argument if net is not a snapped fuzzy network.
Extraction extract_raw(const Network& snapped);
Extraction simplify(const Extraction& ex);
Extraction extract(const Network& snapped);

/// Class expressions with every hidden variable replaced by its definition.
std::vector<ExprPtr> flatten(const Extraction& ex);

/// Class scores computed from the expressions for a raw (unnormalized)
/// input row, using the snapped network's normalizer.
Vector expression_scores(const Network& snapped, const Extraction& ex, std::span<const double> input);

/// Misclassification of the snapped network on data.
EvalReport eval_snapped(const Network& snapped, const Dataset& data);

/// "c<i> = <expr>" per class, preceded by "h<b>_<j> = <expr>" definitions
/// for each hidden block unless flattened.
void write_expressions(std::ostream& out, const Extraction& ex, bool flattened);

}  // namespace fuzzynet
