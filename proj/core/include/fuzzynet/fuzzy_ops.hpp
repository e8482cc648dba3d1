#pragma once

// Fuzzy logic operators over the remapped domain [-1, 1] (false = -1,
// true = +1) and the parameterized operator that interpolates among
// nor (alpha = -1), nxor (alpha = 0) and and (alpha = +1).
//
// Everything here is pure and stateless.

#include <span>
#include <string_view>
#include <vector>

namespace fuzzynet {

inline constexpr double kTrue = 1.0;
inline constexpr double kFalse = -1.0;

/// The eight classic fuzzy operators plus the two bias constants.
enum class OperatorKind {
  Identity,
  Not,
  Or,
  Xor,
  And,
  Nor,
  Nxor,
  Nand,
  TrueConst,
  FalseConst,
};

inline constexpr OperatorKind kAllOperators[] = {
    OperatorKind::Identity, OperatorKind::Not,  OperatorKind::Or,
    OperatorKind::Xor,      OperatorKind::And,  OperatorKind::Nor,
    OperatorKind::Nxor,     OperatorKind::Nand, OperatorKind::TrueConst,
    OperatorKind::FalseConst,
};

/// The eight operators that take inputs (no constants).
inline constexpr OperatorKind kLogicOperators[] = {
    OperatorKind::Identity, OperatorKind::Not, OperatorKind::Or,
    OperatorKind::Xor,      OperatorKind::And, OperatorKind::Nor,
    OperatorKind::Nxor,     OperatorKind::Nand,
};

std::string_view to_string(OperatorKind op);
OperatorKind operator_from_string(std::string_view name);

/// Number of inputs the operator consumes (0, 1 or 2).
int arity(OperatorKind op);

/// Which interpolating operator family a fuzzy unit uses.
///
/// Absolute is the production form (|alpha| normalization). Quadratic
/// normalizes by alpha^2 + 1 and is kept for comparison; SignedRoot takes a
/// signed square root of the product and is forward-only.
enum class Variant { Quadratic, Absolute, SignedRoot };

std::string_view to_string(Variant v);
Variant variant_from_string(std::string_view name);

// ---------------------------------------------------------------------------
// Interpolating operators

/// (x+a)(y+a)/(|a|+1) - |a|
double fuzzy(double x, double y, double alpha);

/// (x+a)(y+a)/(a^2+1) - a^2
double fuzzy_quadratic(double x, double y, double alpha);

/// sign(t) sqrt(|t|) - |a| with t = (x+a)(y+a); -|a| when t == 0.
double fuzzy_signed_root(double x, double y, double alpha);

/// n-ary signed root: sign(t) |t|^(1/n) - |a| with t = prod(x_i + a).
/// Throws std::invalid_argument on an empty input.
double fuzzy_signed_root_n(std::span<const double> xs, double alpha);

double evaluate(Variant v, double x, double y, double alpha);

// ---------------------------------------------------------------------------
// Analytic derivatives of fuzzy()

double d_dx(double x, double y, double alpha);
double d_dy(double x, double y, double alpha);

/// Discontinuous at alpha == 0; throws std::domain_error there. Callers own
/// the zero-crossing policy.
double d_dalpha(double x, double y, double alpha);

/// Partial derivatives of a trainable variant (Absolute or Quadratic).
struct Partials {
  double dx;
  double dy;
  double dalpha;
};

/// Throws std::invalid_argument for SignedRoot, std::domain_error for the
/// Absolute variant at alpha == 0.
Partials partials(Variant v, double x, double y, double alpha);

// ---------------------------------------------------------------------------
// Boolean tables and snapping

struct TruthRow {
  std::vector<double> inputs;
  double output;
};

/// Full truth table of an operator, computed from its closed-form
/// polynomial over {0,1} or, when remapped, over {-1,1}.
std::vector<TruthRow> boolean_table(OperatorKind op, bool remapped);

/// The operator realized as a composition of fuzzy() units with integer
/// alpha and the bias constants. y is ignored for unary operators and both
/// inputs are ignored for constants.
double compose(OperatorKind op, double x, double y);

/// Nearest of {-1, 0, 1}; ties at |a| = 0.5 round away from zero.
int snap_value(double value);

/// snap_value(alpha) mapped to Nor / Nxor / And.
OperatorKind snap_alpha(double alpha);

/// The integer alpha of Nor (-1), Nxor (0) and And (+1).
/// Throws std::invalid_argument for any other operator.
int alpha_of(OperatorKind op);

}  // namespace fuzzynet
