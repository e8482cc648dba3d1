#include "fuzzynet/fuzzy_ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fuzzynet {

namespace {

double sign(double v) { return (v > 0.0) - (v < 0.0); }

// Closed-form operators over {0,1}.
double classic(OperatorKind op, double x, double y) {
  switch (op) {
    case OperatorKind::Identity: return x;
    case OperatorKind::Not: return 1.0 - x;
    case OperatorKind::Or: return 1.0 - (1.0 - x) * (1.0 - y);
    case OperatorKind::Xor: return x + y - 2.0 * x * y;
    case OperatorKind::And: return x * y;
    case OperatorKind::Nor: return (1.0 - x) * (1.0 - y);
    case OperatorKind::Nxor: return 1.0 - (x + y - 2.0 * x * y);
    case OperatorKind::Nand: return 1.0 - x * y;
    case OperatorKind::TrueConst: return 1.0;
    case OperatorKind::FalseConst: return 0.0;
  }
  throw std::invalid_argument("unknown operator");
}

// Closed-form operators over {-1,1}.
double remapped(OperatorKind op, double x, double y) {
  switch (op) {
    case OperatorKind::Identity: return x;
    case OperatorKind::Not: return -x;
    case OperatorKind::Or: return -(x - 1.0) * (y - 1.0) / 2.0 + 1.0;
    case OperatorKind::Xor: return -x * y;
    case OperatorKind::And: return (x + 1.0) * (y + 1.0) / 2.0 - 1.0;
    case OperatorKind::Nor: return (x - 1.0) * (y - 1.0) / 2.0 - 1.0;
    case OperatorKind::Nxor: return x * y;
    case OperatorKind::Nand: return -(x + 1.0) * (y + 1.0) / 2.0 + 1.0;
    case OperatorKind::TrueConst: return 1.0;
    case OperatorKind::FalseConst: return -1.0;
  }
  throw std::invalid_argument("unknown operator");
}

}  // namespace

std::string_view to_string(OperatorKind op) {
  switch (op) {
    case OperatorKind::Identity: return "identity";
    case OperatorKind::Not: return "not";
    case OperatorKind::Or: return "or";
    case OperatorKind::Xor: return "xor";
    case OperatorKind::And: return "and";
    case OperatorKind::Nor: return "nor";
    case OperatorKind::Nxor: return "nxor";
    case OperatorKind::Nand: return "nand";
    case OperatorKind::TrueConst: return "true";
    case OperatorKind::FalseConst: return "false";
  }
  return "?";
}

OperatorKind operator_from_string(std::string_view name) {
  for (OperatorKind op : kAllOperators) {
    if (to_string(op) == name) return op;
  }
  throw std::invalid_argument("unknown operator: " + std::string(name));
}

int arity(OperatorKind op) {
  switch (op) {
    case OperatorKind::TrueConst:
    case OperatorKind::FalseConst: return 0;
    case OperatorKind::Identity:
    case OperatorKind::Not: return 1;
    default: return 2;
  }
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Quadratic: return "quadratic";
    case Variant::Absolute: return "absolute";
    case Variant::SignedRoot: return "signed-root";
  }
  return "?";
}

Variant variant_from_string(std::string_view name) {
  if (name == "quadratic" || name == "eq1") return Variant::Quadratic;
  if (name == "absolute" || name == "eq2") return Variant::Absolute;
  if (name == "signed-root" || name == "eq3") return Variant::SignedRoot;
  throw std::invalid_argument("unknown operator variant: " + std::string(name));
}

double fuzzy(double x, double y, double alpha) {
  const double a = std::abs(alpha);
  return (x + alpha) * (y + alpha) / (a + 1.0) - a;
}

double fuzzy_quadratic(double x, double y, double alpha) {
  const double a2 = alpha * alpha;
  return (x + alpha) * (y + alpha) / (a2 + 1.0) - a2;
}

double fuzzy_signed_root(double x, double y, double alpha) {
  const double t = (x + alpha) * (y + alpha);
  return sign(t) * std::sqrt(std::abs(t)) - std::abs(alpha);
}

double fuzzy_signed_root_n(std::span<const double> xs, double alpha) {
  if (xs.empty()) throw std::invalid_argument("fuzzy_signed_root_n: empty input");
  double t = 1.0;
  for (double x : xs) t *= x + alpha;
  const double n = static_cast<double>(xs.size());
  return sign(t) * std::pow(std::abs(t), 1.0 / n) - std::abs(alpha);
}

double evaluate(Variant v, double x, double y, double alpha) {
  switch (v) {
    case Variant::Quadratic: return fuzzy_quadratic(x, y, alpha);
    case Variant::Absolute: return fuzzy(x, y, alpha);
    case Variant::SignedRoot: return fuzzy_signed_root(x, y, alpha);
  }
  throw std::invalid_argument("unknown variant");
}

double d_dx(double /*x*/, double y, double alpha) {
  return (y + alpha) / (std::abs(alpha) + 1.0);
}

double d_dy(double x, double /*y*/, double alpha) {
  return (x + alpha) / (std::abs(alpha) + 1.0);
}

double d_dalpha(double x, double y, double alpha) {
  if (alpha == 0.0) throw std::domain_error("d_dalpha is undefined at alpha = 0");
  const double a = std::abs(alpha);
  return (a * (x + y) - alpha * (x * y + 1.0)) / (a * (a + 1.0) * (a + 1.0));
}

Partials partials(Variant v, double x, double y, double alpha) {
  switch (v) {
    case Variant::Absolute:
      return {d_dx(x, y, alpha), d_dy(x, y, alpha), d_dalpha(x, y, alpha)};
    case Variant::Quadratic: {
      const double q = alpha * alpha + 1.0;
      const double p = (x + alpha) * (y + alpha);
      const double da = ((x + y + 2.0 * alpha) * q - 2.0 * alpha * p) / (q * q) - 2.0 * alpha;
      return {(y + alpha) / q, (x + alpha) / q, da};
    }
    case Variant::SignedRoot:
      break;
  }
  throw std::invalid_argument("signed-root variant is forward-only");
}

std::vector<TruthRow> boolean_table(OperatorKind op, bool remap) {
  const double lo = remap ? -1.0 : 0.0;
  const double hi = 1.0;
  auto f = [&](double x, double y) { return remap ? remapped(op, x, y) : classic(op, x, y); };
  std::vector<TruthRow> rows;
  switch (arity(op)) {
    case 0:
      rows.push_back({{}, f(0.0, 0.0)});
      break;
    case 1:
      for (double x : {lo, hi}) rows.push_back({{x}, f(x, 0.0)});
      break;
    default:
      for (double x : {lo, hi})
        for (double y : {lo, hi}) rows.push_back({{x, y}, f(x, y)});
  }
  return rows;
}

double compose(OperatorKind op, double x, double y) {
  switch (op) {
    case OperatorKind::Identity: return fuzzy(kTrue, x, 0.0);
    case OperatorKind::Not: return fuzzy(kFalse, x, 0.0);
    case OperatorKind::Or: return fuzzy(kFalse, fuzzy(x, y, -1.0), 0.0);
    case OperatorKind::Xor: return fuzzy(kFalse, fuzzy(x, y, 0.0), 0.0);
    case OperatorKind::And: return fuzzy(x, y, 1.0);
    case OperatorKind::Nor: return fuzzy(x, y, -1.0);
    case OperatorKind::Nxor: return fuzzy(x, y, 0.0);
    case OperatorKind::Nand: return fuzzy(kFalse, fuzzy(x, y, 1.0), 0.0);
    case OperatorKind::TrueConst: return kTrue;
    case OperatorKind::FalseConst: return kFalse;
  }
  throw std::invalid_argument("unknown operator");
}

int snap_value(double value) {
  if (value >= 0.5) return 1;
  if (value <= -0.5) return -1;
  return 0;
}

OperatorKind snap_alpha(double alpha) {
  switch (snap_value(alpha)) {
    case -1: return OperatorKind::Nor;
    case 1: return OperatorKind::And;
    default: return OperatorKind::Nxor;
  }
}

int alpha_of(OperatorKind op) {
  switch (op) {
    case OperatorKind::Nor: return -1;
    case OperatorKind::Nxor: return 0;
    case OperatorKind::And: return 1;
    default: throw std::invalid_argument("operator has no fuzzy alpha: " + std::string(to_string(op)));
  }
}

}  // namespace fuzzynet
