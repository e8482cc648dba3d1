#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fuzzynet/extraction.hpp"

using namespace fuzzynet;

namespace {

ExprPtr v(std::size_t i) { return make_var(0, i); }

Network random_fuzzy(std::uint64_t seed, std::size_t inputs, std::size_t classes, std::size_t depth) {
  Rng rng(seed);
  Network net = Network::make_fuzzy({Vector(inputs, -1.0), Vector(inputs, 1.0)}, classes, 4, depth, 0.001, rng);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Layer& l : net.layers())
    if (auto* s = std::get_if<FeatureSelectorLayer>(&l))
      for (double& w : s->weights.data) w = u(rng);
  return net;
}

Environment env_of(std::initializer_list<double> xs) { return {Vector(xs)}; }

}  // namespace

TEST(Simplify, Rules) {
  EXPECT_TRUE(same(*simplify(make_not(make_not(v(2)))), *v(2)));
  EXPECT_TRUE(same(*simplify(make_binop(OperatorKind::And, v(1), make_const(true))), *v(1)));
  EXPECT_TRUE(same(*simplify(make_not(make_binop(OperatorKind::And, v(0), v(1)))),
                   *make_binop(OperatorKind::Nand, v(0), v(1))));
  EXPECT_TRUE(same(*simplify(make_not(make_binop(OperatorKind::Nor, v(0), v(1)))),
                   *make_binop(OperatorKind::Or, v(0), v(1))));
  EXPECT_TRUE(same(*simplify(make_not(make_binop(OperatorKind::Xor, v(0), v(1)))),
                   *make_binop(OperatorKind::Nxor, v(0), v(1))));
  // identity and not through bias pairings
  EXPECT_TRUE(same(*simplify(make_binop(OperatorKind::Nxor, v(3), make_const(true))), *v(3)));
  EXPECT_TRUE(same(*simplify(make_binop(OperatorKind::Nor, v(3), make_const(false))), *make_not(v(3))));
  EXPECT_TRUE(same(*simplify(make_binop(OperatorKind::And, make_const(false), v(3))), *make_const(false)));
  EXPECT_TRUE(same(*simplify(make_sum({v(4)})), *v(4)));
  EXPECT_TRUE(same(*simplify(make_not(make_const(true))), *make_const(false)));
}

TEST(Simplify, ReducesEveryConstantOperand) {
  const OperatorKind ops[] = {OperatorKind::And, OperatorKind::Or,  OperatorKind::Xor,
                              OperatorKind::Nxor, OperatorKind::Nor, OperatorKind::Nand};
  for (OperatorKind op : ops) {
    for (bool c : {false, true}) {
      const ExprPtr e = make_binop(op, v(0), make_const(c));
      const ExprPtr s = simplify(e);
      EXPECT_NE(s->kind, ExprKind::BinOp);
      for (double x : {-1.0, 1.0}) EXPECT_EQ(evaluate(*s, env_of({x})), evaluate(*e, env_of({x})));
    }
  }
}

TEST(Render, Notation) {
  const auto sum = make_sum({make_binop(OperatorKind::Or, v(0), v(3)), make_binop(OperatorKind::Or, v(1), v(5))});
  EXPECT_EQ(render(*sum), "(0 | 3) + (1 | 5)");
  EXPECT_EQ(render(*make_not(v(0))), "¬0");
  const auto x = make_binop(OperatorKind::Xor, make_binop(OperatorKind::And, v(0), v(4)),
                            make_binop(OperatorKind::And, v(8), v(16)));
  EXPECT_EQ(render(*x), "(0 & 4) ⊕ (8 & 16)");
  EXPECT_EQ(render(*make_binop(OperatorKind::Nxor, v(1), v(2))), "¬(1 ⊕ 2)");
  EXPECT_EQ(render(*make_binop(OperatorKind::Nand, v(1), v(2))), "¬(1 & 2)");
  EXPECT_EQ(render(*make_binop(OperatorKind::Nor, make_var(1, 0), v(2))), "¬(h1_0 | 2)");
  EXPECT_EQ(render(*make_sum({})), "()");
  EXPECT_EQ(dump(*sum), "(sum (or (var 0 0) (var 0 3)) (or (var 0 1) (var 0 5)))");
}

TEST(Evaluate, BooleanFidelity) {
  const OperatorKind ops[] = {OperatorKind::And, OperatorKind::Or,  OperatorKind::Xor,
                              OperatorKind::Nxor, OperatorKind::Nor, OperatorKind::Nand};
  for (OperatorKind op : ops) {
    for (const TruthRow& r : boolean_table(op, true)) {
      const double got = evaluate(*make_binop(op, v(0), v(1)), env_of({r.inputs[0], r.inputs[1]}));
      EXPECT_EQ(got, r.output) << to_string(op);
    }
  }
}

TEST(Snap, Parameters) {
  Network net = random_fuzzy(1, 3, 2, 2);
  auto& f = std::get<FuzzyLayer>(net.layers()[3]);
  f.alpha[0] = -0.2;
  f.alpha[1] = -0.5;
  f.alpha[2] = 0.51;
  auto& s = std::get<FeatureSelectorLayer>(net.layers()[4]);
  s.weights.data[0] = 0.03;
  s.weights.data[1] = -0.9;
  const Network snapped = snap_network(net);
  const auto& sf = std::get<FuzzyLayer>(snapped.layers()[3]);
  EXPECT_EQ(sf.alpha[0], 0.0);
  EXPECT_EQ(sf.alpha[1], -1.0);
  EXPECT_EQ(sf.alpha[2], 1.0);
  const auto& ss = std::get<FeatureSelectorLayer>(snapped.layers()[4]);
  EXPECT_EQ(ss.weights.data[0], 0.0);
  EXPECT_EQ(ss.weights.data[1], -1.0);
  EXPECT_TRUE(std::holds_alternative<IdentityLayer>(snapped.layers()[5]));
  EXPECT_EQ(snapped.layers()[1], net.layers()[1]);
  EXPECT_EQ(snap_network(snapped), snapped);
}

TEST(Extract, BiasPairings) {
  // One input: units are (x, TRUE) and (x, FALSE).
  std::vector<Layer> layers = {IdentityLayer{1}, NormalizerLayer{{-1.0}, {1.0}}, AllPairingsLayer(1),
                               FuzzyLayer{{0.0, -1.0}}, FeatureSelectorLayer{Matrix(2, 2, 0.0)}, MaxLayer{2}};
  auto& w = std::get<FeatureSelectorLayer>(layers[4]).weights;
  w(0, 0) = 1;
  w(1, 1) = 1;
  const Extraction ex = extract(Network(layers));
  EXPECT_EQ(render(*ex.classes()[0]), "0");
  EXPECT_EQ(render(*ex.classes()[1]), "¬0");
}

TEST(Extract, DualPathExact) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Network snapped = snap_network(random_fuzzy(seed, 4, 3, 2));
    const Extraction raw = extract_raw(snapped);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 1000; ++i) {
      Vector x(4);
      for (double& e : x) e = u(rng);
      ASSERT_EQ(expression_scores(snapped, raw, x), snapped.scores(x));
    }
  }
}

TEST(Extract, SimplificationSound) {
  const Network snapped = snap_network(random_fuzzy(7, 4, 3, 2));
  const Extraction raw = extract_raw(snapped);
  const Extraction simple = simplify(raw);
  const auto flat = flatten(simple);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Vector x(4);
    for (double& e : x) e = i < 16 ? ((i >> (&e - x.data())) & 1 ? 1.0 : -1.0) : u(rng);
    const Vector a = expression_scores(snapped, raw, x);
    const Vector b = expression_scores(snapped, simple, x);
    Environment env{NormalizerLayer{Vector(4, -1.0), Vector(4, 1.0)}.forward(x)};
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (i < 16) {
        EXPECT_EQ(a[k], b[k]);
      } else {
        EXPECT_NEAR(a[k], b[k], 1e-12 * std::max(1.0, std::abs(a[k])));
      }
      EXPECT_NEAR(evaluate(*flat[k], env), a[k], 1e-9 * std::max(1.0, std::abs(a[k])));
    }
  }
}

TEST(Extract, NoConstOperandsOrDoubleNegation) {
  const Extraction ex = extract(snap_network(random_fuzzy(3, 5, 2, 2)));
  std::function<void(const Expr&)> walk = [&](const Expr& e) {
    if (e.kind == ExprKind::Not) EXPECT_NE(e.children[0]->kind, ExprKind::Not);
    if (e.kind == ExprKind::BinOp)
      for (const auto& c : e.children) EXPECT_NE(c->kind, ExprKind::Const);
    for (const auto& c : e.children) walk(*c);
  };
  for (const auto& b : ex.blocks)
    for (const auto& e : b.outputs) walk(*e);
}

TEST(Extract, RejectsUnsnapped) {
  EXPECT_THROW(extract(random_fuzzy(1, 3, 2, 1)), std::invalid_argument);
  Rng rng(1);
  const Network dnn = Network::make_dnn({Vector(2, -1.0), Vector(2, 1.0)}, 2, 3, 1, rng);
  EXPECT_THROW(snap_network(dnn), std::invalid_argument);
}

TEST(Extract, WriteExpressions) {
  const Extraction ex = extract(snap_network(random_fuzzy(2, 3, 2, 2)));
  std::ostringstream per_block, flat;
  write_expressions(per_block, ex, false);
  write_expressions(flat, ex, true);
  EXPECT_NE(per_block.str().find("h1_0 = "), std::string::npos);
  EXPECT_NE(per_block.str().find("c1 = "), std::string::npos);
  EXPECT_EQ(flat.str().find("h1_"), std::string::npos);
}

TEST(EvalSnapped, Idempotent) {
  Dataset d;
  d.class_names = {"a", "b", "c"};
  d.feature_names = {"0", "1", "2", "3"};
  d.features = Matrix(50, 4);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& x : d.features.data) x = u(rng);
  for (int i = 0; i < 50; ++i) d.labels.push_back(i % 3);
  const Network s = snap_network(random_fuzzy(4, 4, 3, 2));
  EXPECT_EQ(eval_snapped(s, d), eval_snapped(snap_network(s), d));
}
