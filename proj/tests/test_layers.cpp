#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "fuzzynet/layers.hpp"

using namespace fuzzynet;

TEST(AllPairings, OrderForThreeInputs) {
  AllPairingsLayer p(3);
  const double in[] = {0.1, 0.2, 0.3};
  const PairStream s = p.forward(in);
  const Vector left = {0.1, 0.1, 0.2, 0.1, 0.2, 0.3, 0.1, 0.2, 0.3};
  const Vector right = {0.2, 0.3, 0.3, 1, 1, 1, -1, -1, -1};
  EXPECT_EQ(s.left, left);
  EXPECT_EQ(s.right, right);
}

TEST(AllPairings, WidthLaw) {
  EXPECT_EQ(AllPairingsLayer(4).output_width(), 14u);
  EXPECT_EQ(AllPairingsLayer(1).output_width(), 2u);
  for (std::size_t n = 1; n <= 20; ++n) {
    AllPairingsLayer p(n);
    std::set<std::pair<std::size_t, std::int64_t>> seen;
    for (const PairIndex& i : p.index()) {
      if (!i.is_bias()) EXPECT_LT(i.left, static_cast<std::size_t>(i.right));
      seen.insert({i.left, i.right});
    }
    EXPECT_EQ(seen.size(), p.output_width());
    EXPECT_EQ(p.output_width(), n * (n - 1) / 2 + 2 * n);
  }
}

TEST(AllPairings, Backward) {
  AllPairingsLayer two(2);
  PairStream ones{Vector(5, 1.0), Vector(5, 1.0)};
  // (0,1) routes both sides; bias slots only reach the left input.
  EXPECT_EQ(two.backward(ones), (Vector{3, 3}));

  AllPairingsLayer three(3);
  PairStream one_pair{Vector(9, 0.0), Vector(9, 0.0)};
  one_pair.left[0] = 1;
  one_pair.right[0] = 1;
  EXPECT_EQ(three.backward(one_pair), (Vector{1, 1, 0}));
  EXPECT_EQ(three.backward(PairStream{Vector(9, 0.0), Vector(9, 0.0)}), Vector(3, 0.0));
  EXPECT_THROW(three.forward(Vector{1.0, 2.0}), std::invalid_argument);
}

TEST(Fuzzy, Forward) {
  FuzzyLayer f{{1.0, 0.0, 1.0}, Variant::Absolute};
  const PairStream s{{1, 0.4, 0.5}, {1, 1, 0.5}};
  EXPECT_EQ(f.forward(s), (Vector{1, 0.4, 0.125}));
  EXPECT_THROW(f.forward(PairStream{{1}, {1}}), std::invalid_argument);
}

TEST(Fuzzy, Backward) {
  FuzzyLayer f{{0.7, -0.5}, Variant::Absolute};
  const PairStream s{{1, 0.3}, {-1, 0.7}};
  Vector grad(2, 0.0);
  const PairStream in = f.backward(s, Vector{2.5, 1.0}, grad);
  EXPECT_EQ(grad[0], 0.0);
  const double h = 1e-5;
  auto fd = [&](auto g, double v) { return (g(v + h) - g(v - h)) / (2 * h); };
  const double da = fd([](double a) { return fuzzy(0.3, 0.7, a); }, -0.5);
  const double dx = fd([](double x) { return fuzzy(x, 0.7, -0.5); }, 0.3);
  const double dy = fd([](double y) { return fuzzy(0.3, y, -0.5); }, 0.7);
  EXPECT_NEAR(grad[1], da, 1e-5 * std::abs(da));
  EXPECT_NEAR(in.left[1], dx, 1e-5 * std::abs(dx));
  EXPECT_NEAR(in.right[1], dy, 1e-5 * std::abs(dy));

  Vector zero(2, 0.0);
  const PairStream none = f.backward(s, Vector{0, 0}, zero);
  EXPECT_EQ(zero, Vector(2, 0.0));
  EXPECT_EQ(none.left, Vector(2, 0.0));
}

TEST(Fuzzy, RandomInitAvoidsZone) {
  Rng rng(9);
  const FuzzyLayer f = FuzzyLayer::random(5000, 0.2, rng);
  for (double a : f.alpha) {
    EXPECT_GE(std::abs(a), 0.2);
    EXPECT_LE(std::abs(a), 1.0);
  }
}

TEST(AlphaUpdate, Examples) {
  double a = 0.01;
  const double g = 5.0;
  update_alphas(std::span<double>(&a, 1), std::span<const double>(&g, 1), 0.01, 0.001);
  EXPECT_LE(a, -0.001);

  double b = 0.5;
  const double zero = 0.0;
  update_alphas(std::span<double>(&b, 1), std::span<const double>(&zero, 1), 0.01, 0.001);
  EXPECT_EQ(b, 0.5);

  // Step lands in the zone: reflect the pre-step value.
  double c = 0.01;
  const double g2 = 0.95;  // 0.01 - 0.0095 = 0.0005
  update_alphas(std::span<double>(&c, 1), std::span<const double>(&g2, 1), 0.01, 0.001);
  EXPECT_EQ(c, -0.01);

  // Reflection still inside the zone: push to -sign(pre) * eps.
  double d = 0.0005;
  update_alphas(std::span<double>(&d, 1), std::span<const double>(&zero, 1), 0.01, 0.001);
  EXPECT_EQ(d, -0.001);
}

TEST(AlphaUpdate, ZoneInvariant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> g(-1, 1);
  std::uniform_real_distribution<double> start(-0.01, 0.01);
  const double eps = 0.001;
  for (int i = 0; i < 2000; ++i) {
    double a = i == 0 ? -0.0005 : start(rng);
    for (int k = 0; k < 20; ++k) {
      const double grad = g(rng);
      update_alphas(std::span<double>(&a, 1), std::span<const double>(&grad, 1), 0.01, eps);
      ASSERT_GE(std::abs(a), eps);
    }
  }
}

TEST(FeatureSelector, Forward) {
  FeatureSelectorLayer zero{Matrix(2, 3, 0.0)};
  EXPECT_EQ(zero.forward(Vector{1, 2, 3}), Vector(2, 0.0));
  FeatureSelectorLayer neg{Matrix(1, 1, -1.0)};
  EXPECT_EQ(neg.forward(Vector{1.0}), Vector{-1.0});
  FeatureSelectorLayer half{Matrix(1, 2, 0.5)};
  EXPECT_EQ(half.forward(Vector{1, -1}), Vector{0.0});
  const auto u = FeatureSelectorLayer::uniform(4, 3);
  for (double w : u.weights.data) EXPECT_EQ(w, 0.25);
}

TEST(FeatureSelector, Update) {
  Vector w = {1.0, 0.5, 0.0};
  const Vector g = {-1.0, 0.0, 0.0};
  update_selector_weights(w, g, 0.01, 0.0001);
  EXPECT_EQ(w[0], 1.0);
  EXPECT_DOUBLE_EQ(w[1], 0.499999);
  EXPECT_EQ(w[2], 0.0);
}

TEST(FeatureSelector, ClampInvariant) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> g(-50, 50);
  Vector w(64, 0.3);
  Vector grad(64);
  for (int k = 0; k < 500; ++k) {
    for (double& v : grad) v = g(rng);
    update_selector_weights(w, grad, 0.1, 0.0001);
    for (double v : w) ASSERT_LE(std::abs(v), 1.0);
  }
}

TEST(FeatureSelector, BackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  FeatureSelectorLayer s{Matrix(3, 4)};
  for (double& w : s.weights.data) w = u(rng);
  Vector x(4), blame(3);
  for (double& v : x) v = u(rng);
  for (double& v : blame) v = u(rng);
  Vector grad(12, 0.0);
  const Vector in = s.backward(x, blame, grad);
  for (std::size_t o = 0; o < 3; ++o)
    for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(grad[o * 4 + i], blame[o] * x[i]);
  for (std::size_t i = 0; i < 4; ++i) {
    double expect = 0;
    for (std::size_t o = 0; o < 3; ++o) expect += blame[o] * s.weights(o, i);
    EXPECT_NEAR(in[i], expect, 1e-15);
  }
}

TEST(Tanh, ForwardBackward) {
  TanhLayer t{2};
  EXPECT_EQ(t.forward(Vector{0, 0}), Vector(2, 0.0));
  EXPECT_NEAR(t.forward(Vector{50, 0})[0], 1.0, 1e-15);
  EXPECT_EQ(t.backward(Vector{0, 0}, Vector{1, 1}), (Vector{1, 1}));
}

TEST(Linear, ForwardAndGradient) {
  LinearLayer zero{Matrix(2, 2, 0.0), Vector(2, 0.0)};
  EXPECT_EQ(zero.forward(Vector{3, 4}), Vector(2, 0.0));
  LinearLayer id{Matrix(2, 2, 0.0), Vector(2, 0.0)};
  id.weights(0, 0) = id.weights(1, 1) = 1;
  EXPECT_EQ(id.forward(Vector{3, 4}), (Vector{3, 4}));

  Rng rng(12);
  LinearLayer l = LinearLayer::random(3, 4, rng);
  for (double w : l.weights.data) EXPECT_LE(std::abs(w), 1 / std::sqrt(3.0));
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& b : l.bias) b = u(rng);
  const Vector x = {0.3, -0.2, 0.9};
  const Vector target = {0.1, 0.2, -0.3, 0.4};
  auto loss = [&] {
    const Vector o = l.forward(x);
    double s = 0;
    for (std::size_t k = 0; k < 4; ++k) s += 0.5 * (o[k] - target[k]) * (o[k] - target[k]);
    return s;
  };
  const Vector o = l.forward(x);
  Vector blame(4);
  for (std::size_t k = 0; k < 4; ++k) blame[k] = o[k] - target[k];
  Vector grad(16, 0.0);
  l.backward(x, blame, grad);
  const double h = 1e-5;
  for (std::size_t i = 0; i < 16; ++i) {
    double& p = i < 12 ? l.weights.data[i] : l.bias[i - 12];
    const double saved = p;
    p = saved + h;
    const double up = loss();
    p = saved - h;
    const double down = loss();
    p = saved;
    const double fd = (up - down) / (2 * h);
    EXPECT_LE(std::abs(fd - grad[i]) / std::max({std::abs(fd), std::abs(grad[i]), 1e-6}), 1e-5);
  }
}

TEST(Max, Predict) {
  MaxLayer m{2};
  EXPECT_EQ(m.predict(Vector{0.2, 0.9}), 1u);
  EXPECT_EQ(m.predict(Vector{0.5, 0.5}), 0u);
  EXPECT_THROW(argmax(Vector{}), std::invalid_argument);
}

TEST(Normalizer, FitAndClamp) {
  Matrix m(2, 2);
  m(0, 0) = 2;
  m(1, 0) = 4;
  m(0, 1) = 7;
  m(1, 1) = 7;
  const NormalizerLayer n = NormalizerLayer::fit(m);
  EXPECT_EQ(n.min[0], 2);
  EXPECT_EQ(n.max[0], 4);
  EXPECT_EQ(n.forward(Vector{3, 7}), (Vector{0, 0}));
  EXPECT_EQ(n.forward(Vector{10, -100}), (Vector{1, 0}));
  EXPECT_EQ(n.forward(Vector{-10, 100}), (Vector{-1, 0}));
}
