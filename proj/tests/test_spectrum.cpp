#include <doctest.h>

#include <random>

#include "twstab/spectrum.hpp"

using namespace twstab;

namespace {
const ModelParams P = ModelParams::aedes_aegypti();
constexpr double C = 0.027;
}  // namespace

TEST_CASE("dispersion vertices and identities") {
  const auto v = dispersion(P, C, 0.0);
  CHECK(v[0].real() == doctest::Approx(-0.98218).epsilon(1e-10));
  CHECK(v[1].real() == doctest::Approx(-0.0058835).epsilon(1e-4));
  CHECK(v[2].real() == doctest::Approx(-1.0364).epsilon(1e-4));
  CHECK(v[3].real() == doctest::Approx(-0.0024296).epsilon(1e-4));
  for (double k : {-3.0, -0.5, 1.0, 7.0}) {
    const auto l = dispersion(P, C, k);
    for (int i = 0; i < 4; ++i) {
      CHECK(l[i].imag() == doctest::Approx(C * k));
      CHECK(l[i].real() == doctest::Approx(v[i].real() - k * k));
    }
  }
}

TEST_CASE("morse index") {
  Mat4c D = Mat4c::Zero();
  D.diagonal() << 1.0, -1.0, 2.0, -3.0;
  CHECK(morse_index(D).count == 2);
  CHECK(morse_index(D).hyperbolic);
  const ModelParams p = P.with_speed(C);
  CHECK(morse_index(asymptotic_matrix(End::Minus, p, 1.0)).count == 2);
  CHECK(morse_index(asymptotic_matrix(End::Plus, p, -0.004)).count == 1);
  Mat4c Z = D;
  Z(0, 0) = 1e-14;
  CHECK_FALSE(morse_index(Z).hyperbolic);
}

TEST_CASE("classification examples") {
  auto s = classify(P, C, 1.0);
  CHECK(s.verdict == Verdict::Resolvent);
  CHECK(s.i_minus == 2);
  CHECK(s.i_plus == 2);
  s = classify(P, C, -0.004);
  CHECK(s.verdict == Verdict::Essential);
  CHECK(s.i_minus == 2);
  CHECK(s.i_plus == 1);
  s = classify(P, C, -0.01);
  CHECK(s.verdict == Verdict::Absolute);
}

TEST_CASE("edges") {
  CHECK(rightmost_essential(P, C) == doctest::Approx(0.0162 * (1 / 1.0526 - 1.1)).epsilon(1e-14));
  ModelParams a1 = P;
  a1.alpha = 1.0;
  CHECK(rightmost_essential(a1, C) == doctest::Approx(-0.0008096).epsilon(1e-4));
  CHECK(absolute_edge(P, C) == doctest::Approx(-0.0026118).epsilon(1e-4));
  CHECK(absolute_edge(P, 0.0) == doctest::Approx(rightmost_essential(P, 0.0)));
}

TEST_CASE("points on dispersion curves are essential") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> K(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const auto l = dispersion(P, C, K(rng));
    for (int b = 0; b < 4; ++b) {
      const auto s = classify(P, C, l[b]);
      CHECK(s.verdict == Verdict::Essential);
      CHECK((b < 2 ? s.center_minus : s.center_plus));
    }
  }
}

TEST_CASE("crossing one curve changes one index by one") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> K(0.05, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double k = K(rng);
    const auto l = dispersion(P, C, k);
    const int b = i % 4;
    // Horizontal line through the curve point; step across it in Re.
    const auto left = classify(P, C, l[b] - 1e-3);
    const auto right = classify(P, C, l[b] + 1e-3);
    const int dm = std::abs(left.i_minus - right.i_minus);
    const int dp = std::abs(left.i_plus - right.i_plus);
    CHECK(dm + dp == 1);
  }
}

TEST_CASE("rightmost essential against a dense k grid") {
  double best = -1e300;
  for (long i = -50000; i <= 50000; ++i) {
    const auto l = dispersion(P, C, i * 1e-3);
    for (const cplx& x : l) best = std::max(best, x.real());
  }
  CHECK(std::abs(best - rightmost_essential(P, C)) <= 1e-9);
}

TEST_CASE("edge ordering for random valid parameters") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> F(1.001, 3.0), mu(1e-4, 0.3), sh(0.01, 0.99), al(1.0, 1.5), c(1e-3, 1.0);
  int n = 0;
  while (n < 500) {
    ModelParams p;
    p.F = F(rng);
    p.mu = mu(rng);
    p.s_h = sh(rng);
    p.alpha = al(rng);
    try {
      p.validate();
    } catch (...) {
      continue;
    }
    const double cc = c(rng);
    CHECK(absolute_edge(p, cc) < rightmost_essential(p, cc));
    // The slow vertex at -inf is -mu(1 - alpha F (1 - s_h)); it is the only
    // one that can be positive, exactly when e- is unstable to uninfected invasion.
    const double r = rightmost_essential(p, cc);
    const bool bistable = p.alpha * p.F * (1 - p.s_h) < 1;
    CHECK((r < 0.0) == bistable);
    if (bistable) CHECK(r == doctest::Approx(std::max(-p.mu * (1 - p.alpha * p.F * (1 - p.s_h)), p.mu * (1 / p.F - p.alpha))));
    ++n;
  }
}
