#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "twstab/error.hpp"
#include "twstab/model.hpp"
#include "twstab/profile.hpp"

using namespace twstab;

TEST_CASE("reference wavespeed and residual") {
  const WaveProfile& w = fixture::reference_profile();
  CHECK(w.c_star >= 0.0255);
  CHECK(w.c_star <= 0.0285);
  CHECK(w.params.c == w.c_star);
  CHECK(w.residual_norm <= 1e-9);
  CHECK(w.L == 200.0);
  CHECK(w.size() == 4001);
}

TEST_CASE("alpha = 1 wavespeed") {
  const WaveProfile& w = fixture::alpha_one_profile();
  CHECK(w.c_star == doctest::Approx(0.050).epsilon(0.1));
}

TEST_CASE("boundary conditions at the domain ends") {
  const WaveProfile& w = fixture::reference_profile();
  const auto [em, ep] = slow_rates(w.params, w.c_star);
  const std::size_t n = w.size() - 1;
  // Tail amplitudes are fixed by the Dirichlet conditions.
  CHECK(w.v_hat[0] == doctest::Approx(std::exp(-em * w.L)).epsilon(1e-9));
  CHECK(w.u_hat[n] == doctest::Approx(std::exp(ep * w.L)).epsilon(1e-9));
  CHECK(std::abs(w.u_hat[0] - w.params.e_minus().u) <= 1e-5);
  CHECK(std::abs(w.v_hat[n] - w.params.e_plus().v) <= 1e-5);
  CHECK(w.du_hat[n] == doctest::Approx(ep * w.u_hat[n]).epsilon(1e-8));
}

TEST_CASE("decay rates match slow eigenvalues") {
  const WaveProfile& w = fixture::reference_profile();
  const DecayRates r = decay_rates(w);
  const auto [em, ep] = slow_rates(w.params, w.c_star);
  CHECK(r.v_minus == doctest::Approx(em).epsilon(0.02));
  CHECK(r.u_minus == doctest::Approx(em).epsilon(0.02));
  CHECK(r.u_plus == doctest::Approx(-ep).epsilon(0.02));
  CHECK(r.v_plus == doctest::Approx(-ep).epsilon(0.02));
  CHECK(em == doctest::Approx(0.0644).epsilon(0.02));
  CHECK(-ep == doctest::Approx(0.0646).epsilon(0.02));
}

TEST_CASE("decay fit recovers pure exponentials") {
  const ModelParams p = fixture::reference_params();
  WaveProfile w;
  w.params = p.with_speed(0.03);
  w.c_star = 0.03;
  w.L = 200.0;
  const double k = 0.1, um = p.e_minus().u, vp = p.e_plus().v;
  for (int i = 0; i <= 4000; ++i) {
    const double z = -200.0 + 0.1 * i;
    w.grid.push_back(z);
    if (z < 0) {
      w.u_hat.push_back(um * (1 - 0.5 * std::exp(k * z)));
      w.v_hat.push_back(0.5 * vp * std::exp(k * z));
    } else {
      w.u_hat.push_back(0.5 * um * std::exp(-k * z));
      w.v_hat.push_back(vp * (1 - 0.5 * std::exp(-k * z)));
    }
    w.du_hat.push_back(0.0);
    w.dv_hat.push_back(0.0);
  }
  const DecayRates r = decay_rates(w);
  CHECK(std::abs(r.u_minus - k) <= 1e-6);
  CHECK(std::abs(r.v_minus - k) <= 1e-6);
  CHECK(std::abs(r.u_plus - k) <= 1e-6);
  CHECK(std::abs(r.v_plus - k) <= 1e-6);

  // Too few tail nodes.
  WaveProfile s = w;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.grid[i] < 0) s.v_hat[i] = 0.0;
  }
  CHECK_THROWS_AS(decay_rates(s), Error);
  try {
    decay_rates(s);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientTail);
  }
}

TEST_CASE("interpolation") {
  const WaveProfile& w = fixture::reference_profile();
  for (std::size_t i : {std::size_t{0}, std::size_t{17}, std::size_t{2000}, w.size() - 1}) {
    const ProfileSample s = interpolate(w, w.grid[i]);
    CHECK(s.u == w.u_hat[i]);
    CHECK(s.v == w.v_hat[i]);
    CHECK(s.du == w.du_hat[i]);
    CHECK(s.dv == w.dv_hat[i]);
  }
  const ProfileSample out = interpolate(w, w.L + 10);
  CHECK(out.u == 0.0);
  CHECK(out.v == doctest::Approx(1 - 0.0162 / 1.0526).epsilon(1e-15));
  CHECK(out.du == 0.0);
  CHECK(out.dv == 0.0);
  const ProfileSample left = interpolate(w, -w.L - 10);
  CHECK(left.u == doctest::Approx(1 - 1.1 * 0.0162).epsilon(1e-15));
  CHECK(left.v == 0.0);
}

TEST_CASE("grid convergence and truncation") {
  const WaveProfile& w = fixture::reference_profile();
  ProfileOptions fine;
  fine.n_nodes = 2 * (w.size() - 1) + 1;
  const WaveProfile w2 = solve_profile(fixture::reference_params(), fine);
  CHECK(std::abs(w2.c_star - w.c_star) <= 1e-6);
  double sup = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    sup = std::max(sup, std::abs(w.u_hat[i] - w2.u_hat[2 * i]));
    sup = std::max(sup, std::abs(w.v_hat[i] - w2.v_hat[2 * i]));
  }
  CHECK(sup <= 1e-6);

  // Midpoints of the coarse grid are nodes of the fine one.
  double mid = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); i += 7) {
    const ProfileSample s = interpolate(w, 0.5 * (w.grid[i] + w.grid[i + 1]));
    mid = std::max(mid, std::abs(s.u - w2.u_hat[2 * i + 1]));
    mid = std::max(mid, std::abs(s.v - w2.v_hat[2 * i + 1]));
  }
  CHECK(mid <= 1e-6);

  ProfileOptions wide;
  wide.L = 300.0;
  wide.n_nodes = 6001;
  const WaveProfile w3 = solve_profile(fixture::reference_params(), wide);
  CHECK(std::abs(w3.c_star - w.c_star) <= 1e-8);
}

TEST_CASE("monotone tails") {
  const WaveProfile& w = fixture::reference_profile();
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (std::abs(w.grid[i]) < 0.75 * w.L || std::abs(w.grid[i + 1]) < 0.75 * w.L) continue;
    CHECK(w.u_hat[i + 1] <= w.u_hat[i] + 1e-14);
    CHECK(w.v_hat[i + 1] >= w.v_hat[i] - 1e-14);
  }
}

TEST_CASE("option validation") {
  ProfileOptions o;
  o.L = 40.0;
  CHECK_THROWS_AS(solve_profile(fixture::reference_params(), o), Error);
  o = {};
  o.n_nodes = 100;
  CHECK_THROWS_AS(solve_profile(fixture::reference_params(), o), Error);
  ModelParams bad = fixture::reference_params();
  bad.F = 0.9;
  CHECK_THROWS_AS(solve_profile(bad), Error);
}

TEST_CASE("miss distance brackets the wavespeed") {
  const auto scan = miss_distance_scan(fixture::reference_params(), {0.01, 0.02, 0.03, 0.04});
  REQUIRE(scan.size() == 4);
  int changes = 0;
  int where = -1;
  for (std::size_t i = 0; i < scan.size(); ++i) REQUIRE(scan[i].ok);
  for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
    if ((scan[i].distance > 0) != (scan[i + 1].distance > 0)) {
      ++changes;
      where = static_cast<int>(i);
    }
  }
  CHECK(changes == 1);
  CHECK(where == 1);

  const double c = fixture::reference_profile().c_star;
  const auto at = miss_distance_scan(fixture::reference_params(), {c - 0.005, c, c + 0.005});
  REQUIRE(at[0].ok);
  REQUIRE(at[1].ok);
  REQUIRE(at[2].ok);
  CHECK(std::abs(at[1].distance) <= 1e-6);
  CHECK((at[0].distance > 0) != (at[2].distance > 0));

  CHECK_THROWS_AS(miss_distance_scan(fixture::reference_params(), {1.5}), Error);
}

TEST_CASE("miss distance for alpha = 1") {
  const auto scan = miss_distance_scan(fixture::alpha_one_params(), {0.045, 0.055});
  REQUIRE(scan[0].ok);
  REQUIRE(scan[1].ok);
  CHECK((scan[0].distance > 0) != (scan[1].distance > 0));
}
