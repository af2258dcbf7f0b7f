#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "twstab/error.hpp"
#include "twstab/simulate.hpp"

using namespace twstab;

TEST_CASE("equilibrium initial data is stationary") {
  SimulationConfig cfg;
  cfg.initial = InitialKind::Uniform;
  cfg.uniform_state = fixture::reference_params().e_minus();
  cfg.t_end = 50.0;
  cfg.n_cells = 400;
  cfg.snapshot_times = {50.0};
  const SimulationResult r = run(cfg, fixture::reference_params());
  REQUIRE(r.snapshots.size() == 1);
  double dev = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    dev = std::max(dev, std::abs(r.snapshots[0].u[i] - cfg.uniform_state.u));
    dev = std::max(dev, std::abs(r.snapshots[0].v[i]));
  }
  CHECK(dev <= 1e-10 * cfg.t_end);
}

TEST_CASE("lab-frame front speed, boundedness and refinement") {
  const double c = fixture::reference_profile().c_star;
  SimulationConfig cfg;
  const SimulationResult r = run(cfg, fixture::reference_params());
  CHECK(r.track.speed == doctest::Approx(c).epsilon(0.05));
  CHECK(r.min_value >= -1e-10);
  CHECK(r.max_value <= 1 + 1e-10);
  CHECK(r.dt == doctest::Approx(0.4 * r.dx * r.dx));

  SimulationConfig fine = cfg;
  fine.n_cells = 2 * cfg.n_cells;
  const SimulationResult rf = run(fine, fixture::reference_params());
  CHECK(rf.dt == doctest::Approx(r.dt / 4));
  CHECK(rf.track.speed == doctest::Approx(r.track.speed).epsilon(0.01));

  ModelParams adv = fixture::reference_params();
  adv.rho = 0.01;
  const SimulationResult ra = run(cfg, adv);
  CHECK(ra.track.speed == doctest::Approx(r.track.speed + 0.01).epsilon(0.02));
}

TEST_CASE("profile is invariant in the co-moving frame") {
  const WaveProfile& w = fixture::reference_profile();
  SimulationConfig cfg;
  cfg.frame = Frame::CoMoving;
  cfg.frame_speed = w.c_star;
  cfg.initial = InitialKind::Profile;
  cfg.half_width = w.L;
  cfg.n_cells = 800;
  cfg.t_end = 500.0;
  const SimulationResult r = run(cfg, w.params, &w);
  const auto& pos = r.track.positions;
  REQUIRE(pos.size() > 2);
  CHECK(std::abs(pos.back() - pos.front()) <= r.dx);
}

TEST_CASE("perturbation decay") {
  const WaveProfile& w = fixture::reference_profile();
  const DecaySeries zero = perturbation_decay(w, 0.0, 10.0);
  for (double d : zero.deviation) CHECK(d <= 1e-8);

  DecayOptions o;
  const DecaySeries s = perturbation_decay(w, 0.01, 10.0, o);
  auto at = [&](double t) {
    for (std::size_t i = 0; i < s.times.size(); ++i)
      if (std::abs(s.times[i] - t) < 1e-9) return s.deviation[i];
    FAIL("missing sample");
    return 0.0;
  };
  CHECK(at(1000.0) <= 0.2 * at(100.0));

  DecayOptions fine = o;
  fine.n_cells = 2 * o.n_cells;
  const DecaySeries sf = perturbation_decay(w, 0.01, 10.0, fine);
  CHECK(sf.deviation.back() == doctest::Approx(s.deviation.back()).epsilon(0.1));

  DecayOptions tr = o;
  tr.shape = PerturbationShape::Translation;
  const DecaySeries st = perturbation_decay(w, 0.01, 10.0, tr);
  for (double d : st.deviation) CHECK(d <= 1e-4);

  CHECK_THROWS_AS(perturbation_decay(w, 0.1, 10.0), Error);
}

TEST_CASE("configuration and instability errors") {
  SimulationConfig cfg;
  cfg.dt = 1.0;
  try {
    run(cfg, fixture::reference_params());
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
  cfg = {};
  cfg.n_cells = 100;
  CHECK_THROWS_AS(run(cfg, fixture::reference_params()), Error);
  cfg = {};
  cfg.initial = InitialKind::Profile;
  CHECK_THROWS_AS(run(cfg, fixture::reference_params()), Error);

  // Upwind advection beyond its own stability limit.
  ModelParams fast = fixture::reference_params();
  fast.rho = 8.0;
  cfg = {};
  cfg.t_end = 200.0;
  try {
    run(cfg, fast);
    FAIL("expected instability");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Instability);
  }
}

TEST_CASE("front position") {
  const std::vector<double> x{0, 1, 2, 3};
  CHECK(front_position(x, {1, 0.8, 0.4, 0}, 0.5) == doctest::Approx(1.75));
  CHECK(std::isnan(front_position(x, {1, 1, 1, 1}, 0.5)));
}
