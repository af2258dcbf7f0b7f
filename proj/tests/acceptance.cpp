// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "twstab/contour.hpp"
#include "twstab/error.hpp"
#include "twstab/evans.hpp"
#include "twstab/profile.hpp"
#include "twstab/simulate.hpp"
#include "twstab/spectrum.hpp"

using namespace twstab;

namespace {

int failures = 0;
double worst_plucker = 0.0;

void report(int id, bool pass, const std::string& what, double seconds) {
  std::printf("%s [%2d] %s (%.2f s)\n", pass ? "PASS" : "FAIL", id, what.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

// Times f, which fills `what` and returns the verdict; exceptions count as failure.
void criterion(int id, const std::function<bool(std::string&)>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string what;
  bool pass = false;
  try {
    pass = f(what);
  } catch (const std::exception& e) {
    what += std::string(" threw: ") + e.what();
  }
  report(id, pass, what, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void track(const std::vector<EvansPoint>& scan) {
  for (const auto& p : scan)
    if (p.ok) worst_plucker = std::max(worst_plucker, p.value.max_plucker);
}

}  // namespace

int main() {
  const ModelParams P = ModelParams::aedes_aegypti();
  ModelParams P1 = P;
  P1.alpha = 1.0;
  WaveProfile w, w1;

  criterion(1, [&](std::string& what) {
    const auto t0 = std::chrono::steady_clock::now();
    w = solve_profile(P);
    const double t = elapsed(t0);
    what = fmt("wavespeed c* = %.10f in [0.0255, 0.0285], solve %.2f s <= 30 s", w.c_star, t);
    return w.c_star >= 0.0255 && w.c_star <= 0.0285 && t <= 30.0;
  });

  criterion(2, [&](std::string& what) {
    const DecayRates r = decay_rates(w);
    const auto [em, ep] = slow_rates(w.params, w.c_star);
    const double e1 = std::abs(r.v_minus / em - 1), e2 = std::abs(r.u_plus / -ep - 1);
    const double e3 = std::abs(r.u_minus / em - 1), e4 = std::abs(r.v_plus / -ep - 1);
    const double worst = std::max({e1, e2, e3, e4});
    what = fmt("tail rates vs eta2- = %.6f, |eta2+| = %.6f: worst relative error %.4f <= 0.02", em, -ep, worst);
    return worst <= 0.02 && std::abs(em - 0.0644) <= 0.02 * 0.0644 && std::abs(-ep - 0.0646) <= 0.02 * 0.0646;
  });

  criterion(3, [&](std::string& what) {
    const auto t0 = std::chrono::steady_clock::now();
    const double r = rightmost_essential(P, w.c_star);
    const double direct = 0.0162 * (1.0 / 1.0526 - 1.1);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> F(1.0001, 5.0), mu(1e-5, 0.5), sh(1e-4, 0.9999), al(1.0, 2.0),
        c(0.0, 2.0);
    // The -inf slow vertex -mu(1 - alpha F (1 - s_h)) is positive whenever
    // alpha F (1 - s_h) > 1, which these constraints do not exclude.
    int draws = 0, negative = 0, explained = 0;
    while (draws < 1000) {
      ModelParams q;
      q.F = F(rng);
      q.mu = mu(rng);
      q.s_h = sh(rng);
      q.alpha = al(rng);
      try {
        q.validate();
      } catch (const Error&) {
        continue;
      }
      ++draws;
      if (rightmost_essential(q, c(rng)) < 0.0)
        ++negative;
      else if (q.alpha * q.F * (1 - q.s_h) > 1)
        ++explained;
    }
    const double t = elapsed(t0);
    what = fmt("rightmost essential %.10g vs mu(1/F-alpha) (diff %.2e); %g/1000 draws negative", r,
               std::abs(r - direct), negative) +
           fmt(", %g of the rest have alpha F (1 - s_h) > 1", explained);
    return std::abs(r - direct) <= 1e-9 && std::abs(r - (-0.0024296)) <= 1e-7 && negative == 1000 && t <= 5.0;
  });

  criterion(4, [&](std::string& what) {
    const auto t0 = std::chrono::steady_clock::now();
    const double g = absolute_edge(P, w.c_star);
    const double t = elapsed(t0);
    what = fmt("gamma_A = %.8f at c*, |gamma_A + 0.0026075| = %.2e <= 2e-4", g, std::abs(g + 0.0026075));
    return std::abs(g + 0.0026075) <= 2e-4 && t <= 1.0;
  });

  criterion(5, [&](std::string& what) {
    std::vector<cplx> lams{0.0};
    for (int i = 0; i < 200; ++i) lams.push_back(0.001 + (0.2 - 0.001) * i / 199.0);
    const auto scan = evans_scan(lams, w);
    track(scan);
    double mx = 0.0;
    bool all_ok = true;
    for (const auto& p : scan) {
      all_ok = all_ok && p.ok;
      mx = std::max(mx, std::abs(p.value.d));
    }
    const double ratio = std::abs(scan[0].value.d) / mx;
    what = fmt("|D(0)| / max|D| over [0.001, 0.2] = %.2e <= 1e-6", ratio);
    return all_ok && ratio <= 1e-6;
  });

  criterion(6, [&](std::string& what) {
    const BranchProbe b = probe_branch_point(w);
    w1 = solve_profile(P1);
    const BranchProbe b1 = probe_branch_point(w1);
    what = fmt("alpha=1.1: sign change at %.8f, gamma_A = %.8f (|diff| %.2e <= 5e-4)", b.location, b.gamma_a,
               std::abs(b.location - b.gamma_a));
    what += b1.detected ? fmt("; alpha=1: detected at %.8f", b1.location) : "; alpha=1: " + b1.message;
    const bool ok1 = b1.detected ? std::abs(b1.location - b1.gamma_a) <= 5e-4 : !b1.message.empty();
    return b.detected && std::abs(b.location - b.gamma_a) <= 5e-4 && ok1;
  });

  criterion(7, [&](std::string& what) {
    bool pass = true;
    what = "winding numbers:";
    for (auto [rs, rb] : {std::pair{0.1, 10.0}, std::pair{0.001, 500.0}}) {
      const auto t0 = std::chrono::steady_clock::now();
      const BatchFunction f = [&](const std::vector<cplx>& z) {
        const auto scan = evans_scan(z, w);
        track(scan);
        std::vector<cplx> out;
        for (const auto& p : scan) {
          if (!p.ok) throw Error(ErrorCode::Stiffness, "contour point failed: " + p.status);
          out.push_back(p.value.d);
        }
        return out;
      };
      const ContourResult r = count_roots(f, build_contour(rs, rb, 1024));
      const double t = elapsed(t0);
      what += fmt(" (r_s=%g, r_b=%g) -> ", rs, rb) + std::to_string(r.winding) + fmt(" in %.1f s,", t);
      pass = pass && r.winding == 0 && r.residual <= 0.05 && t <= 300.0;
    }
    what.pop_back();
    return pass;
  });

  criterion(8, [&](std::string& what) {
    std::vector<cplx> lams;
    for (int i = 1; i <= 400; ++i) lams.push_back(200.0 * i / 400.0);
    const auto scan = evans_scan(lams, w);
    track(scan);
    int failed = 0;
    for (const auto& p : scan) failed += p.ok ? 0 : 1;
    const auto c = real_crossings(scan);
    what = fmt("real scan (0, 200], 400 points: %g sign changes, %g failed points", double(c.size()), failed);
    return c.empty() && failed == 0;
  });

  criterion(9, [&](std::string& what) {
    std::mt19937_64 rng(99);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Mat4c A = oracle::random_matrix<4>(rng);
      const auto ea = oracle::eigenvalues<4>(A);
      std::vector<cplx> sums;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) sums.push_back(ea[i] + ea[j]);
      worst = std::max(worst, oracle::multiset_distance(sums, oracle::eigenvalues<6>(compound_matrix(A))));
    }
    what = fmt("compound eigenvalues vs pairwise sums, 100 matrices: max distance %.2e <= 1e-8", worst);
    return worst <= 1e-8;
  });

  criterion(10, [&](std::string& what) {
    EvansOptions o;
    o.half_width = 30.0;
    o.tail_extension = 0.0;
    double worst = 0.0;
    for (cplx lam : {cplx(0.05, 0.0), cplx(0.1, 0.1)}) {
      const auto em = spatial_eigen(End::Minus, w.params, lam);
      const auto ep = spatial_eigen(End::Plus, w.params, lam);
      const cplx direct = oracle::direct_determinant(lam, w, 30.0, {em.eta[0], em.eta[1], ep.eta[0], ep.eta[1]},
                                                     {em.zeta[0], em.zeta[1], ep.zeta[0], ep.zeta[1]});
      const cplx d = evans(lam, w, o).d;
      worst = std::max(worst, std::abs(d - direct) / std::abs(direct));
    }
    what = fmt("compound vs direct determinant at L=30: max relative difference %.2e <= 1e-6", worst);
    return worst <= 1e-6;
  });

  criterion(11, [&](std::string& what) {
    what = fmt("max relative Plucker defect over criteria 5-8: %.2e <= 1e-8", worst_plucker);
    return worst_plucker > 0.0 && worst_plucker <= 1e-8;
  });

  criterion(12, [&](std::string& what) {
    const auto t0 = std::chrono::steady_clock::now();
    SimulationConfig lab;
    const SimulationResult rl = run(lab, P);
    const double speed_err = std::abs(rl.track.speed / w.c_star - 1);

    SimulationConfig co;
    co.frame = Frame::CoMoving;
    co.frame_speed = w.c_star;
    co.initial = InitialKind::Profile;
    co.half_width = w.L;
    co.n_cells = 800;
    co.t_end = 500.0;
    const SimulationResult rc = run(co, w.params, &w);
    const double drift = std::abs(rc.track.positions.back() - rc.track.positions.front());

    const DecaySeries s = perturbation_decay(w, 0.01, 10.0);
    double at100 = NAN, at1000 = NAN;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      if (std::abs(s.times[i] - 100.0) < 1e-9) at100 = s.deviation[i];
      if (std::abs(s.times[i] - 1000.0) < 1e-9) at1000 = s.deviation[i];
    }
    const double t = elapsed(t0);
    what = fmt("lab speed error %.4f <= 0.05; co-moving drift %.4f <= dx = %.3f", speed_err, drift, rc.dx) +
           fmt("; decay %.3e (t=1000) < %.3e (t=100)", at1000, at100);
    return speed_err <= 0.05 && drift <= rc.dx && at1000 < at100 && t <= 120.0;
  });

  criterion(13, [&](std::string& what) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> re(0.0, 5.0), im(0.01, 5.0);
    std::vector<cplx> lams;
    while (lams.size() < 20) {
      const cplx l(re(rng), im(rng));
      if (classify(w.params, w.c_star, l).verdict == Verdict::Resolvent) lams.push_back(l);
    }
    std::vector<cplx> all = lams;
    for (const cplx& l : lams) all.push_back(std::conj(l));
    const auto scan = evans_scan(all, w);
    double worst = 0.0;
    bool all_ok = true;
    for (std::size_t i = 0; i < lams.size(); ++i) {
      all_ok = all_ok && scan[i].ok && scan[i + lams.size()].ok;
      const cplx a = scan[i].value.d, b = scan[i + lams.size()].value.d;
      worst = std::max(worst, std::abs(std::conj(a) - b) / std::abs(a));
    }
    what = fmt("D(conj l) vs conj D(l) at 20 points: max relative difference %.2e <= 1e-8", worst);
    return all_ok && worst <= 1e-8;
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
