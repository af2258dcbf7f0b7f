#include "twstab/evans.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <boost/numeric/odeint.hpp>

#include "twstab/error.hpp"
#include "twstab/spectrum.hpp"

namespace twstab {

Mat6c compound_matrix(const Mat4c& a) {
  // 0-based entries; row/column order 12, 13, 14, 23, 24, 34.
  Mat6c m;
  m << a(0, 0) + a(1, 1), a(1, 2), a(1, 3), -a(0, 2), -a(0, 3), 0.0,
       a(2, 1), a(0, 0) + a(2, 2), a(2, 3), a(0, 1), 0.0, -a(0, 3),
       a(3, 1), a(3, 2), a(0, 0) + a(3, 3), 0.0, a(0, 1), a(0, 2),
       -a(2, 0), a(1, 0), 0.0, a(1, 1) + a(2, 2), a(2, 3), -a(1, 3),
       -a(3, 0), 0.0, a(1, 0), a(3, 2), a(1, 1) + a(3, 3), a(1, 2),
       0.0, -a(3, 0), a(2, 0), -a(3, 1), a(2, 1), a(2, 2) + a(3, 3);
  return m;
}

Vec6c wedge_coordinates(const Vec4c& w1, const Vec4c& w2) {
  auto minor = [&](int i, int j) { return w1(i) * w2(j) - w1(j) * w2(i); };
  Vec6c psi;
  psi << minor(0, 1), minor(0, 2), minor(0, 3), minor(1, 2), minor(1, 3), minor(2, 3);
  return psi;
}

cplx plucker(const Vec6c& psi) { return psi(0) * psi(5) - psi(1) * psi(4) + psi(2) * psi(3); }

bool evans_admissible(const ModelParams& params, cplx lambda) {
  const double c = params.c;
  const SpectralClassification s = classify(params, c, lambda);
  if (s.verdict == Verdict::Resolvent) return true;
  return std::abs(lambda.imag()) <= 1e-10 && lambda.real() > absolute_edge(params, c) &&
         lambda.real() <= rightmost_essential(params, c);
}

namespace {

using State = std::array<double, 12>;

// Profile on [-L, L] continued outside as the slow exponential tail.
struct Background {
  const WaveProfile& profile;
  double L;
  KineticState em, ep;
  ProfileSample left, right;
  double eta_minus, eta_plus;

  Background(const WaveProfile& w, double half_width)
      : profile(w), L(half_width), em(w.params.e_minus()), ep(w.params.e_plus()) {
    left = interpolate(w, -L);
    right = interpolate(w, L);
    const auto rates = slow_rates(w.params, w.params.c);
    eta_minus = rates.first;
    eta_plus = rates.second;
  }

  void at(double z, double& u, double& v) const {
    if (z < -L) {
      const double s = std::exp(eta_minus * (z + L));
      u = em.u + (left.u - em.u) * s;
      v = left.v * s;
    } else if (z > L) {
      const double s = std::exp(eta_plus * (z - L));
      u = right.u * s;
      v = ep.v + (right.v - ep.v) * s;
    } else {
      const ProfileSample q = interpolate(profile, z);
      u = q.u;
      v = q.v;
    }
  }
};

Vec6c unpack(const State& x) {
  Vec6c psi;
  for (int i = 0; i < 6; ++i) psi(i) = cplx(x[2 * i], x[2 * i + 1]);
  return psi;
}

State pack(const Vec6c& psi) {
  State x;
  for (int i = 0; i < 6; ++i) {
    x[2 * i] = psi(i).real();
    x[2 * i + 1] = psi(i).imag();
  }
  return x;
}

struct Trajectory {
  Vec6c psi;
  double max_plucker = 0.0;
  double min_norm = 0.0;
  double max_norm = 0.0;
  std::size_t steps = 0;
};

Trajectory integrate_to_origin(const Background& bg, const ModelParams& p, cplx lambda, cplx sigma, double z0,
                               const Vec6c& psi0, const EvansOptions& opt) {
  namespace odeint = boost::numeric::odeint;
  auto rhs = [&](const State& x, State& dxdz, double z) {
    double u, v;
    bg.at(z, u, v);
    Mat4c A;
    assemble_linearisation(u, v, p, lambda, A);
    Mat6c M = compound_matrix(A);
    M.diagonal().array() -= sigma;
    dxdz = pack(M * unpack(x));
  };
  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State>());

  Trajectory tr;
  State x = pack(psi0);
  double z = z0;
  const double dir = z0 < 0.0 ? 1.0 : -1.0;
  double dz = 0.05 * dir;
  tr.min_norm = tr.max_norm = psi0.norm();
  auto observe = [&](const Vec6c& psi) {
    const double n = psi.norm();
    tr.min_norm = std::min(tr.min_norm, n);
    tr.max_norm = std::max(tr.max_norm, n);
    if (n > 0.0) tr.max_plucker = std::max(tr.max_plucker, std::abs(plucker(psi)) / (n * n));
  };
  observe(psi0);

  while (dir * z < 0.0) {
    if (tr.steps >= opt.max_steps) {
      std::ostringstream msg;
      msg << "evans: step budget exhausted at z=" << z;
      throw StiffnessError(msg.str(), z);
    }
    if (dir * (z + dz) > 0.0) dz = -z;
    int rejected = 0;
    while (stepper.try_step(rhs, x, z, dz) == odeint::fail) {
      if (++rejected > 500 || std::abs(dz) < 1e-12) {
        std::ostringstream msg;
        msg << "evans: step size underflow at z=" << z;
        throw StiffnessError(msg.str(), z);
      }
    }
    ++tr.steps;
    const Vec6c psi = unpack(x);
    if (!psi.allFinite() || psi.norm() > 1e150) {
      std::ostringstream msg;
      msg << "evans: compound state overflow at z=" << z;
      throw StiffnessError(msg.str(), z);
    }
    observe(psi);
    if (std::abs(z) < 1e-14 * std::max(1.0, std::abs(z0))) z = 0.0;
  }
  tr.psi = unpack(x);
  return tr;
}

}  // namespace

EvansValue evans(cplx lambda, const WaveProfile& profile, const EvansOptions& opt) {
  const ModelParams& p = profile.params;
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw Error(ErrorCode::SpectralRegion, "evans: lambda must be finite");
  if (!evans_admissible(p, lambda)) {
    std::ostringstream msg;
    msg << "evans: lambda=" << lambda.real() << (lambda.imag() < 0 ? "" : "+") << lambda.imag()
        << "i is not resolvent-side (verdict " << to_string(classify(p, p.c, lambda).verdict) << ")";
    throw Error(ErrorCode::SpectralRegion, msg.str());
  }
  const double hw = opt.half_width ? std::min(*opt.half_width, profile.L) : profile.L;
  if (!(hw > 0.0) || !(opt.tail_extension >= 0.0)) throw Error(ErrorCode::Parameter, "evans: bad half width");
  const Background bg(profile, hw);

  const AsymptoticEigen em = spatial_eigen(End::Minus, p, lambda);
  const AsymptoticEigen ep = spatial_eigen(End::Plus, p, lambda);
  const cplx sigma_m = em.eta[0] + em.eta[1];
  const cplx sigma_p = ep.eta[0] + ep.eta[1];
  const double z0 = hw + opt.tail_extension;

  const Trajectory a = integrate_to_origin(bg, p, lambda, sigma_m, -z0, wedge_coordinates(em.zeta[0], em.zeta[1]), opt);
  const Trajectory b = integrate_to_origin(bg, p, lambda, sigma_p, z0, wedge_coordinates(ep.zeta[0], ep.zeta[1]), opt);

  EvansValue out;
  out.lambda = lambda;
  out.d = a.psi(0) * b.psi(5) - a.psi(1) * b.psi(4) + a.psi(2) * b.psi(3) + a.psi(3) * b.psi(2) -
          a.psi(4) * b.psi(1) + a.psi(5) * b.psi(0);
  out.rescale_exponents = {sigma_m, sigma_p};
  out.max_plucker = std::max(a.max_plucker, b.max_plucker);
  out.min_norm = std::min(a.min_norm, b.min_norm);
  out.max_norm = std::max(a.max_norm, b.max_norm);
  out.steps = a.steps + b.steps;
  if (!std::isfinite(out.d.real()) || !std::isfinite(out.d.imag())) throw StiffnessError("evans: non-finite D", 0.0);
  return out;
}

std::vector<EvansPoint> evans_scan(const std::vector<cplx>& lambdas, const WaveProfile& profile,
                                   const EvansOptions& options, unsigned threads) {
  std::vector<EvansPoint> out(lambdas.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, lambdas.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < lambdas.size(); i = next++) {
      EvansPoint& pt = out[i];
      pt.value.lambda = lambdas[i];
      try {
        pt.value = evans(lambdas[i], profile, options);
        pt.ok = true;
        pt.status = "ok";
      } catch (const Error& e) {
        pt.ok = false;
        pt.status = to_string(e.code());
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

std::vector<double> real_crossings(const std::vector<EvansPoint>& scan) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
    if (!scan[i].ok || !scan[i + 1].ok) continue;
    const double a = scan[i].value.d.real();
    const double b = scan[i + 1].value.d.real();
    const double x0 = scan[i].value.lambda.real();
    const double x1 = scan[i + 1].value.lambda.real();
    if (a == 0.0) {
      out.push_back(x0);
    } else if ((a > 0.0) != (b > 0.0) && b != 0.0) {
      out.push_back(x0 + (x1 - x0) * a / (a - b));
    }
  }
  if (!scan.empty() && scan.back().ok && scan.back().value.d.real() == 0.0) out.push_back(scan.back().value.lambda.real());
  return out;
}

BranchProbe probe_branch_point(const WaveProfile& profile, const EvansOptions& options, unsigned threads) {
  BranchProbe r;
  const ModelParams& p = profile.params;
  r.gamma_a = absolute_edge(p, p.c);
  std::vector<cplx> lambdas;
  const int n = 48;
  for (int k = 0; k < n; ++k) {
    const double eps = 1e-10 * std::pow(5e-4 / 1e-10, static_cast<double>(k) / (n - 1));
    lambdas.emplace_back(r.gamma_a + eps, 0.0);
  }
  const std::vector<EvansPoint> scan = evans_scan(lambdas, profile, options, threads);
  for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
    if (!scan[i].ok || !scan[i + 1].ok) continue;
    double a = scan[i].value.lambda.real(), b = scan[i + 1].value.lambda.real();
    double fa = scan[i].value.d.real(), fb = scan[i + 1].value.d.real();
    if ((fa > 0.0) == (fb > 0.0)) continue;
    for (int it = 0; it < 40 && b - a > 1e-14; ++it) {
      const double m = 0.5 * (a + b);
      double fm;
      try {
        fm = evans(cplx(m, 0.0), profile, options).d.real();
      } catch (const Error&) {
        break;
      }
      if ((fm > 0.0) == (fa > 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    r.detected = true;
    r.location = 0.5 * (a + b);
    std::ostringstream msg;
    msg << "sign change of real D at lambda=" << r.location << " (gamma_A=" << r.gamma_a << ")";
    r.message = msg.str();
    return r;
  }
  std::size_t failed = 0;
  for (const auto& pt : scan) failed += pt.ok ? 0 : 1;
  std::ostringstream msg;
  msg << "no sign change of real D detected in (gamma_A, gamma_A+5e-4], gamma_A=" << r.gamma_a;
  if (failed) msg << "; " << failed << " of " << scan.size() << " probe points failed";
  msg << "; the branch point is not resolved at this resolution";
  r.message = msg.str();
  return r;
}

}  // namespace twstab
