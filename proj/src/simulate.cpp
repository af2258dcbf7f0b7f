#include "twstab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "twstab/error.hpp"

namespace twstab {

double front_position(const std::vector<double>& x, const std::vector<double>& u, double level) {
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    if (u[i] >= level && u[i + 1] < level) return x[i] + (x[i + 1] - x[i]) * (u[i] - level) / (u[i] - u[i + 1]);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

void fit_speed(FrontTrack& tr) {
  std::vector<double> t, p;
  const std::size_t start = tr.times.size() / 2;
  for (std::size_t i = start; i < tr.times.size(); ++i) {
    if (std::isnan(tr.positions[i])) continue;
    t.push_back(tr.times[i]);
    p.push_back(tr.positions[i]);
  }
  if (t.size() < 2) {
    tr.speed = std::numeric_limits<double>::quiet_NaN();
    tr.fit_residual = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const double n = static_cast<double>(t.size());
  double mt = 0, mp = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    mp += p[i];
  }
  mt /= n;
  mp /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxy += (t[i] - mt) * (p[i] - mp);
    sxx += (t[i] - mt) * (t[i] - mt);
  }
  tr.speed = sxx > 0 ? sxy / sxx : 0.0;
  double ss = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = p[i] - (mp + tr.speed * (t[i] - mt));
    ss += r * r;
  }
  tr.fit_residual = std::sqrt(ss / n);
}

}  // namespace

SimulationResult run(const SimulationConfig& cfg, const ModelParams& params, const WaveProfile* profile) {
  params.validate();
  if (cfg.n_cells < 400) throw Error(ErrorCode::Config, "simulate: n_cells must be at least 400");
  if (!(cfg.half_width > 0.0) || !(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end))
    throw Error(ErrorCode::Config, "simulate: bad domain or end time");
  const int n = cfg.n_cells;
  const double dx = 2.0 * cfg.half_width / n;
  const double dt_max = 0.4 * dx * dx;
  const double dt = cfg.dt > 0.0 ? cfg.dt : dt_max;
  if (dt > dt_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "simulate: dt=" << dt << " exceeds the explicit stability bound 0.4 dx^2=" << dt_max;
    throw Error(ErrorCode::Config, msg.str());
  }
  if (cfg.amplitude != 0.0 && cfg.perturbation == PerturbationShape::Translation && !profile)
    throw Error(ErrorCode::Config, "simulate: translation perturbation needs a profile");

  SimulationResult res;
  res.dx = dx;
  res.dt = dt;
  res.x.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) res.x[i] = -cfg.half_width + (i + 0.5) * dx;

  std::vector<double> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
  const KineticState em = params.e_minus(), ep = params.e_plus();
  for (int i = 0; i < n; ++i) {
    const double x = res.x[i];
    switch (cfg.initial) {
      case InitialKind::Tanh: {
        const double t = std::tanh((x - cfg.tanh_center) / cfg.tanh_width);
        u[i] = 0.5 * em.u * (1.0 - t);
        v[i] = 0.5 * ep.v * (1.0 + t);
        break;
      }
      case InitialKind::Profile: {
        if (!profile) throw Error(ErrorCode::Config, "simulate: profile initial data needs a profile");
        const ProfileSample s = interpolate(*profile, x);
        u[i] = s.u;
        v[i] = s.v;
        break;
      }
      case InitialKind::Uniform:
        u[i] = cfg.uniform_state.u;
        v[i] = cfg.uniform_state.v;
        break;
    }
    if (cfg.perturbation == PerturbationShape::Gaussian) {
      const double g = cfg.amplitude * std::exp(-std::pow((x - cfg.perturbation_center) / cfg.width, 2));
      u[i] += g;
      v[i] += g;
    } else if (cfg.perturbation == PerturbationShape::Translation) {
      const ProfileSample s = interpolate(*profile, x);
      u[i] += cfg.amplitude * s.du;
      v[i] += cfg.amplitude * s.dv;
    }
  }
  for (int i = 0; i < n; ++i)
    if (!(u[i] >= -1e-12 && v[i] >= -1e-12 && u[i] <= 1.0 + 1e-12 && v[i] <= 1.0 + 1e-12))
      throw Error(ErrorCode::Config, "simulate: initial data must lie in [0, 1]");

  // u_t = u_xx + a u_x + f with a = -rho (lab) or a = c (co-moving).
  const double a = cfg.frame == Frame::Lab ? -params.rho : cfg.frame_speed;
  const double level = 0.5 * em.u;
  const long n_steps = std::lround(cfg.t_end / dt);
  const long track_every = std::max(1L, std::lround(cfg.track_interval / dt));

  std::vector<long> snap_steps;
  for (double t : cfg.snapshot_times) {
    if (t < 0.0 || t > cfg.t_end + 0.5 * dt) throw Error(ErrorCode::Config, "simulate: snapshot time outside [0, t_end]");
    snap_steps.push_back(std::lround(t / dt));
  }
  std::vector<std::size_t> snap_order(snap_steps.size());
  for (std::size_t k = 0; k < snap_order.size(); ++k) snap_order[k] = k;
  std::stable_sort(snap_order.begin(), snap_order.end(),
                   [&](std::size_t p, std::size_t q) { return snap_steps[p] < snap_steps[q]; });
  res.snapshots.resize(snap_steps.size());
  std::size_t next_snap = 0;

  res.min_value = std::min(*std::min_element(u.begin(), u.end()), *std::min_element(v.begin(), v.end()));
  res.max_value = std::max(*std::max_element(u.begin(), u.end()), *std::max_element(v.begin(), v.end()));

  auto record = [&](long step) {
    while (next_snap < snap_order.size() && snap_steps[snap_order[next_snap]] == step) {
      Snapshot& s = res.snapshots[snap_order[next_snap]];
      s.t = step * dt;
      s.u = u;
      s.v = v;
      ++next_snap;
    }
    if (step % track_every == 0) {
      res.track.times.push_back(step * dt);
      res.track.positions.push_back(front_position(res.x, u, level));
    }
  };
  record(0);

  std::vector<double> un(u.size()), vn(v.size());
  const double inv_dx2 = 1.0 / (dx * dx);
  const double inv_dx = 1.0 / dx;
  const double alpha_mu = params.alpha * params.mu;
  for (long step = 1; step <= n_steps; ++step) {
    for (int i = 0; i < n; ++i) {
      const int l = i > 0 ? i - 1 : 0;  // mirrored ghost cells
      const int r = i + 1 < n ? i + 1 : n - 1;
      const double S = u[i] + v[i];
      const double A = S != 0.0 ? u[i] / S : 0.0;
      const double fu = u[i] * (1.0 - S) - alpha_mu * u[i];
      const double fv = params.F * v[i] * (1.0 - S) * (1.0 - params.s_h * A) - params.mu * v[i];
      double adv_u = 0.0, adv_v = 0.0;
      if (a > 0.0) {
        adv_u = a * (u[r] - u[i]) * inv_dx;
        adv_v = a * (v[r] - v[i]) * inv_dx;
      } else if (a < 0.0) {
        adv_u = a * (u[i] - u[l]) * inv_dx;
        adv_v = a * (v[i] - v[l]) * inv_dx;
      }
      un[i] = u[i] + dt * ((u[l] - 2.0 * u[i] + u[r]) * inv_dx2 + adv_u + fu);
      vn[i] = v[i] + dt * ((v[l] - 2.0 * v[i] + v[r]) * inv_dx2 + adv_v + fv);
    }
    u.swap(un);
    v.swap(vn);
    for (int i = 0; i < n; ++i) {
      const double lo = std::min(u[i], v[i]);
      const double hi = std::max(u[i], v[i]);
      if (!(std::abs(lo) <= 10.0 && std::abs(hi) <= 10.0)) {
        std::ostringstream msg;
        msg << "simulate: solution left [-10, 10] at t=" << step * dt << ", x=" << res.x[i];
        throw Error(ErrorCode::Instability, msg.str());
      }
      res.min_value = std::min(res.min_value, lo);
      res.max_value = std::max(res.max_value, hi);
    }
    record(step);
  }
  fit_speed(res.track);
  return res;
}

namespace {

// Catmull-Rom interpolation on a uniform grid, clamped at the ends.
double sample_uniform(const std::vector<double>& y, double x0, double dx, double x) {
  const double t = (x - x0) / dx;
  const long n = static_cast<long>(y.size());
  if (t <= 0.0) return y.front();
  if (t >= n - 1) return y.back();
  const long i = static_cast<long>(std::floor(t));
  const double f = t - i;
  auto at = [&](long k) { return y[static_cast<std::size_t>(std::clamp(k, 0L, n - 1))]; };
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  return p1 + 0.5 * f * (p2 - p0 + f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + f * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace

DecaySeries perturbation_decay(const WaveProfile& profile, double amplitude, double width, const DecayOptions& opt) {
  if (!(std::abs(amplitude) <= 0.05)) throw Error(ErrorCode::Config, "perturbation_decay: amplitude must be <= 0.05");
  if (!(width > 0.0)) throw Error(ErrorCode::Config, "perturbation_decay: width must be positive");
  if (!(opt.sample_interval > 0.0)) throw Error(ErrorCode::Config, "perturbation_decay: bad sample interval");

  SimulationConfig cfg;
  cfg.half_width = profile.L;
  cfg.n_cells = opt.n_cells;
  cfg.t_end = opt.t_end;
  cfg.frame = Frame::CoMoving;
  cfg.frame_speed = profile.c_star;
  cfg.initial = InitialKind::Profile;
  cfg.track_interval = opt.sample_interval;
  for (double t = 0.0; t <= opt.t_end + 1e-9; t += opt.sample_interval) cfg.snapshot_times.push_back(t);

  const SimulationResult ref = run(cfg, profile.params, &profile);
  cfg.perturbation = opt.shape;
  cfg.amplitude = amplitude;
  cfg.width = width;
  const SimulationResult pert = run(cfg, profile.params, &profile);

  DecaySeries out;
  const double x0 = ref.x.front();
  const double dx = ref.dx;
  for (std::size_t k = 0; k < ref.snapshots.size(); ++k) {
    const Snapshot& r = ref.snapshots[k];
    const Snapshot& p = pert.snapshots[k];
    auto distance2 = [&](double s) {
      double acc = 0.0;
      for (std::size_t i = 0; i < p.u.size(); ++i) {
        const double xs = ref.x[i] + s;
        const double du = p.u[i] - sample_uniform(r.u, x0, dx, xs);
        const double dv = p.v[i] - sample_uniform(r.v, x0, dx, xs);
        acc += du * du + dv * dv;
      }
      return acc * dx;
    };
    const auto best = boost::math::tools::brent_find_minima(distance2, -opt.max_shift, opt.max_shift, 40);
    double shift = best.first, d2 = best.second;
    const double d0 = distance2(0.0);
    if (d0 <= d2) {
      shift = 0.0;
      d2 = d0;
    }
    out.times.push_back(r.t);
    out.deviation.push_back(std::sqrt(std::max(d2, 0.0)));
    out.shift.push_back(shift);
  }
  return out;
}

}  // namespace twstab
