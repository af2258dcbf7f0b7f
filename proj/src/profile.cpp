#include "twstab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/QR>

#include "twstab/collocation.hpp"
#include "twstab/error.hpp"

namespace twstab {

std::pair<double, double> slow_rates(const ModelParams& params, double c) {
  const ModelParams p = params.with_speed(c);
  const double eta_minus = spatial_eigen(End::Minus, p, 0.0).eta[1].real();
  const double eta_plus = spatial_eigen(End::Plus, p, 0.0).eta[1].real();
  return {eta_minus, eta_plus};
}

namespace {

// Real slow roots at lambda = 0; NaN when the radicand is negative so an
// iterate with such a speed is rejected by the line search.
double slow_minus(const ModelParams& p, double c) {
  return 0.5 * (-c + std::sqrt(c * c + 4.0 * p.mu * (1.0 - p.alpha * p.F * (1.0 - p.s_h))));
}
double slow_plus(const ModelParams& p, double c) {
  return 0.5 * (-c - std::sqrt(c * c + 4.0 * p.mu * (p.alpha - 1.0 / p.F)));
}

// State y = (u, v, u', v'); travelling-wave ODE y' = f(y, c).
void front_rhs(const ModelParams& p, double c, const Eigen::VectorXd& y, double sign, Eigen::Ref<Eigen::VectorXd> f) {
  const KineticRates r = reaction_unchecked(y(0), y(1), p);
  f(0) = sign * y(2);
  f(1) = sign * y(3);
  f(2) = sign * (-c * y(2) - r.du);
  f(3) = sign * (-c * y(3) - r.dv);
}

void front_jacobian(const ModelParams& p, double c, const Eigen::VectorXd& y, double sign,
                    Eigen::Ref<Eigen::MatrixXd> J, Eigen::Ref<Eigen::VectorXd> dc) {
  double u = y(0), v = y(1);
  if (!(u + v > 0.0)) {
    u = std::max(u, 0.0);
    v = std::max(v, 0.0);
    if (u + v == 0.0) u = 1e-300;
  }
  const Eigen::Matrix2d K = kinetic_jacobian(u, v, p);
  J.setZero();
  J(0, 2) = sign;
  J(1, 3) = sign;
  J(2, 0) = -sign * K(0, 0);
  J(2, 1) = -sign * K(0, 1);
  J(3, 0) = -sign * K(1, 0);
  J(3, 1) = -sign * K(1, 1);
  J(2, 2) = -sign * c;
  J(3, 3) = -sign * c;
  dc.setZero();
  dc(2) = -sign * y(2);
  dc(3) = -sign * y(3);
}

std::vector<double> uniform_grid(double a, double b, int nodes) {
  std::vector<double> g(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) g[i] = a + (b - a) * static_cast<double>(i) / (nodes - 1);
  g.front() = a;
  g.back() = b;
  return g;
}

Eigen::Vector4d tanh_front(const ModelParams& p, double z, double width) {
  const double um = p.e_minus().u;
  const double vp = p.e_plus().v;
  const double t = std::tanh(z / width);
  const double dt = (1.0 - t * t) / width;
  return {0.5 * um * (1.0 - t), 0.5 * vp * (1.0 + t), -0.5 * um * dt, 0.5 * vp * dt};
}

Eigen::Vector4d sample_state(const WaveProfile& w, double z) {
  const ProfileSample s = interpolate(w, z);
  return {s.u, s.v, s.du, s.dv};
}

std::optional<double> bracket_speed(const ModelParams& p) {
  std::vector<double> cs;
  for (int k = 1; k <= 60; ++k) cs.push_back(0.005 * k);
  const std::vector<MissDistance> md = miss_distance_scan(p, cs, {100.0, 801});
  for (std::size_t k = 0; k + 1 < md.size(); ++k) {
    if (!md[k].ok || !md[k + 1].ok) continue;
    const double a = md[k].distance, b = md[k + 1].distance;
    if ((a > 0.0) != (b > 0.0)) return md[k].c + (md[k + 1].c - md[k].c) * a / (a - b);
  }
  return std::nullopt;
}

}  // namespace

WaveProfile solve_profile(const ModelParams& params_in, const ProfileOptions& opt) {
  params_in.validate();
  if (!(opt.L >= 50.0)) throw Error(ErrorCode::Parameter, "solve_profile: L must be at least 50");
  if (opt.n_nodes < 401) throw Error(ErrorCode::Parameter, "solve_profile: n_nodes must be at least 401");
  const ModelParams p = params_in;
  const double L = opt.L;
  const KineticState em = p.e_minus();
  const KineticState ep = p.e_plus();

  BvpSystem sys;
  sys.n_state = 4;
  sys.n_param = 1;
  sys.rhs = [&](double, const Eigen::VectorXd& y, const Eigen::VectorXd& q, Eigen::VectorXd& f) {
    front_rhs(p, q(0), y, 1.0, f);
  };
  sys.jacobian = [&](double, const Eigen::VectorXd& y, const Eigen::VectorXd& q, Eigen::MatrixXd& J,
                     Eigen::MatrixXd& P) { front_jacobian(p, q(0), y, 1.0, J, P.col(0)); };
  sys.boundary = [&](const Eigen::VectorXd& ya, const Eigen::VectorXd& yb, const Eigen::VectorXd& q,
                     Eigen::VectorXd& g) {
    const double c = q(0);
    const double em2 = slow_minus(p, c);
    const double ep2 = slow_plus(p, c);
    g(0) = ya(2) - em2 * (ya(0) - em.u);
    g(1) = yb(3) - ep2 * (yb(1) - ep.v);
    g(2) = yb(0) - std::exp(ep2 * L);
    g(3) = ya(1) - std::exp(-em2 * L);
    g(4) = yb(2) - ep2 * yb(0);
  };
  sys.check_params = [](const Eigen::VectorXd& q) {
    if (!(q(0) > 0.0 && q(0) < 1.0)) {
      std::ostringstream msg;
      msg << "solve_profile: wavespeed iterate " << q(0) << " left (0, 1)";
      throw Error(ErrorCode::Bracket, msg.str());
    }
  };

  std::vector<double> grid = uniform_grid(-L, L, opt.n_nodes);
  Eigen::MatrixXd guess(4, opt.n_nodes);
  Eigen::VectorXd c0(1);
  if (opt.initial_guess) {
    for (int i = 0; i < opt.n_nodes; ++i) guess.col(i) = sample_state(*opt.initial_guess, grid[i]);
    c0(0) = opt.initial_guess->c_star;
  } else {
    for (int i = 0; i < opt.n_nodes; ++i) guess.col(i) = tanh_front(p, grid[i], opt.guess_width);
    c0(0) = opt.guess_speed;
  }

  BvpSolution sol;
  try {
    sol = solve_collocation(sys, grid, guess, c0);
  } catch (const Error& e) {
    if (opt.initial_guess || (e.code() != ErrorCode::SolverFailure && e.code() != ErrorCode::Bracket)) throw;
    // The speed basin of the full solve is narrow; bracket c by the miss
    // distance and restart the tanh guess from the interpolated root.
    const std::optional<double> c_root = bracket_speed(p);
    if (!c_root) throw;
    c0(0) = *c_root;
    sol = solve_collocation(sys, grid, guess, c0);
  }
  if (!(sol.p(0) > 0.0 && sol.p(0) < 1.0)) throw Error(ErrorCode::Bracket, "solve_profile: wavespeed outside (0, 1)");

  WaveProfile w;
  w.c_star = sol.p(0);
  w.params = p.with_speed(w.c_star);
  w.L = L;
  w.residual_norm = sol.residual_norm;
  w.grid = sol.grid;
  const auto n = static_cast<std::size_t>(opt.n_nodes);
  w.u_hat.resize(n);
  w.v_hat.resize(n);
  w.du_hat.resize(n);
  w.dv_hat.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.u_hat[i] = sol.y(0, static_cast<Eigen::Index>(i));
    w.v_hat[i] = sol.y(1, static_cast<Eigen::Index>(i));
    w.du_hat[i] = sol.y(2, static_cast<Eigen::Index>(i));
    w.dv_hat[i] = sol.y(3, static_cast<Eigen::Index>(i));
  }
  return w;
}

ProfileSample interpolate(const WaveProfile& w, double z) {
  if (w.grid.empty()) throw Error(ErrorCode::Parameter, "interpolate: empty profile");
  if (z < w.grid.front()) return {w.params.e_minus().u, 0.0, 0.0, 0.0};
  if (z > w.grid.back()) return {0.0, w.params.e_plus().v, 0.0, 0.0};
  auto it = std::upper_bound(w.grid.begin(), w.grid.end(), z);
  std::size_t j = static_cast<std::size_t>(it - w.grid.begin());
  if (j >= w.grid.size()) j = w.grid.size() - 1;
  const std::size_t i = j - 1;
  const double h = w.grid[j] - w.grid[i];
  const double t = (z - w.grid[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1, d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
  auto value = [&](const std::vector<double>& y, const std::vector<double>& dy) {
    return h00 * y[i] + h10 * h * dy[i] + h01 * y[j] + h11 * h * dy[j];
  };
  auto slope = [&](const std::vector<double>& y, const std::vector<double>& dy) {
    return d00 * y[i] + d10 * dy[i] + d01 * y[j] + d11 * dy[j];
  };
  return {value(w.u_hat, w.du_hat), value(w.v_hat, w.dv_hat), slope(w.u_hat, w.du_hat), slope(w.v_hat, w.dv_hat)};
}

namespace {

double fit_tail(const std::vector<double>& z, const std::vector<double>& dev, bool left, const char* name) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if ((left && z[i] >= 0.0) || (!left && z[i] <= 0.0)) continue;
    if (dev[i] > 1e-12 && dev[i] < 1e-3) {
      xs.push_back(z[i]);
      ys.push_back(std::log(dev[i]));
    }
  }
  if (xs.size() < 20) {
    std::ostringstream msg;
    msg << "decay_rates: tail window for " << name << " has " << xs.size() << " nodes (need 20)";
    throw Error(ErrorCode::InsufficientTail, msg.str());
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return std::abs(sxy / sxx);
}

}  // namespace

DecayRates decay_rates(const WaveProfile& w) {
  const double um = w.params.e_minus().u;
  const double vp = w.params.e_plus().v;
  const std::size_t n = w.size();
  std::vector<double> du(n), dv(n), du_plus(n), dv_plus(n);
  for (std::size_t i = 0; i < n; ++i) {
    du[i] = std::abs(w.u_hat[i] - um);
    dv[i] = std::abs(w.v_hat[i]);
    du_plus[i] = std::abs(w.u_hat[i]);
    dv_plus[i] = std::abs(w.v_hat[i] - vp);
  }
  DecayRates r;
  r.u_minus = fit_tail(w.grid, du, true, "u at -inf");
  r.v_minus = fit_tail(w.grid, dv, true, "v at -inf");
  r.u_plus = fit_tail(w.grid, du_plus, false, "u at +inf");
  r.v_plus = fit_tail(w.grid, dv_plus, false, "v at +inf");
  return r;
}

namespace {

// Orthogonal complement (4x2) of the span of two real eigenvectors.
Eigen::Matrix<double, 4, 2> complement(const AsymptoticEigen& e) {
  Eigen::Matrix<double, 4, 2> W;
  W.col(0) = e.zeta[0].real();
  W.col(1) = e.zeta[1].real();
  Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>> qr(W);
  const Eigen::Matrix4d Q = qr.householderQ();
  return Q.rightCols<2>();
}

}  // namespace

// Left half x(-tau) and right half x(+tau) on tau in [0, L], 8 states:
// y = (x_left(-tau), x_right(tau)). Matching at tau = 0 fixes u = v (phase)
// and continuity of u, v, u'; the v' jump is the miss distance.
std::vector<MissDistance> miss_distance_scan(const ModelParams& params, const std::vector<double>& c_values,
                                             const MissDistanceOptions& opt) {
  params.validate();
  for (double c : c_values)
    if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::Parameter, "miss_distance_scan: trial speeds must lie in (0, 1)");
  if (!(opt.L >= 50.0) || opt.n_nodes < 201) throw Error(ErrorCode::Parameter, "miss_distance_scan: bad grid");

  const KineticState em = params.e_minus();
  const KineticState ep = params.e_plus();
  const Eigen::Vector4d xm(em.u, em.v, 0.0, 0.0);
  const Eigen::Vector4d xp(ep.u, ep.v, 0.0, 0.0);
  const std::vector<double> grid = uniform_grid(0.0, opt.L, opt.n_nodes);

  std::vector<std::size_t> order(c_values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return c_values[a] < c_values[b]; });

  std::vector<MissDistance> out(c_values.size());
  std::vector<std::optional<Eigen::MatrixXd>> solutions(c_values.size());

  // Returns the solution at speed c; failures are written to md.
  auto solve_at = [&](double c, const std::optional<Eigen::MatrixXd>& seed, MissDistance& md) {
    std::optional<Eigen::MatrixXd> result;
    md.c = c;
    try {
      const ModelParams pc = params.with_speed(c);
      const Eigen::Matrix<double, 4, 2> Nm = complement(spatial_eigen(End::Minus, pc, 0.0));
      const Eigen::Matrix<double, 4, 2> Np = complement(spatial_eigen(End::Plus, pc, 0.0));

      BvpSystem sys;
      sys.n_state = 8;
      sys.n_param = 0;
      sys.rhs = [&](double, const Eigen::VectorXd& y, const Eigen::VectorXd&, Eigen::VectorXd& f) {
        front_rhs(params, c, y.head<4>(), -1.0, f.head<4>());
        front_rhs(params, c, y.tail<4>(), 1.0, f.tail<4>());
      };
      sys.jacobian = [&](double, const Eigen::VectorXd& y, const Eigen::VectorXd&, Eigen::MatrixXd& J,
                         Eigen::MatrixXd&) {
        Eigen::VectorXd dummy(4);
        J.setZero();
        front_jacobian(params, c, y.head<4>(), -1.0, J.block<4, 4>(0, 0), dummy);
        front_jacobian(params, c, y.tail<4>(), 1.0, J.block<4, 4>(4, 4), dummy);
      };
      sys.boundary = [&](const Eigen::VectorXd& ya, const Eigen::VectorXd& yb, const Eigen::VectorXd&,
                         Eigen::VectorXd& g) {
        g(0) = ya(0) - ya(1);
        g(1) = ya(0) - ya(4);
        g(2) = ya(1) - ya(5);
        g(3) = ya(2) - ya(6);
        const Eigen::Vector2d left = Nm.transpose() * (yb.head<4>() - xm);
        const Eigen::Vector2d right = Np.transpose() * (yb.tail<4>() - xp);
        g(4) = left(0);
        g(5) = left(1);
        g(6) = right(0);
        g(7) = right(1);
      };

      Eigen::MatrixXd guess(8, opt.n_nodes);
      if (seed) {
        guess = *seed;
      } else {
        // tanh front with u = v at z = 0 up to O(1e-3); Newton absorbs the rest.
        for (int i = 0; i < opt.n_nodes; ++i) {
          guess.block<4, 1>(0, i) = tanh_front(params, -grid[i], 20.0);
          guess.block<4, 1>(4, i) = tanh_front(params, grid[i], 20.0);
        }
      }
      const BvpSolution sol = solve_collocation(sys, grid, guess, Eigen::VectorXd(0));
      if (sol.y.cwiseAbs().maxCoeff() > 1e6) throw Error(ErrorCode::Escape, "miss_distance: trajectory escaped");
      md.distance = sol.y(3, 0) - sol.y(7, 0);
      md.ok = true;
      md.message.clear();
      result = sol.y;
    } catch (const Error& e) {
      md.ok = false;
      md.message = std::string(to_string(e.code())) + ": " + e.what();
    }
    return result;
  };
  auto attempt = [&](std::size_t idx, const std::optional<Eigen::MatrixXd>& seed) {
    solutions[idx] = solve_at(c_values[idx], seed, out[idx]);
  };

  // Continuation upward in c, then a downward sweep retrying failures from
  // their nearest converged neighbour.
  std::optional<Eigen::MatrixXd> previous;
  for (std::size_t idx : order) {
    attempt(idx, previous);
    if (solutions[idx]) previous = solutions[idx];
  }
  previous.reset();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (solutions[*it]) {
      previous = solutions[*it];
    } else if (previous) {
      // Walk down from the neighbour in substeps, halving on failure.
      const double target = c_values[*it];
      double from = out[*(it - 1)].c;
      std::optional<Eigen::MatrixXd> seed = previous;
      double step = target - from;
      MissDistance probe;
      for (int tries = 0; tries < 12 && seed; ++tries) {
        const double next = std::abs(target - from) <= std::abs(step) ? target : from + step;
        std::optional<Eigen::MatrixXd> y = solve_at(next, seed, probe);
        if (!y) {
          step *= 0.5;
          continue;
        }
        seed = y;
        from = next;
        if (next == target) break;
      }
      if (from == target && seed) {
        out[*it] = probe;
        solutions[*it] = seed;
        previous = seed;
      } else {
        previous.reset();
      }
    }
  }
  return out;
}

}  // namespace twstab
