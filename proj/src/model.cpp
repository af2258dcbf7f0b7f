#include "twstab/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twstab/error.hpp"

namespace twstab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::SingularPoint: return "singular_point";
    case ErrorCode::DegenerateEigenvalue: return "degenerate_eigenvalue";
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::SolverFailure: return "solver_failure";
    case ErrorCode::Bracket: return "bracket";
    case ErrorCode::InsufficientTail: return "insufficient_tail";
    case ErrorCode::Escape: return "escape";
    case ErrorCode::SpectralRegion: return "spectral_region";
    case ErrorCode::Stiffness: return "stiffness";
    case ErrorCode::OnZero: return "on_zero";
    case ErrorCode::Aliasing: return "aliasing";
    case ErrorCode::Instability: return "instability";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
    case ErrorCode::Mismatch: return "mismatch";
  }
  return "unknown";
}

ModelParams ModelParams::aedes_aegypti() {
  ModelParams p;
  p.F = 1.0526;
  p.mu = 0.0162;
  p.s_h = 0.45;
  p.alpha = 1.1;
  return p;
}

void ModelParams::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::Parameter, msg); };
  if (!std::isfinite(F) || !std::isfinite(mu) || !std::isfinite(s_h) || !std::isfinite(alpha) ||
      !std::isfinite(rho) || !std::isfinite(c))
    fail("parameters must be finite");
  if (!(F > 1.0)) fail("F must exceed 1");
  if (!(mu > 0.0)) fail("mu must be positive");
  if (!(s_h > 0.0 && s_h < 1.0)) fail("s_h must lie in (0, 1)");
  if (!(alpha >= 1.0)) fail("alpha must be at least 1");
  if (!(1.0 - alpha * mu > 0.0)) fail("1 - alpha*mu must be positive");
  if (!(1.0 - mu / F > 0.0)) fail("1 - mu/F must be positive");
}

KineticRates reaction_unchecked(double u, double v, const ModelParams& p) noexcept {
  const double S = u + v;
  const double A = S != 0.0 ? u / S : 0.0;
  return {u * (1.0 - S) - p.alpha * p.mu * u, p.F * v * (1.0 - S) * (1.0 - p.s_h * A) - p.mu * v};
}

KineticRates reaction(const KineticState& state, const ModelParams& params) {
  if (!(state.u >= 0.0) || !(state.v >= 0.0))
    throw Error(ErrorCode::Domain, "reaction: densities must be nonnegative");
  return reaction_unchecked(state.u, state.v, params);
}

Eigen::Matrix2d kinetic_jacobian(double u, double v, const ModelParams& p) {
  const double S = u + v;
  if (!(S > 0.0)) throw Error(ErrorCode::SingularPoint, "kinetic_jacobian: total density is zero");
  const double S2 = S * S;
  Eigen::Matrix2d J;
  J(0, 0) = 1.0 - S - u - p.alpha * p.mu;
  J(0, 1) = -u;
  J(1, 0) = p.F * v * ((S2 - v) * p.s_h / S2 - 1.0);
  J(1, 1) = p.F * (1.0 - v - S + u * p.s_h * (S2 - u) / S2) - p.mu;
  return J;
}

namespace {

bool newton_interior(double u, double v, const ModelParams& p, KineticState& out) {
  for (int it = 0; it < 60; ++it) {
    const KineticRates r = reaction_unchecked(u, v, p);
    const double norm = std::max(std::abs(r.du), std::abs(r.dv));
    if (norm < 1e-15) {
      out = {u, v};
      return true;
    }
    if (u + v <= 0.0) return false;
    const Eigen::Matrix2d J = kinetic_jacobian(u, v, p);
    const double det = J.determinant();
    if (std::abs(det) < 1e-300) return false;
    const Eigen::Vector2d step = J.partialPivLu().solve(Eigen::Vector2d(-r.du, -r.dv));
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k, t *= 0.5) {
      const double un = u + t * step(0);
      const double vn = v + t * step(1);
      if (un < 0.0 || vn < 0.0) continue;
      const KineticRates rn = reaction_unchecked(un, vn, p);
      if (std::max(std::abs(rn.du), std::abs(rn.dv)) < norm) {
        u = un;
        v = vn;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      const KineticRates rn = reaction_unchecked(u + step(0), v + step(1), p);
      if (std::max(std::abs(rn.du), std::abs(rn.dv)) < 1e-13 && u + step(0) >= 0.0 && v + step(1) >= 0.0) {
        out = {u + step(0), v + step(1)};
        return true;
      }
      return false;
    }
  }
  const KineticRates r = reaction_unchecked(u, v, p);
  if (std::max(std::abs(r.du), std::abs(r.dv)) <= 1e-13) {
    out = {u, v};
    return true;
  }
  return false;
}

}  // namespace

std::vector<KineticState> equilibria(const ModelParams& params) {
  params.validate();
  std::vector<KineticState> found{{0.0, 0.0}, params.e_minus(), params.e_plus()};
  auto is_new = [&](const KineticState& s) {
    return std::none_of(found.begin(), found.end(), [&](const KineticState& e) {
      return std::hypot(e.u - s.u, e.v - s.v) < 1e-8;
    });
  };
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      KineticState s;
      if (!newton_interior((i + 0.5) / 10.0, (j + 0.5) / 10.0, params, s)) continue;
      if (s.u <= 1e-9 || s.v <= 1e-9) continue;
      const KineticRates r = reaction(s, params);
      if (std::abs(r.du) > 1e-12 || std::abs(r.dv) > 1e-12) continue;
      if (is_new(s)) found.push_back(s);
    }
  }
  return found;
}

void assemble_linearisation(double u, double v, const ModelParams& p, cplx lambda, Mat4c& A) noexcept {
  const double S = u + v;
  const double S2 = S * S;
  A.setZero();
  A(0, 2) = 1.0;
  A(1, 3) = 1.0;
  A(2, 0) = u - (1.0 - S) + p.alpha * p.mu + lambda;
  A(2, 1) = u;
  A(2, 2) = -p.c;
  A(3, 0) = p.F * v * (1.0 - (S2 - v) * p.s_h / S2);
  A(3, 1) = p.F * (-1.0 + v + S - u * p.s_h * (S2 - u) / S2) + p.mu + lambda;
  A(3, 3) = -p.c;
}

Mat4c linearisation_at(double u, double v, const ModelParams& params, cplx lambda) {
  if (u < 0.0 || v < 0.0) throw Error(ErrorCode::Domain, "linearisation_at: densities must be nonnegative");
  if (!(u + v > 0.0)) throw Error(ErrorCode::SingularPoint, "linearisation_at: S = 0 is a singular point");
  Mat4c A;
  assemble_linearisation(u, v, params, lambda, A);
  return A;
}

Mat4c asymptotic_matrix(End end, const ModelParams& p, cplx lambda) {
  Mat4c A = Mat4c::Zero();
  A(0, 2) = 1.0;
  A(1, 3) = 1.0;
  A(2, 2) = -p.c;
  A(3, 3) = -p.c;
  if (end == End::Minus) {
    A(2, 0) = 1.0 - p.alpha * p.mu + lambda;
    A(2, 1) = 1.0 - p.alpha * p.mu;
    A(3, 1) = -p.F * p.alpha * p.mu * (1.0 - p.s_h) + p.mu + lambda;
  } else {
    A(2, 0) = p.mu * (p.alpha - 1.0 / p.F) + lambda;
    A(3, 0) = p.F - p.mu + p.mu * p.s_h;
    A(3, 1) = p.F - p.mu + lambda;
  }
  return A;
}

std::array<cplx, 2> branch_constants(End end, const ModelParams& p, cplx lambda) {
  if (end == End::Minus)
    return {1.0 - p.alpha * p.mu + lambda, lambda + p.mu * (1.0 - p.alpha * p.F * (1.0 - p.s_h))};
  return {p.F - p.mu + lambda, lambda + p.mu * (p.alpha - 1.0 / p.F)};
}

std::array<cplx, 4> asymptotic_eigenvalues(End end, const ModelParams& p, cplx lambda) {
  const auto d = branch_constants(end, p, lambda);
  std::array<cplx, 4> out;
  for (int b = 0; b < 2; ++b) {
    const cplx root = std::sqrt(p.c * p.c + 4.0 * d[b]);
    out[2 * b] = 0.5 * (-p.c + root);
    out[2 * b + 1] = 0.5 * (-p.c - root);
  }
  return out;
}

AsymptoticEigen spatial_eigen(End end, const ModelParams& p, cplx lambda) {
  const auto d = branch_constants(end, p, lambda);
  const double sign = end == End::Minus ? 1.0 : -1.0;
  AsymptoticEigen out;
  out.end = end;
  for (int b = 0; b < 2; ++b) {
    const cplx radicand = p.c * p.c + 4.0 * d[b];
    if (std::abs(radicand) < 1e-14) {
      const double gamma_a = p.mu * (1.0 / p.F - p.alpha) - 0.25 * p.c * p.c;
      std::ostringstream msg;
      msg << "spatial_eigen: branch collision (zero radicand) at lambda=" << lambda.real() << "+" << lambda.imag()
          << "i; the absolute-spectrum edge gamma_A is " << gamma_a;
      throw Error(ErrorCode::DegenerateEigenvalue, msg.str());
    }
    out.eta[b] = 0.5 * (-p.c + sign * std::sqrt(radicand));
  }

  // (p, q) ratios of the coupled branches do not depend on lambda.
  if (end == End::Minus) {
    const double gap = p.mu * (1.0 - p.alpha * p.F * (1.0 - p.s_h)) - (1.0 - p.alpha * p.mu);
    if (gap == 0.0) throw Error(ErrorCode::DegenerateEigenvalue, "spatial_eigen: coincident branches at e-");
    const double q = gap / (1.0 - p.alpha * p.mu);
    out.zeta[0] << 1.0, 0.0, out.eta[0], 0.0;
    out.zeta[1] << 1.0, q, out.eta[1], out.eta[1] * q;
  } else {
    const double gap = p.mu * (p.alpha - 1.0 / p.F) - (p.F - p.mu);
    if (gap == 0.0) throw Error(ErrorCode::DegenerateEigenvalue, "spatial_eigen: coincident branches at e+");
    const double q = (p.F - p.mu + p.mu * p.s_h) / gap;
    out.zeta[0] << 0.0, 1.0, 0.0, out.eta[0];
    out.zeta[1] << 1.0, q, out.eta[1], out.eta[1] * q;
  }
  return out;
}

}  // namespace twstab
