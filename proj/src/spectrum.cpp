#include "twstab/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace twstab {

std::array<double, 4> dispersion_vertices(const ModelParams& p) {
  return {-(1.0 - p.alpha * p.mu), -p.mu * (1.0 - p.alpha * p.F * (1.0 - p.s_h)), -(p.F - p.mu),
          p.mu * (1.0 / p.F - p.alpha)};
}

std::array<cplx, 4> dispersion(const ModelParams& params, double c, double k) {
  const auto v = dispersion_vertices(params);
  std::array<cplx, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = cplx(v[i] - k * k, c * k);
  return out;
}

MorseIndex morse_index(const Mat4c& M, double center_tol) {
  Eigen::ComplexEigenSolver<Mat4c> es(M, false);
  MorseIndex m;
  for (int i = 0; i < 4; ++i) {
    const double re = es.eigenvalues()(i).real();
    if (std::abs(re) < center_tol) m.hyperbolic = false;
    if (re > 0.0) ++m.count;
  }
  return m;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Resolvent: return "resolvent";
    case Verdict::Essential: return "essential";
    case Verdict::Absolute: return "absolute";
  }
  return "unknown";
}

namespace {

void count_end(End end, const ModelParams& p, cplx lambda, int& index, bool& center) {
  index = 0;
  center = false;
  for (const cplx& eta : asymptotic_eigenvalues(end, p, lambda)) {
    if (std::abs(eta.real()) < 1e-12) center = true;
    if (eta.real() > 0.0) ++index;
  }
}

}  // namespace

SpectralClassification classify(const ModelParams& params, double c, cplx lambda) {
  const ModelParams p = params.with_speed(c);
  SpectralClassification s;
  s.lambda = lambda;
  count_end(End::Minus, p, lambda, s.i_minus, s.center_minus);
  count_end(End::Plus, p, lambda, s.i_plus, s.center_plus);
  if (s.i_minus != s.i_plus || s.center_minus || s.center_plus)
    s.verdict = Verdict::Essential;
  else if (std::abs(lambda.imag()) <= 1e-10 && lambda.real() <= absolute_edge(params, c) + 1e-10)
    s.verdict = Verdict::Absolute;
  else
    s.verdict = Verdict::Resolvent;
  return s;
}

double rightmost_essential(const ModelParams& params, double) {
  const auto v = dispersion_vertices(params);
  return *std::max_element(v.begin(), v.end());
}

double absolute_edge(const ModelParams& p, double c) { return p.mu * (1.0 / p.F - p.alpha) - 0.25 * c * c; }

}  // namespace twstab
