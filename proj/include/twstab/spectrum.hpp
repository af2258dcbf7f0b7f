#pragma once

// Essential and absolute spectrum of the linearisation about a front, from
// the constant-coefficient limits A-(lambda) and A+(lambda).

#include <array>
#include <string>

#include "twstab/model.hpp"

namespace twstab {

/// Dispersion curves lambda(k) = vertex - k^2 + i c k, ordered
/// (- fast, - slow, + fast, + slow).
std::array<cplx, 4> dispersion(const ModelParams& params, double c, double k);

/// Values of the four curves at k = 0.
std::array<double, 4> dispersion_vertices(const ModelParams& params);

struct MorseIndex {
  int count = 0;          ///< eigenvalues with Re > 0
  bool hyperbolic = true;  ///< false if some |Re eta| < tolerance
};

MorseIndex morse_index(const Mat4c& M, double center_tol = 1e-12);

enum class Verdict { Resolvent, Essential, Absolute };

const char* to_string(Verdict v) noexcept;

struct SpectralClassification {
  cplx lambda;
  int i_minus = 0;
  int i_plus = 0;
  bool center_minus = false;
  bool center_plus = false;
  Verdict verdict = Verdict::Resolvent;
};

/// Essential when the Morse indices differ or either end has a center
/// eigenvalue; otherwise absolute on the real ray (-inf, gamma_A] (1e-10
/// slack); otherwise resolvent.
SpectralClassification classify(const ModelParams& params, double c, cplx lambda);

/// Largest real part on the dispersion curves (the largest vertex).
double rightmost_essential(const ModelParams& params, double c);

/// gamma_A = mu (1/F - alpha) - c^2/4.
double absolute_edge(const ModelParams& params, double c);

}  // namespace twstab
