#pragma once

// Two-component infected/uninfected reaction-diffusion kinetics, its
// equilibria, and the linearisation about a travelling front in the
// first-order variables (p, q, s, t) with s = p_z and t = q_z.

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace twstab {

using cplx = std::complex<double>;
using Mat4c = Eigen::Matrix<cplx, 4, 4>;
using Vec4c = Eigen::Matrix<cplx, 4, 1>;

/// Which end of the front: z -> -inf (infected state) or z -> +inf (uninfected state).
enum class End { Minus, Plus };

struct KineticState {
  double u = 0.0;  ///< infected density
  double v = 0.0;  ///< uninfected density

  double total() const noexcept { return u + v; }
  /// Infection fraction u/S; zero at the extinction state.
  double infection_fraction() const noexcept { return total() > 0.0 ? u / total() : 0.0; }
};

struct KineticRates {
  double du = 0.0;
  double dv = 0.0;
};

struct ModelParams {
  double F = 0.0;      ///< fecundity ratio, > 1
  double mu = 0.0;     ///< mortality rate, > 0
  double s_h = 0.0;    ///< CI embryo-death probability, in (0, 1)
  double alpha = 1.0;  ///< lifespan-reduction factor, >= 1
  double rho = 0.0;    ///< advection rate (lab frame only)
  double c = 0.0;      ///< co-moving wavespeed

  /// Aedes aegypti at 30C with a 10% lifespan reduction.
  static ModelParams aedes_aegypti();

  /// Throws Error(Parameter) unless F > 1, mu > 0, 0 < s_h < 1, alpha >= 1
  /// and both boundary equilibria have positive density.
  void validate() const;

  ModelParams with_speed(double speed) const {
    ModelParams p = *this;
    p.c = speed;
    return p;
  }

  KineticState e_minus() const { return {1.0 - alpha * mu, 0.0}; }
  KineticState e_plus() const { return {0.0, 1.0 - mu / F}; }
};

/// Kinetic (non-spatial) right-hand side. Negative densities are a domain error.
KineticRates reaction(const KineticState& state, const ModelParams& params);

/// Same formula without the domain check, for solver iterates that may dip
/// marginally below zero. Requires u + v != 0 unless u == 0.
KineticRates reaction_unchecked(double u, double v, const ModelParams& params) noexcept;

/// d(reaction)/d(u, v). Requires u + v > 0.
Eigen::Matrix2d kinetic_jacobian(double u, double v, const ModelParams& params);

/// Origin, e-, e+ and any interior coexistence state (damped Newton from a
/// fixed 10x10 seed grid). Every entry satisfies reaction == 0 to 1e-12.
std::vector<KineticState> equilibria(const ModelParams& params);

/// The 4x4 matrix A(z, lambda) evaluated at profile values (u, v).
/// Throws SingularPoint when u + v == 0 and Domain for negative densities.
Mat4c linearisation_at(double u, double v, const ModelParams& params, cplx lambda);

/// Unchecked assembly used inside integrators.
void assemble_linearisation(double u, double v, const ModelParams& params, cplx lambda, Mat4c& out) noexcept;

/// A-(lambda) or A+(lambda) in closed form.
Mat4c asymptotic_matrix(End end, const ModelParams& params, cplx lambda);

/// The two decoupled branches of A+-(lambda): each relation eta^2 + c eta = d.
/// Index 0 is the fast branch, index 1 the slow one (the one whose vertex is
/// closest to the imaginary axis).
std::array<cplx, 2> branch_constants(End end, const ModelParams& params, cplx lambda);

/// All four eigenvalues of the asymptotic matrix, ordered
/// (fast +root, fast -root, slow +root, slow -root), principal square root.
std::array<cplx, 4> asymptotic_eigenvalues(End end, const ModelParams& params, cplx lambda);

struct AsymptoticEigen {
  End end = End::Minus;
  std::array<cplx, 2> eta;   ///< eta_1, eta_2 (fast, slow)
  std::array<Vec4c, 2> zeta;  ///< companion-form eigenvectors (p, q, eta p, eta q)
};

/// Unstable pair of A-(lambda) or stable pair of A+(lambda), analytic in lambda
/// right of the absolute spectrum. Throws DegenerateEigenvalue on a branch collision.
AsymptoticEigen spatial_eigen(End end, const ModelParams& params, cplx lambda);

}  // namespace twstab
