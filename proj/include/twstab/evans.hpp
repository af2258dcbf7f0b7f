#pragma once

// Evans function by the compound-matrix method: the 2-planes of solutions
// decaying at each end are carried as wedge coordinates in the basis
// (12, 13, 14, 23, 24, 34) and matched at z = 0.

#include <optional>
#include <string>
#include <vector>

#include "twstab/model.hpp"
#include "twstab/profile.hpp"

namespace twstab {

using Mat6c = Eigen::Matrix<cplx, 6, 6>;
using Vec6c = Eigen::Matrix<cplx, 6, 1>;

/// Second additive compound of A in the wedge basis.
Mat6c compound_matrix(const Mat4c& A);

/// The six 2x2 minors of [w1 w2].
Vec6c wedge_coordinates(const Vec4c& w1, const Vec4c& w2);

/// psi1 psi6 - psi2 psi5 + psi3 psi4; zero exactly for decomposable psi.
cplx plucker(const Vec6c& psi);

struct EvansOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Length beyond +-L over which the profile tail is continued as a pure
  /// slow exponential before the integration starts. 0 starts at +-L.
  double tail_extension = 300.0;
  /// Overrides the starting half-width (before extension); defaults to profile L.
  std::optional<double> half_width;
  std::size_t max_steps = 2000000;
};

struct EvansValue {
  cplx lambda;
  cplx d;
  std::array<cplx, 2> rescale_exponents;  ///< eta1 + eta2 at the - and + ends
  double max_plucker = 0.0;               ///< max relative Plucker defect on either trajectory
  double min_norm = 0.0;
  double max_norm = 0.0;
  std::size_t steps = 0;
};

/// True when evans() accepts lambda: resolvent side, or real lambda in
/// (gamma_A, rightmost_essential] for branch-point probing.
bool evans_admissible(const ModelParams& params, cplx lambda);

/// Throws Error(SpectralRegion) outside the admissible set and
/// StiffnessError when the integration breaks down.
EvansValue evans(cplx lambda, const WaveProfile& profile, const EvansOptions& options = {});

struct EvansPoint {
  EvansValue value;
  bool ok = false;
  std::string status = "ok";
};

/// Independent per-point evaluation on up to `threads` workers (0: hardware).
std::vector<EvansPoint> evans_scan(const std::vector<cplx>& lambdas, const WaveProfile& profile,
                                   const EvansOptions& options = {}, unsigned threads = 0);

/// Sign changes of Re D between consecutive successful points, located by
/// linear interpolation in Re lambda.
std::vector<double> real_crossings(const std::vector<EvansPoint>& scan);

struct BranchProbe {
  bool detected = false;
  double location = 0.0;  ///< lambda at the sign change (bisected)
  double gamma_a = 0.0;
  std::string message;
};

/// Looks for a sign change of real D just right of gamma_A on a geometric
/// offset grid (1e-10 .. 5e-4), then bisects it.
BranchProbe probe_branch_point(const WaveProfile& profile, const EvansOptions& options = {}, unsigned threads = 0);

}  // namespace twstab
