#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twstab/model.hpp"

namespace twstab {

/// Heteroclinic front from e- (z -> -inf) to e+ (z -> +inf) on [-L, L].
struct WaveProfile {
  ModelParams params;  // params.c == c_star
  std::vector<double> grid;
  std::vector<double> u_hat, v_hat, du_hat, dv_hat;
  double c_star = 0.0;
  double L = 0.0;
  double residual_norm = 0.0;

  std::size_t size() const noexcept { return grid.size(); }
};

struct ProfileOptions {
  double L = 200.0;
  int n_nodes = 4001;
  const WaveProfile* initial_guess = nullptr;
  double guess_speed = 0.05;
  double guess_width = 20.0;
};

/// Collocation solve of u'' + c u' + f = 0, v'' + c v' + g = 0 with c unknown.
/// params.c is ignored. Throws SolverFailure or Error(Bracket).
WaveProfile solve_profile(const ModelParams& params, const ProfileOptions& options = {});

struct ProfileSample {
  double u = 0.0, v = 0.0, du = 0.0, dv = 0.0;
};

/// Cubic Hermite interpolation; clamps to e-/e+ with zero slope outside [-L, L].
ProfileSample interpolate(const WaveProfile& profile, double z);

/// Positive exponential decay rates of the deviation from the end states.
struct DecayRates {
  double u_minus = 0.0;  ///< |u - u(-inf)| as z -> -inf
  double v_minus = 0.0;  ///< |v| as z -> -inf
  double u_plus = 0.0;   ///< |u| as z -> +inf
  double v_plus = 0.0;   ///< |v - v(+inf)| as z -> +inf
};

/// Log-linear least-squares fits over each tail window (nodes whose deviation
/// lies in (1e-12, 1e-3)). Throws Error(InsufficientTail) below 20 nodes.
DecayRates decay_rates(const WaveProfile& profile);

struct MissDistance {
  double c = 0.0;
  double distance = 0.0;
  bool ok = false;
  std::string message;
};

struct MissDistanceOptions {
  double L = 200.0;
  int n_nodes = 2001;
};

/// Signed gap at z = 0 between W^u(e-) and W^s(e+) for each trial speed,
/// computed by a split (Lin-type) boundary-value problem. Per-speed failures
/// are recorded, not thrown. Speeds outside (0, 1) throw Error(Parameter).
std::vector<MissDistance> miss_distance_scan(const ModelParams& params, const std::vector<double>& c_values,
                                             const MissDistanceOptions& options = {});

/// Slow decay rates eta_2^- > 0 and eta_2^+ < 0 at lambda = 0 for speed c.
std::pair<double, double> slow_rates(const ModelParams& params, double c);

}  // namespace twstab
