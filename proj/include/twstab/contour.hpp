#pragma once

// Argument-principle root counting on a right-half-plane semicircle with a
// small indentation around the origin.

#include <functional>
#include <vector>

#include "twstab/evans.hpp"

namespace twstab {

/// Closed, positively oriented curve: large arc -i r_b -> r_b -> i r_b,
/// imaginary-axis segment down to i r_s, small arc i r_s -> r_s -> -i r_s,
/// segment down to -i r_b. Points are parametrised by arc length s.
class Contour {
 public:
  Contour(double r_s, double r_b);

  double r_s() const noexcept { return r_s_; }
  double r_b() const noexcept { return r_b_; }
  double length() const noexcept { return total_; }
  /// Point at arc length s in [0, length()].
  cplx at(double s) const;

  std::vector<double> s;  ///< sample parameters, s.front() = 0, s.back() = length()
  std::vector<cplx> points;

  std::size_t size() const noexcept { return points.size(); }

 private:
  double r_s_, r_b_;
  double piece_[4];
  double total_;
};

/// n_points samples (the first repeated as the last), proportional to arc
/// length with at least max(16, n_points/32) per piece.
Contour build_contour(double r_s, double r_b, std::size_t n_points);

struct Winding {
  int winding = 0;
  double total_arg_change = 0.0;
  double residual = 0.0;      ///< |total/2pi - winding|
  double max_step_arg = 0.0;
  std::size_t worst_segment = 0;
  std::vector<double> cum_arg;  ///< accumulated argument at each sample
};

/// Sums principal argument increments over consecutive samples; a curve
/// whose last sample differs from the first is closed implicitly.
/// Throws Error(OnZero) for a zero sample and AliasingError for a jump >= pi.
Winding winding_number(const std::vector<cplx>& values);

struct ContourResult {
  std::vector<cplx> points;
  std::vector<cplx> d_values;
  std::vector<double> cum_arg;
  double total_arg_change = 0.0;
  int winding = 0;
  double residual = 0.0;
  double max_step_arg = 0.0;
  std::size_t n_points_final = 0;
  int refinement_rounds = 0;
};

struct RootCountOptions {
  bool auto_refine = true;
  int max_rounds = 4;
  double threshold = 1.5707963267948966;  ///< refine segments whose jump is >= this
};

/// Batch evaluator: values at the given points, same order.
using BatchFunction = std::function<std::vector<cplx>(const std::vector<cplx>&)>;

/// Winding of f along the contour with midpoint refinement (in arc length).
/// Throws AliasingError if jumps >= threshold survive max_rounds.
ContourResult count_roots(const BatchFunction& f, Contour contour, const RootCountOptions& options = {});

/// Evans-function root count inside the contour (r_s, r_b).
ContourResult count_roots(const WaveProfile& profile, double r_s, double r_b, std::size_t n_points,
                          const RootCountOptions& options = {}, const EvansOptions& evans_options = {},
                          unsigned threads = 0);

}  // namespace twstab
