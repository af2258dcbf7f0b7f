#pragma once

// Explicit method-of-lines integration of the PDE system on [-X, X] with
// homogeneous Neumann boundaries, in the lab frame (advection rho) or in a
// frame moving with speed c.

#include <vector>

#include "twstab/model.hpp"
#include "twstab/profile.hpp"

namespace twstab {

enum class Frame { Lab, CoMoving };
enum class InitialKind { Tanh, Profile, Uniform };
enum class PerturbationShape { None, Gaussian, Translation };

struct SimulationConfig {
  double half_width = 300.0;
  int n_cells = 1200;
  double dt = 0.0;  ///< 0 selects 0.4 dx^2
  double t_end = 1000.0;
  Frame frame = Frame::Lab;
  double frame_speed = 0.0;  ///< co-moving speed c

  InitialKind initial = InitialKind::Tanh;
  double tanh_center = 0.0;
  double tanh_width = 20.0;
  KineticState uniform_state;

  PerturbationShape perturbation = PerturbationShape::None;
  double amplitude = 0.0;
  double width = 10.0;  ///< Gaussian exp(-((x - x0)/width)^2)
  double perturbation_center = 0.0;

  std::vector<double> snapshot_times;
  double track_interval = 1.0;
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> u, v;
};

struct FrontTrack {
  std::vector<double> times;
  std::vector<double> positions;
  double speed = 0.0;         ///< least-squares slope over the final 50% of samples
  double fit_residual = 0.0;  ///< rms of that fit
};

struct SimulationResult {
  std::vector<double> x;  ///< cell centres
  double dx = 0.0;
  double dt = 0.0;
  std::vector<Snapshot> snapshots;
  FrontTrack track;
  double min_value = 0.0;  ///< extrema of u and v over all steps
  double max_value = 0.0;
};

/// Throws Error(Config) for dt > 0.4 dx^2, n_cells < 400 or bad initial data,
/// and Error(Instability) once any |value| exceeds 10.
SimulationResult run(const SimulationConfig& config, const ModelParams& params, const WaveProfile* profile = nullptr);

struct DecayOptions {
  PerturbationShape shape = PerturbationShape::Gaussian;
  double t_end = 1000.0;
  double sample_interval = 10.0;
  int n_cells = 800;
  double max_shift = 20.0;
};

struct DecaySeries {
  std::vector<double> times;
  std::vector<double> deviation;  ///< L2 distance to the best shift of the reference solution
  std::vector<double> shift;
};

/// Co-moving runs from the profile with and without the perturbation; the
/// deviation at each sample is minimised over shifts of the unperturbed run.
/// Requires amplitude <= 0.05.
DecaySeries perturbation_decay(const WaveProfile& profile, double amplitude, double width,
                               const DecayOptions& options = {});

/// u level (1 - alpha mu)/2 crossing, left to right; NaN when absent.
double front_position(const std::vector<double>& x, const std::vector<double>& u, double level);

}  // namespace twstab
