#pragma once

#include "twstab/profile.hpp"

namespace fixture {

inline twstab::ModelParams reference_params() { return twstab::ModelParams::aedes_aegypti(); }

inline twstab::ModelParams alpha_one_params() {
  twstab::ModelParams p = twstab::ModelParams::aedes_aegypti();
  p.alpha = 1.0;
  return p;
}

// Solved once per test binary.
inline const twstab::WaveProfile& reference_profile() {
  static const twstab::WaveProfile w = twstab::solve_profile(reference_params());
  return w;
}

inline const twstab::WaveProfile& alpha_one_profile() {
  static const twstab::WaveProfile w = twstab::solve_profile(alpha_one_params());
  return w;
}

}  // namespace fixture
