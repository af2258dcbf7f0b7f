#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twstab {

enum class ErrorCode {
  Domain,
  SingularPoint,
  DegenerateEigenvalue,
  Parameter,
  SolverFailure,
  Bracket,
  InsufficientTail,
  Escape,
  SpectralRegion,
  Stiffness,
  OnZero,
  Aliasing,
  Instability,
  Config,
  Io,
  Mismatch,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Newton did not converge; carries the residual of the last iterate.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double last_residual)
      : Error(ErrorCode::SolverFailure, what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

// Integration of the compound system broke down at position z.
class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& what, double z) : Error(ErrorCode::Stiffness, what), z_(z) {}
  double z() const noexcept { return z_; }

 private:
  double z_;
};

// Argument increments along a contour stayed too large after refinement.
class AliasingError : public Error {
 public:
  AliasingError(const std::string& what, std::size_t segment, double jump)
      : Error(ErrorCode::Aliasing, what), segment_(segment), jump_(jump) {}
  std::size_t segment() const noexcept { return segment_; }
  double jump() const noexcept { return jump_; }

 private:
  std::size_t segment_;
  double jump_;
};

}  // namespace twstab
