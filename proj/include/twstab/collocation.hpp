#pragma once

// Fourth-order Hermite-Simpson (three-point Lobatto IIIA) collocation for
// first-order two-point boundary-value problems with unknown parameters,
// solved by damped Newton on the full discrete system.

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace twstab {

struct BvpSystem {
  int n_state = 0;
  int n_param = 0;

  // f(z, y, p)
  std::function<void(double, const Eigen::VectorXd&, const Eigen::VectorXd&, Eigen::VectorXd&)> rhs;
  // df/dy (n_state x n_state) and df/dp (n_state x n_param)
  std::function<void(double, const Eigen::VectorXd&, const Eigen::VectorXd&, Eigen::MatrixXd&, Eigen::MatrixXd&)>
      jacobian;
  // g(y(a), y(b), p), n_state + n_param components. Differentiated numerically.
  std::function<void(const Eigen::VectorXd&, const Eigen::VectorXd&, const Eigen::VectorXd&, Eigen::VectorXd&)>
      boundary;
  // Optional hook run on every accepted iterate; may throw to abort.
  std::function<void(const Eigen::VectorXd&)> check_params;
};

struct NewtonOptions {
  int max_iterations = 100;
  double tolerance = 1e-11;
};

struct BvpSolution {
  std::vector<double> grid;
  Eigen::MatrixXd y;  // n_state x n_nodes
  Eigen::VectorXd p;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Throws SolverFailure (carrying the last residual) when Newton stalls or
/// exhausts its iteration budget.
BvpSolution solve_collocation(const BvpSystem& system, std::vector<double> grid, Eigen::MatrixXd y_guess,
                              Eigen::VectorXd p_guess, const NewtonOptions& options = {});

}  // namespace twstab
