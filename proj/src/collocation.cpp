#include "twstab/collocation.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "twstab/error.hpp"

namespace twstab {

namespace {

struct Discretisation {
  const BvpSystem& sys;
  const std::vector<double>& grid;
  int n;
  int np;
  int nodes;

  Eigen::Index size() const { return static_cast<Eigen::Index>(n) * nodes + np; }

  Eigen::VectorXd state(const Eigen::VectorXd& X, int i) const { return X.segment(static_cast<Eigen::Index>(i) * n, n); }
  Eigen::VectorXd params(const Eigen::VectorXd& X) const { return X.tail(np); }

  // Residual only.
  void residual(const Eigen::VectorXd& X, Eigen::VectorXd& R) const {
    R.resize(size());
    const Eigen::VectorXd p = params(X);
    Eigen::VectorXd fi(n), fj(n), fm(n);
    sys.rhs(grid[0], state(X, 0), p, fi);
    for (int i = 0; i + 1 < nodes; ++i) {
      const double h = grid[i + 1] - grid[i];
      const Eigen::VectorXd yi = state(X, i);
      const Eigen::VectorXd yj = state(X, i + 1);
      sys.rhs(grid[i + 1], yj, p, fj);
      const Eigen::VectorXd ym = 0.5 * (yi + yj) - (h / 8.0) * (fj - fi);
      sys.rhs(grid[i] + 0.5 * h, ym, p, fm);
      R.segment(static_cast<Eigen::Index>(i) * n, n) = (yj - yi) / h - (fi + 4.0 * fm + fj) / 6.0;
      fi = fj;
    }
    Eigen::VectorXd g(n + np);
    sys.boundary(state(X, 0), state(X, nodes - 1), p, g);
    R.tail(n + np) = g;
  }

  void jacobian(const Eigen::VectorXd& X, Eigen::SparseMatrix<double>& J) const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(nodes) * (2 * n * n + n * np) + (n + np) * (2 * n + np));
    const Eigen::VectorXd p = params(X);
    const Eigen::Index pcol = static_cast<Eigen::Index>(n) * nodes;
    Eigen::VectorXd fi(n), fj(n), fm(n);
    Eigen::MatrixXd Ji(n, n), Jj(n, n), Jm(n, n);
    Eigen::MatrixXd Pi(n, np), Pj(n, np), Pm(n, np);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

    sys.rhs(grid[0], state(X, 0), p, fi);
    sys.jacobian(grid[0], state(X, 0), p, Ji, Pi);
    for (int i = 0; i + 1 < nodes; ++i) {
      const double h = grid[i + 1] - grid[i];
      const Eigen::VectorXd yi = state(X, i);
      const Eigen::VectorXd yj = state(X, i + 1);
      sys.rhs(grid[i + 1], yj, p, fj);
      sys.jacobian(grid[i + 1], yj, p, Jj, Pj);
      const Eigen::VectorXd ym = 0.5 * (yi + yj) - (h / 8.0) * (fj - fi);
      sys.rhs(grid[i] + 0.5 * h, ym, p, fm);
      sys.jacobian(grid[i] + 0.5 * h, ym, p, Jm, Pm);

      const Eigen::MatrixXd dri = -I / h - (Ji + 4.0 * Jm * (0.5 * I + (h / 8.0) * Ji)) / 6.0;
      const Eigen::MatrixXd drj = I / h - (Jj + 4.0 * Jm * (0.5 * I - (h / 8.0) * Jj)) / 6.0;
      const Eigen::Index row = static_cast<Eigen::Index>(i) * n;
      for (int r = 0; r < n; ++r) {
        for (int k = 0; k < n; ++k) {
          if (dri(r, k) != 0.0) trip.emplace_back(row + r, row + k, dri(r, k));
          if (drj(r, k) != 0.0) trip.emplace_back(row + r, row + n + k, drj(r, k));
        }
      }
      if (np > 0) {
        const Eigen::MatrixXd dym = -(h / 8.0) * (Pj - Pi);
        const Eigen::MatrixXd drp = -(Pi + 4.0 * (Jm * dym + Pm) + Pj) / 6.0;
        for (int r = 0; r < n; ++r)
          for (int k = 0; k < np; ++k)
            if (drp(r, k) != 0.0) trip.emplace_back(row + r, pcol + k, drp(r, k));
      }
      fi = fj;
      Ji = Jj;
      Pi = Pj;
    }

    // Boundary rows by central differences.
    const Eigen::Index brow = static_cast<Eigen::Index>(n) * (nodes - 1);
    Eigen::VectorXd ya = state(X, 0), yb = state(X, nodes - 1), pp = p;
    Eigen::VectorXd gp(n + np), gm(n + np);
    auto column = [&](double& x, Eigen::Index col) {
      const double saved = x;
      const double step = 1e-7 * std::max(1.0, std::abs(saved));
      x = saved + step;
      sys.boundary(ya, yb, pp, gp);
      x = saved - step;
      sys.boundary(ya, yb, pp, gm);
      x = saved;
      for (int r = 0; r < n + np; ++r) {
        const double d = (gp(r) - gm(r)) / (2.0 * step);
        if (d != 0.0) trip.emplace_back(brow + r, col, d);
      }
    };
    for (int k = 0; k < n; ++k) column(ya(k), k);
    for (int k = 0; k < n; ++k) column(yb(k), static_cast<Eigen::Index>(n) * (nodes - 1) + k);
    for (int k = 0; k < np; ++k) column(pp(k), pcol + k);

    J.resize(size(), size());
    J.setFromTriplets(trip.begin(), trip.end());
  }
};

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

BvpSolution solve_collocation(const BvpSystem& sys, std::vector<double> grid, Eigen::MatrixXd y_guess,
                              Eigen::VectorXd p_guess, const NewtonOptions& options) {
  const int n = sys.n_state;
  const int np = sys.n_param;
  const int nodes = static_cast<int>(grid.size());
  if (nodes < 2 || y_guess.rows() != n || y_guess.cols() != nodes || p_guess.size() != np)
    throw Error(ErrorCode::Parameter, "solve_collocation: inconsistent grid/guess dimensions");
  for (int i = 0; i + 1 < nodes; ++i)
    if (!(grid[i + 1] > grid[i])) throw Error(ErrorCode::Parameter, "solve_collocation: grid must be strictly increasing");

  Discretisation disc{sys, grid, n, np, nodes};
  Eigen::VectorXd X(disc.size());
  for (int i = 0; i < nodes; ++i) X.segment(static_cast<Eigen::Index>(i) * n, n) = y_guess.col(i);
  X.tail(np) = p_guess;

  Eigen::VectorXd R;
  disc.residual(X, R);
  double rnorm = inf_norm(R);
  Eigen::SparseMatrix<double> J;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (!std::isfinite(rnorm)) break;
    if (rnorm <= options.tolerance) break;
    disc.jacobian(X, J);
    if (it == 0) lu.analyzePattern(J);
    lu.factorize(J);
    if (lu.info() != Eigen::Success) {
      lu.analyzePattern(J);
      lu.factorize(J);
      if (lu.info() != Eigen::Success) throw SolverFailure("collocation: singular Newton matrix", rnorm);
    }
    const Eigen::VectorXd dX = lu.solve(-R);
    if (!dX.allFinite()) throw SolverFailure("collocation: non-finite Newton step", rnorm);

    const double r2 = R.norm();
    double t = 1.0;
    Eigen::VectorXd Xn, Rn;
    bool accepted = false;
    for (int k = 0; k < 12; ++k, t *= 0.5) {
      Xn = X + t * dX;
      disc.residual(Xn, Rn);
      const double rn2 = Rn.norm();
      if (std::isfinite(rn2) && rn2 <= (1.0 - 1e-4 * t) * r2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Accept a tiny step when already near round-off.
      if (std::isfinite(Rn.norm()) && inf_norm(Rn) < 100.0 * options.tolerance) {
        X = Xn;
        R = Rn;
        rnorm = inf_norm(R);
        continue;
      }
      std::ostringstream msg;
      msg << "collocation: line search failed at iteration " << it << " (residual " << rnorm << ")";
      throw SolverFailure(msg.str(), rnorm);
    }
    X = Xn;
    R = Rn;
    rnorm = inf_norm(R);
    if (sys.check_params) sys.check_params(X.tail(np));
    if (inf_norm(t * dX) <= 1e-14 * (1.0 + inf_norm(X)) && rnorm <= 1e3 * options.tolerance) {
      ++it;
      break;
    }
  }
  if (!(rnorm <= 1e3 * options.tolerance)) {
    std::ostringstream msg;
    msg << "collocation: Newton did not converge in " << options.max_iterations << " iterations (residual " << rnorm
        << ")";
    throw SolverFailure(msg.str(), rnorm);
  }

  BvpSolution sol;
  sol.grid = std::move(grid);
  sol.y.resize(n, nodes);
  for (int i = 0; i < nodes; ++i) sol.y.col(i) = X.segment(static_cast<Eigen::Index>(i) * n, n);
  sol.p = X.tail(np);
  sol.residual_norm = rnorm;
  sol.iterations = it;
  return sol;
}

}  // namespace twstab
