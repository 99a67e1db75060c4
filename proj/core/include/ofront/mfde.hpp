#pragma once

#include <Eigen/Sparse>
#include <array>
#include <utility>
#include <vector>

#include "ofront/grid.hpp"
#include "ofront/nonlinearity.hpp"

namespace ofront {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Discretization of  c*Phi' + sum_nu Phi(xi + s_nu) - 4*Phi + g(Phi)  on the interior
// nodes 1..n_intervals-1 of a WaveGrid. Boundary nodes carry the limits 0 and 1;
// arguments beyond the grid take those limits as well.
class MfdeOperator {
 public:
  MfdeOperator(const WaveGrid& grid, const Nonlinearity& nonlin, const std::array<double, 4>& shifts);

  int interior() const { return grid_.n_intervals - 1; }
  const WaveGrid& grid() const { return grid_; }

  // Residual at interior nodes; phi holds all nodes.
  Eigen::VectorXd residual(const GridFunction& phi, double c) const;

  // d(residual)/d(phi interior).
  SparseMatrix jacobian(const GridFunction& phi, double c) const;

  // Same operator applied to a perturbation p that vanishes outside the grid.
  Eigen::VectorXd apply_linear(const GridFunction& phi, double c, const GridFunction& p) const;

  // Fourth-order derivative stencil of the interior node k as (node, weight) pairs.
  std::vector<std::pair<long, double>> derivative_row(long k) const;

 private:
  WaveGrid grid_;
  Nonlinearity nonlin_;
  std::array<ShiftStencil, 4> shift_{};
};

// Solver for bordered systems
//   [J  v] [x   ]   [f]
//   [w' 0] [beta] = [g]
// with J banded and possibly nearly singular along one direction. J + gamma*e*e' is
// factored with banded LU (e = unit vector at the pin node) and the border is reduced to
// a 2x2 scalar system. The transpose flag solves with J' in place of J.
class BorderedSolver {
 public:
  BorderedSolver(const SparseMatrix& J, int pin, bool transpose = false);

  // Fixes the border vectors; must be called before solve().
  void set_border(const Eigen::VectorXd& v, const Eigen::VectorXd& w);

  void solve(const Eigen::VectorXd& f, double g, Eigen::VectorXd& x, double& beta) const;

  int size() const { return n_; }

 private:
  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& f) const;

  int n_ = 0;
  int kl_ = 0;
  int ku_ = 0;
  int pin_ = 0;
  bool transpose_ = false;
  double gamma_ = 1.0;
  std::vector<double> band_;
  std::vector<int> ipiv_;
  Eigen::VectorXd w_, b_, d_;  // b = M^-1 v, d = M^-1 e
  double m11_ = 0, m12_ = 0, m21_ = 0, m22_ = 0;
};

// Integer-shift operator of the unrescaled wave equation for a direction.
std::array<double, 4> direction_shifts(const Direction& dir, double phi_angle = 0.0);

}  // namespace ofront
