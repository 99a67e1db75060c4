#pragma once

#include <vector>

#include "ofront/geometry.hpp"

namespace ofront {

// Uniform grid xi_k = -L + k*dx, k = 0..n_intervals, with dx = 1/per_unit so that
// integer shifts are exact node offsets.
struct WaveGrid {
  double L = 40.0;
  int per_unit = 20;
  double dx = 0.05;
  int n_intervals = 1600;

  double xi(int k) const { return -L + k * dx; }
  int nodes() const { return n_intervals + 1; }
  int zero_index() const { return n_intervals / 2; }
};

// L must be a positive integer number of units.
WaveGrid make_grid(double L, int per_unit);
// L = max(40, 12*sigma_inf); keeps the profile tails at +-L below about 1e-6.
WaveGrid default_grid(const Direction& dir, int per_unit = 20);

using GridFunction = std::vector<double>;

// Fourth-order central first derivative; values beyond the grid take the given limits.
GridFunction derivative(const GridFunction& f, double dx, double left = 0.0, double right = 0.0);

// Composite trapezoid rule for <f, h>.
double inner(const GridFunction& f, const GridFunction& h, double dx);

// Value at node index k, with the given constant limits outside [0, n-1].
inline double clamped(const GridFunction& f, long k, double left, double right) {
  if (k < 0) return left;
  if (k >= static_cast<long>(f.size())) return right;
  return f[static_cast<std::size_t>(k)];
}

// Interpolation stencil for evaluating a grid function at a real index position.
// Integer positions reduce to a single node; otherwise six-point Lagrange (quintic).
struct ShiftStencil {
  long base = 0;  // first node index
  int count = 1;
  double w[6] = {1, 0, 0, 0, 0, 0};
};

ShiftStencil make_stencil(double position);

double evaluate(const GridFunction& f, const ShiftStencil& s, double left, double right);

// Evaluate f at real xi with the quintic local interpolant and constant limits.
double sample(const GridFunction& f, const WaveGrid& grid, double xi, double left, double right);

}  // namespace ofront
