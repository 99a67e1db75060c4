#include "ofront/grid.hpp"

#include <algorithm>
#include <cmath>

#include "ofront/error.hpp"

namespace ofront {

WaveGrid make_grid(double L, int per_unit) {
  if (per_unit < 1) throw Error(ErrorCode::InvalidGrid, "per_unit must be positive");
  if (!(L > 0.0) || std::abs(L - std::round(L)) > 1e-12)
    throw Error(ErrorCode::InvalidGrid, "L must be a positive integer");
  WaveGrid g;
  g.L = std::round(L);
  g.per_unit = per_unit;
  g.dx = 1.0 / per_unit;
  g.n_intervals = static_cast<int>(2 * g.L) * per_unit;
  return g;
}

WaveGrid default_grid(const Direction& dir, int per_unit) {
  return make_grid(std::max(40.0, 12.0 * dir.sigma_inf), per_unit);
}

GridFunction derivative(const GridFunction& f, double dx, double left, double right) {
  const long n = static_cast<long>(f.size());
  GridFunction d(f.size(), 0.0);
  const double s = 1.0 / (12.0 * dx);
  for (long k = 0; k < n; ++k) {
    d[k] = s * (clamped(f, k - 2, left, right) - 8.0 * clamped(f, k - 1, left, right) +
                8.0 * clamped(f, k + 1, left, right) - clamped(f, k + 2, left, right));
  }
  return d;
}

double inner(const GridFunction& f, const GridFunction& h, double dx) {
  const std::size_t n = f.size();
  if (n == 0) return 0.0;
  double s = 0.5 * (f[0] * h[0] + f[n - 1] * h[n - 1]);
  for (std::size_t k = 1; k + 1 < n; ++k) s += f[k] * h[k];
  return s * dx;
}

ShiftStencil make_stencil(double position) {
  ShiftStencil s;
  const double r = std::round(position);
  if (std::abs(position - r) < 1e-10) {
    s.base = static_cast<long>(r);
    return s;
  }
  const long f = static_cast<long>(std::floor(position));
  s.base = f - 2;
  s.count = 6;
  for (int a = 0; a < 6; ++a) {
    double w = 1.0;
    const double xa = static_cast<double>(s.base + a);
    for (int b = 0; b < 6; ++b) {
      if (b == a) continue;
      const double xb = static_cast<double>(s.base + b);
      w *= (position - xb) / (xa - xb);
    }
    s.w[a] = w;
  }
  return s;
}

double evaluate(const GridFunction& f, const ShiftStencil& s, double left, double right) {
  double v = 0.0;
  for (int a = 0; a < s.count; ++a) v += s.w[a] * clamped(f, s.base + a, left, right);
  return v;
}

double sample(const GridFunction& f, const WaveGrid& grid, double xi, double left, double right) {
  const double pos = (xi + grid.L) / grid.dx;
  if (pos < -3.0) return left;
  if (pos > grid.n_intervals + 3.0) return right;
  return evaluate(f, make_stencil(pos), left, right);
}

}  // namespace ofront
