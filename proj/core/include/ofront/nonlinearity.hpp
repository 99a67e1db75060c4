#pragma once

namespace ofront {

// Cubic bistable nonlinearity g(u) = s*u*(1-u)*(u-a).
// literal_sign flips the overall sign, i.e. g(u) = s*u*(u-1)*(u-a); that form has
// unstable states 0 and 1 and is kept only for comparison runs.
struct Nonlinearity {
  double a = 0.45;
  double scale = 6.0;
  bool literal_sign = false;

  double g(double u) const { return sgn() * scale * u * (1.0 - u) * (u - a); }
  double g1(double u) const {
    return sgn() * scale * (-3.0 * u * u + 2.0 * (1.0 + a) * u - a);
  }
  double g2(double u) const { return sgn() * scale * (-6.0 * u + 2.0 * (1.0 + a)); }
  double g3(double) const { return sgn() * scale * -6.0; }

  // Integral of g over [0, 1]; its sign decides which state invades.
  double integral() const { return sgn() * scale * (1.0 - 2.0 * a) / 12.0; }

  bool bistable() const { return g1(0.0) < 0.0 && g1(1.0) < 0.0; }

 private:
  double sgn() const { return literal_sign ? -1.0 : 1.0; }
};

Nonlinearity make_nonlinearity(double a, double scale, bool literal_sign = false);

}  // namespace ofront
