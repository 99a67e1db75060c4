#include "ofront/nonlinearity.hpp"

#include <cmath>

#include "ofront/error.hpp"

namespace ofront {

Nonlinearity make_nonlinearity(double a, double scale, bool literal_sign) {
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::InvalidArgument, "detuning a must lie in (0,1)");
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale must be positive");
  Nonlinearity g{a, scale, literal_sign};
  const double tol = 1e-14 * scale;
  if (std::abs(g.g(0.0)) > tol || std::abs(g.g(a)) > tol || std::abs(g.g(1.0)) > tol)
    throw Error(ErrorCode::InvalidArgument, "zeros of g misplaced");
  return g;
}

}  // namespace ofront
