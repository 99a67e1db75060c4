#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "ofront/coefficients.hpp"
#include "ofront/error.hpp"
#include "ofront/wave.hpp"

using namespace ofront;

namespace {

AuxiliaryResult pipeline(int sh, int sv) {
  const Direction d = make_direction(sh, sv);
  AuxiliaryResult r = compute_auxiliary(solve_wave(d, make_nonlinearity(0.45, 6.0), default_grid(d)));
  curvature_parameters(r.coeffs, nullptr);
  return r;
}

const AuxiliaryResult& oblique() {
  static const AuxiliaryResult r = pipeline(2, 5);
  return r;
}

}  // namespace

TEST_CASE("horizontal margin against the closed form") {
  // f(w)/w^2 = 2(cos w - 1)/w^2 increases on (0, pi], so the supremum sits at w = pi.
  const Margin m = stability_margin({1.0, 0.0, 1.0});
  CHECK(m.M == doctest::Approx(-4.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-9));
  CHECK(m.omega == doctest::Approx(std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("fourier symbol against direct summation") {
  const std::vector<double> a{0.3, -0.1, 0.0, 0.7, 0.2};
  for (double w : {0.0, 0.4, 1.7, 3.1}) {
    double f = 0.0, p = 0.0;
    for (int k = -2; k <= 2; ++k) {
      f += a[k + 2] * (std::cos(k * w) - 1.0);
      p += a[k + 2] * std::sin(k * w);
    }
    const Symbol s = fourier_symbol(a, w);
    CHECK(s.f == doctest::Approx(f).epsilon(1e-14));
    CHECK(s.p == doctest::Approx(p).epsilon(1e-14));
  }
}

TEST_CASE("horizontal pipeline reduces to the nearest-neighbour kernel") {
  const AuxiliaryResult r = pipeline(1, 0);
  const CoefficientSet& c = r.coeffs;
  CHECK(c.ak(1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(c.ak(-1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(c.ak(2)) < 1e-6);
  CHECK(c.Lambda == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(c.group_velocity) < 1e-9);
  CHECK(c.kappa_H == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(c.M_margin == doctest::Approx(-4.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-6));
  CHECK(c.d == doctest::Approx(-0.163881447909).epsilon(1e-6));
}

TEST_CASE("oblique coefficients") {
  const CoefficientSet& c = oblique().coeffs;
  CHECK(c.N == 10);
  // Values of the solvability assembly at a = 0.45 (see README: they differ from the reference table).
  CHECK(c.ak(2) == doctest::Approx(0.402).epsilon(2e-3));
  CHECK(c.ak(-2) == doctest::Approx(0.675).epsilon(2e-3));
  CHECK(c.ak(5) == doctest::Approx(0.994).epsilon(2e-3));
  CHECK(c.ak(-5) == doctest::Approx(0.808).epsilon(2e-3));
  CHECK(c.Lambda == doctest::Approx(52.2712).epsilon(1e-4));
  CHECK(c.group_velocity == doctest::Approx(-0.118298).epsilon(1e-4));
  CHECK(c.M_margin == doctest::Approx(-0.0249611).epsilon(1e-4));
  for (int k : {1, 6, 8, 9}) {
    CHECK(c.ak(k) == 0.0);
    CHECK(c.ak(-k) == 0.0);
  }

  double lam = 0.0, gv = 0.0;
  for (int k = -c.N; k <= c.N; ++k) {
    lam += c.ak(k) * k * k;
    gv -= c.ak(k) * k;
  }
  CHECK(c.Lambda == doctest::Approx(lam).epsilon(1e-12));
  CHECK(c.group_velocity == doctest::Approx(gv).epsilon(1e-12));
}

TEST_CASE("speed identity and d forms") {
  const CoefficientSet& c = oblique().coeffs;
  const IdentityReport rep = identity_report(c, nullptr);
  CHECK(std::abs(rep.speed) <= 1e-4 * (1.0 + std::abs(c.c_star)));
  CHECK(std::abs(c.d_alpha - c.d_identity) <= 1e-6 * (1.0 + std::abs(c.d)));
  CHECK(c.kappa_H == doctest::Approx(c.Lambda / 2.0));
}

TEST_CASE("curvature weights sum to one") {
  // With sum C_k = 1 and sum k C_k = 0 the definitions give sum A_k = sum B_k = 1.
  const CoefficientSet& c = oblique().coeffs;
  CHECK(std::accumulate(c.C.begin(), c.C.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::accumulate(c.A.begin(), c.A.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::accumulate(c.B.begin(), c.B.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("reference deltas cover the tabulated indices") {
  const auto deltas = reference_deltas(oblique().coeffs);
  CHECK(deltas.size() == 20);
  for (const auto& d : deltas) CHECK(d.computed == oblique().coeffs.ak(d.k));
  const ReferenceTable& t = reference_table_2_5();
  CHECK(t.plus[4] == 0.966);
  CHECK(t.minus[3] == 0.179);
}

TEST_CASE("invalid curvature weights") {
  CoefficientSet c = oblique().coeffs;
  std::vector<double> C(c.a.size(), 0.0);
  CHECK_THROWS_AS(curvature_parameters(c, nullptr, &C), Error);
  CHECK_THROWS_AS(stability_margin({1.0, 0.0, 1.0}, 1), Error);
}
