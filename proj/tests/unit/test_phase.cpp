#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "ofront/error.hpp"
#include "ofront/phase.hpp"

using namespace ofront;

namespace {

KernelSpec skewed_kernel() {
  KernelSpec k;
  k.N = 2;
  k.a = {0.25, 0.5, 0.0, 1.5, -0.1};
  k.d = 0.3;
  k.c_star = -0.2;
  return k;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_CASE("horizontal fundamental solution is a modified Bessel function") {
  // theta' = theta_{l+1} + theta_{l-1} - 2 theta_l has M_l(t) = exp(-2t) I_l(2t).
  const KernelSpec k = horizontal_kernel();
  for (double t : {0.1, 1.0, 10.0}) {
    const GreensSlice g = greens_function(k, t, -60, 60);
    for (long l : {0L, 1L, 3L, -7L})
      CHECK(g.M[static_cast<std::size_t>(l + 60)] ==
            doctest::Approx(std::exp(-2.0 * t) * std::cyl_bessel_i(static_cast<double>(std::abs(l)), 2.0 * t))
                .epsilon(1e-10));
    CHECK(g.mass == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("fundamental solution drifts with the group velocity") {
  const KernelSpec k = skewed_kernel();
  CHECK(k.group_velocity() == doctest::Approx(-(-2 * 0.25 - 0.5 + 1.5 - 2 * 0.1)));
  const double t = 4.0;
  const GreensSlice g = greens_function(k, t, -300, 300);
  double first = 0.0;
  for (std::size_t i = 0; i < g.M.size(); ++i) first += (g.l_min + static_cast<long>(i)) * g.M[i];
  CHECK(first == doctest::Approx(k.group_velocity() * t).epsilon(1e-9));
}

TEST_CASE("linear evolution of a single Fourier mode") {
  const KernelSpec k = skewed_kernel();
  const int P = 48;
  const double w = 2.0 * std::numbers::pi * 3 / P;
  PhaseField h0;
  h0.theta.resize(P);
  for (int l = 0; l < P; ++l) h0.theta[l] = std::cos(w * l);
  const double t = 2.5;
  const PhaseField h = linear_evolve(k, h0, t);
  const Symbol s = fourier_symbol(k.a, w);
  for (int l = 0; l < P; ++l) CHECK(h.theta[l] == doctest::Approx(std::exp(t * s.f) * std::cos(w * l + t * s.p)).epsilon(1e-12));
}

TEST_CASE("Cole-Hopf conjugacy") {
  const KernelSpec k = skewed_kernel();
  const PhaseField th0 = random_field(64, 1.0, 7);
  const auto traj = integrate_phase(PhaseModel::ch, k, th0, 2.0, 1e-3);
  CHECK(sup_diff(traj.back().theta, ch_flow(k, th0, 2.0).theta) < 1e-9);

  const PhaseField h = cole_hopf(k, th0, Transform::forward);
  CHECK(sup_diff(cole_hopf(k, h, Transform::inverse).theta, th0.theta) < 1e-13);
  PhaseField bad = h;
  bad.theta[5] = -1.0;
  CHECK_THROWS_AS(cole_hopf(k, bad, Transform::inverse), Error);
}

TEST_CASE("phase models commute with constant shifts") {
  const KernelSpec k = skewed_kernel();
  const PhaseField th = random_field(32, 0.5, 3);
  auto shifted = th.theta;
  for (double& v : shifted) v += 4.25;
  for (PhaseModel m : {PhaseModel::linear, PhaseModel::ch})
    CHECK(sup_diff(theta_rhs(m, k, th.theta), theta_rhs(m, k, shifted)) < 1e-13);
  std::vector<double> flat(32, 1.0);
  for (double v : theta_rhs(PhaseModel::ch, k, flat)) CHECK(v == doctest::Approx(k.c_star));
}

TEST_CASE("log-log fits and differences") {
  const auto t = geometric_times(10.0, 500.0, 12);
  CHECK(t.front() == doctest::Approx(10.0));
  CHECK(t.back() == doctest::Approx(500.0));
  std::vector<double> y;
  for (double s : t) y.push_back(3.0 * std::pow(s, -1.5));
  const Fit f = fit_loglog(t, y);
  CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(nth_difference({0.0, 1.0, 4.0, 9.0}, 2) == std::vector<double>{2.0, 2.0, -14.0, 10.0});
  CHECK(shift_difference({1.0, 2.0, 4.0}, 2) == std::vector<double>{3.0, -1.0, -2.0});
}

TEST_CASE("square wave and seeded random fields") {
  const PhaseField s = square_wave(8, 1.0);
  CHECK(std::accumulate(s.theta.begin(), s.theta.end(), 0.0) == doctest::Approx(0.0));
  CHECK(sup_norm(s.theta) == 1.0);
  CHECK(random_field(16, 1.0, 5).theta == random_field(16, 1.0, 5).theta);
  CHECK(random_field(16, 1.0, 5).theta != random_field(16, 1.0, 6).theta);
}

TEST_CASE("phase error paths") {
  const KernelSpec k = skewed_kernel();
  try {
    integrate_phase(PhaseModel::linear, k, random_field(16, 1.0, 1), 1.0, 10.0 * k.dt_max());
    FAIL("large step accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepSizeTooLarge);
  }
  try {
    decay_exponents(horizontal_kernel(), square_wave(64, 1.0), 1, 10.0, 500.0);
    FAIL("short period accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowTooSmall);
  }
  CHECK_THROWS_AS(greens_function(k, -1.0, -5, 5), Error);
}
