#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ofront/error.hpp"
#include "ofront/wave.hpp"

using namespace ofront;

namespace {

// Level-set speed of the horizontal chain U_n' = U_{n+1} + U_{n-1} - 2U_n + g(U_n) by plain RK4.
double chain_speed(const Nonlinearity& g, double T) {
  const int n = 400;
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = i < n / 2 ? 0.0 : 1.0;
  auto rhs = [&](const std::vector<double>& v) {
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
      const double lft = i > 0 ? v[i - 1] : 0.0;
      const double rgt = i + 1 < n ? v[i + 1] : 1.0;
      r[i] = lft + rgt - 2.0 * v[i] + g.g(v[i]);
    }
    return r;
  };
  auto crossing = [&](const std::vector<double>& v) {
    for (int i = 0; i + 1 < n; ++i)
      if (v[i] < 0.5 && v[i + 1] >= 0.5) return i + (0.5 - v[i]) / (v[i + 1] - v[i]);
    return -1.0;
  };
  const double dt = 0.02;
  double x0 = 0.0;
  const int steps = static_cast<int>(T / dt);
  for (int s = 0; s < steps; ++s) {
    const auto k1 = rhs(u);
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = u[i] + 0.5 * dt * k1[i];
    const auto k2 = rhs(w);
    for (int i = 0; i < n; ++i) w[i] = u[i] + 0.5 * dt * k2[i];
    const auto k3 = rhs(w);
    for (int i = 0; i < n; ++i) w[i] = u[i] + dt * k3[i];
    const auto k4 = rhs(w);
    for (int i = 0; i < n; ++i) u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (s + 1 == steps / 2) x0 = crossing(u);
  }
  return (crossing(u) - x0) / (T / 2.0);
}

}  // namespace

TEST_CASE("horizontal wave matches a direct chain simulation") {
  const Direction d = make_direction(1, 0);
  const Nonlinearity g = make_nonlinearity(0.45, 6.0);
  const WaveSolution w = solve_wave(d, g, default_grid(d));
  // The crossing of a discrete front wobbles with period 1/|c|; T/2 = 66.2 spans ten periods.
  const double oracle = chain_speed(g, 2.0 * 10.0 / 0.151136443732);
  CHECK(w.c == doctest::Approx(oracle).epsilon(2e-3));
  CHECK(w.c == doctest::Approx(-0.151136443732).epsilon(1e-9));
  CHECK(w.residual_inf < 1e-9);
}

TEST_CASE("wave invariants") {
  const Direction d = make_direction(2, 3);
  const WaveSolution w = solve_wave(d, make_nonlinearity(0.45, 6.0), default_grid(d));
  CHECK(w.c == doctest::Approx(-0.593787489495).epsilon(1e-9));
  CHECK(w.phi.front() == 0.0);
  CHECK(w.phi.back() == 1.0);
  CHECK(w.phi[w.grid.zero_index()] == doctest::Approx(0.5).epsilon(1e-12));
  double drop = 0.0;
  for (std::size_t k = 0; k + 1 < w.phi.size(); ++k) drop = std::max(drop, w.phi[k] - w.phi[k + 1]);
  CHECK(drop <= 1e-8 + 10.0 * (w.tail_left + w.tail_right));
  CHECK(w.tail_left < 1e-6);
  CHECK(w.tail_right < 1e-6);
  double psi_min = 1.0;
  for (std::size_t k = 1; k + 1 < w.psi.size(); ++k) psi_min = std::min(psi_min, w.psi[k]);
  CHECK(psi_min > 0.0);
  CHECK(w.psi_dphi == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("speed sign follows the nonlinearity integral") {
  const Direction d = make_direction(1, 0);
  const WaveSolution fast = solve_wave(d, make_nonlinearity(0.3, 6.0), default_grid(d));
  const WaveSolution slow = solve_wave(d, make_nonlinearity(0.45, 6.0), default_grid(d));
  CHECK(fast.c < slow.c);
  CHECK(slow.c < 0.0);
}

TEST_CASE("wave error paths") {
  const Direction d = make_direction(1, 0);
  CHECK_THROWS_AS(make_grid(2.5, 20), Error);
  try {
    solve_wave(d, make_nonlinearity(0.45, 6.0), make_grid(40, 5));
    FAIL("coarse grid accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidGrid);
  }
  try {
    solve_wave(d, make_nonlinearity(0.45, 6.0, true), default_grid(d));
    FAIL("monostable nonlinearity accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}
