#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "ofront/error.hpp"
#include "ofront/lattice.hpp"

using namespace ofront;

namespace {

struct Setup {
  Direction dir = make_direction(2, 3);
  Nonlinearity g = make_nonlinearity(0.45, 6.0);
  WaveSolution wave = solve_wave(dir, g, default_grid(dir));
  Profile profile{wave};
};

const Setup& setup() {
  static const Setup s;
  return s;
}

LatticeState rippled(int P, std::vector<double> kappa = {}, double T_run = 20.0) {
  InitialParams ip;
  ip.kind = InitialKind::rippled;
  ip.P = P;
  ip.kappa = std::move(kappa);
  ip.T_run = T_run;
  return build_initial(setup().profile, setup().dir, setup().g, ip);
}

double sup_diff(const LatticeState& a, const LatticeState& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) e = std::max(e, std::abs(a.u[i] - b.u[i]));
  return e;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("profile interpolation") {
  const Setup& s = setup();
  const WaveGrid& gr = s.wave.grid;
  for (int k = 100; k < gr.nodes() - 100; k += 137) {
    CHECK(s.profile(gr.xi(k)) == doctest::Approx(s.wave.phi[k]).epsilon(1e-13));
    if (s.wave.phi[k] > 1e-6 && s.wave.phi[k] < 1.0 - 1e-6)
      CHECK(s.profile.inverse(s.wave.phi[k]) == doctest::Approx(gr.xi(k)).epsilon(1e-9));
  }
  CHECK(s.profile(-1e4) >= 0.0);
  CHECK(s.profile(-1e4) < 1e-12);
  CHECK(s.profile(1e4) == doctest::Approx(1.0));
  CHECK(code_of([&] { s.profile.inverse(1.5); }) == ErrorCode::OutOfProfileRange);
}

TEST_CASE("right-hand side against a direct (i, j) stencil") {
  InitialParams ip;
  ip.kind = InitialKind::rippled_plus_localized;
  ip.P = 3;
  const LatticeState st = build_initial(setup().profile, setup().dir, setup().g, ip);
  const long Lp = st.l_period();
  std::map<std::pair<long, long>, double> field;
  for (long n = st.n_min; n <= st.n_max; ++n)
    for (int r = 0; r < st.P; ++r) field[{n, floor_mod(st.l_of(n, r), Lp)}] = st.val(n, r);
  auto value = [&](long n, long l) {
    if (n < st.n_min) return st.left;
    if (n > st.n_max) return st.right;
    return field.at({n, floor_mod(l, Lp)});
  };
  const auto rhs = lattice_rhs(st);
  double err = 0.0;
  for (long n = st.n_min; n <= st.n_max; ++n)
    for (int r = 0; r < st.P; ++r) {
      const long l = st.l_of(n, r);
      const auto ij = is_member(st.dir, n, l);
      REQUIRE(ij);
      const auto [i, j] = *ij;
      const double u = st.val(n, r);
      double s = st.nonlin.g(u);
      for (auto [di, dj] : {std::pair{1L, 0L}, {-1L, 0L}, {0L, 1L}, {0L, -1L}}) {
        const SublatticePoint q = to_transverse(st.dir, i + di, j + dj);
        s += value(q.n, q.l) - u;
      }
      err = std::max(err, std::abs(s - rhs[static_cast<std::size_t>((n - st.n_min) * st.P + r)]));
    }
  CHECK(err < 1e-14);
}

TEST_CASE("equilibria are preserved exactly") {
  for (double v : {0.0, 0.45, 1.0}) {
    const LatticeState s0 = uniform_state(setup().dir, setup().g, 4, -20, 20, v);
    const LatticeState s1 = evolve(s0, 5.0, 0.1).back();
    CHECK(sup_diff(s0, s1) == 0.0);
  }
}

TEST_CASE("comparison principle") {
  InitialParams hi, lo;
  hi.kind = InitialKind::rippled;
  hi.P = 4;
  hi.T_run = 20.0;
  hi.margin = 60.0;
  lo = hi;
  lo.mu = 0.75;  // shifts the front up in n, so the field is smaller
  const LatticeState a = build_initial(setup().profile, setup().dir, setup().g, hi);
  LatticeState b = a;
  for (long n = b.n_min; n <= b.n_max; ++n)
    for (int r = 0; r < b.P; ++r) {
      const long l = floor_mod(b.l_of(n, r), b.l_period());
      const double kap = 0.75 + (2 * l < b.l_period() ? 0.5 : -0.5);
      // The truncated profile tails are monotone only to ~1e-8, so order the data explicitly.
      b.ref(n, r) = std::min(a.val(n, r), setup().profile(static_cast<double>(n) - kap));
    }
  const auto ta = evolve(a, 20.0, 0.1, 2.0);
  const auto tb = evolve(b, 20.0, 0.1, 2.0);
  double worst = 1.0;
  for (std::size_t k = 0; k < ta.size(); ++k)
    for (std::size_t i = 0; i < ta[k].u.size(); ++i) worst = std::min(worst, ta[k].u[i] - tb[k].u[i]);
  CHECK(worst >= 0.0);
}

TEST_CASE("skewed periodicity: a P-periodic pattern repeated twice gives the same solution") {
  const long L1 = 2L * setup().dir.sigma_star_sq;
  std::vector<double> k1(static_cast<std::size_t>(L1)), k2(static_cast<std::size_t>(2 * L1));
  for (long l = 0; l < L1; ++l) k1[l] = 0.4 * std::sin(2.0 * std::numbers::pi * l / L1) + 0.1 * (l % 3);
  for (long l = 0; l < 2 * L1; ++l) k2[l] = k1[l % L1];
  const LatticeState a = evolve(rippled(2, k1), 10.0, 0.1).back();
  const LatticeState b = evolve(rippled(4, k2), 10.0, 0.1).back();
  REQUIRE(a.n_min == b.n_min);
  double err = 0.0;
  for (long n = b.n_min; n <= b.n_max; ++n)
    for (int r = 0; r < b.P; ++r) err = std::max(err, std::abs(b.val(n, r) - a.at(n, b.l_of(n, r))));
  CHECK(err < 1e-13);
}

TEST_CASE("time step halving") {
  const LatticeState s0 = rippled(4);
  const LatticeState a = evolve(s0, 20.0, 0.1).back();
  const LatticeState b = evolve(s0, 20.0, 0.05).back();
  CHECK(sup_diff(a, b) < 1e-6);
}

TEST_CASE("phase of an exact planar wave") {
  const Setup& s = setup();
  for (double t : {0.0, 3.3, 17.0}) {
    InitialParams ip;
    ip.mu = 0.37 + s.wave.c * t;
    ip.P = 2;
    LatticeState st = build_initial(s.profile, s.dir, s.g, ip);
    const PhaseTrace tr = extract_phase(st, s.profile);
    for (double gma : tr.gamma()) CHECK(gma == doctest::Approx(ip.mu).epsilon(1e-10));
    CHECK(phase_consistency(st, s.profile, tr) < 1e-10);
  }
}

TEST_CASE("phase extraction is equivariant under lattice translations") {
  const Direction& d = setup().dir;
  const long Lp = 4L * d.sigma_star_sq;
  std::vector<double> ka(static_cast<std::size_t>(Lp)), kb(static_cast<std::size_t>(Lp));
  for (long l = 0; l < Lp; ++l) ka[l] = 0.3 * std::cos(2.0 * std::numbers::pi * l / Lp);
  // Translating the field by the lattice step (tau, sigma) of the first neighbour.
  const int tau = d.tau[0], sig = d.sigma[0];
  for (long l = 0; l < Lp; ++l) kb[l] = ka[floor_mod(l - sig, Lp)] + tau;
  const PhaseTrace a = extract_phase(rippled(4, ka), setup().profile);
  const PhaseTrace b = extract_phase(rippled(4, kb), setup().profile);
  const auto ga = a.gamma(), gb = b.gamma();
  double err = 0.0;
  for (long l = 0; l < Lp; ++l) err = std::max(err, std::abs(gb[l] - ga[floor_mod(l - sig, Lp)] - tau));
  CHECK(err < 1e-10);
}

TEST_CASE("simulated level-set speed agrees with the wave speed") {
  const SpeedEstimate e = simulate_speed(setup().dir, setup().g);
  CHECK(e.c == doctest::Approx(setup().wave.c).epsilon(1e-6));
}

TEST_CASE("schedule validation") {
  const Setup& s = setup();
  const AuxiliaryResult r = compute_auxiliary(s.wave);
  ScheduleParams p;
  p.eps = 0.1;
  p.M = 0.3;
  p.delta = 1e-3;
  p.t_c = 1.0;
  const SuperSubSchedule ok(p, s.wave);
  CHECK_NOTHROW(ok.validate(r.aux, 9.64e-4, 50.0));
  CHECK(ok.m() == doctest::Approx(0.5));
  CHECK(ok.z(0.0) == doctest::Approx(1.5 * p.M * p.delta / ok.m()));
  CHECK(ok.K(8.0) == doctest::Approx(p.M * p.delta * std::pow(8.0, -1.5)));
  // K <= m z <= 2K along the rounded corner.
  for (double t : {0.0, 0.5, 1.0, 2.0, 10.0, 100.0}) {
    CHECK(ok.K(t) <= ok.m() * ok.z(t) * (1.0 + 1e-12));
    CHECK(ok.m() * ok.z(t) <= 2.0 * ok.K(t));
  }
  p.z_scale = 0.0;
  CHECK(code_of([&] { SuperSubSchedule(p, s.wave).validate(r.aux, 9.64e-4); }) == ErrorCode::ScheduleInvalid);
  p.z_scale = 1.0;
  p.eps = 0.7;
  CHECK(code_of([&] { SuperSubSchedule(p, s.wave); }) == ErrorCode::ScheduleInvalid);
}

TEST_CASE("simulation error paths") {
  const Setup& s = setup();
  const LatticeState st = rippled(4);
  CHECK(code_of([&] { evolve(st, 1.0, 0.3); }) == ErrorCode::StepSizeTooLarge);
  CHECK(code_of([&] { evolve(st, 1.0, 0.0); }) == ErrorCode::StepSizeTooLarge);
  InitialParams narrow;
  narrow.margin = 3.0;
  CHECK(code_of([&] { build_initial(s.profile, s.dir, s.g, narrow); }) == ErrorCode::WindowTooNarrow);
  const LatticeState flat = uniform_state(s.dir, s.g, 4, -20, 20, 0.0);
  CHECK(code_of([&] { extract_phase(flat, s.profile); }) == ErrorCode::NoBracket);
  InitialParams two;
  two.kind = InitialKind::custom;
  two.P = 2;
  two.custom_n_min = -60;
  two.custom_n_max = 60;
  two.tail_tol = 1.0;
  two.custom = [&](long n, long) { return s.profile(static_cast<double>(n) + 25.0) - s.profile(static_cast<double>(n)) + s.profile(n - 25.0); };
  const LatticeState bumpy = build_initial(s.profile, s.dir, s.g, two);
  CHECK(code_of([&] { extract_phase(bumpy, s.profile); }) == ErrorCode::MultipleBrackets);
  const Nonlinearity unstable = make_nonlinearity(0.45, 6.0, true);
  const LatticeState hot = uniform_state(s.dir, unstable, 2, -5, 5, 1.2);
  CHECK(code_of([&] { evolve(hot, 50.0, 0.1); }) == ErrorCode::BlowUp);
}
