#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ofront/coefficients.hpp"
#include "ofront/phase.hpp"

namespace ofront {

// Phi* on the real line: monotone cubic (pchip) through the interior nodes, exponential
// tails beyond them. inverse() is restricted to the tabulated range.
class Profile {
 public:
  explicit Profile(const WaveSolution& wave);
  ~Profile();
  Profile(const Profile&);
  Profile& operator=(const Profile&);

  double operator()(double xi) const;
  // Bisection to 1e-12 on the interpolant; throws OutOfProfileRange outside (lo(), hi()).
  double inverse(double u) const;
  double lo() const { return y_.front(); }
  double hi() const { return y_.back(); }
  double xi_min() const { return x_.front(); }
  double xi_max() const { return x_.back(); }
  double c_star() const { return c_; }

 private:
  struct Impl;
  std::vector<double> x_, y_;
  double c_ = 0.0;
  double lambda_left_ = 0.0;
  double lambda_right_ = 0.0;
  std::unique_ptr<Impl> impl_;
};

// Field on the sites (n, l) with l = l0(n) + r*sigma*^2, r = 0..P-1, for n_min <= n <= n_max.
// l is identified modulo P*sigma*^2, which is the skewed identification
// (i, j) ~ (i + sv*P, j - sh*P). Sites with n outside the window read the boundary values.
struct LatticeState {
  Direction dir;
  Nonlinearity nonlin;
  int P = 1;
  long n_min = 0;
  long n_max = 0;
  double left = 0.0;
  double right = 1.0;
  double t = 0.0;
  std::vector<double> u;  // u[(n - n_min)*P + r]

  long rows() const { return n_max - n_min + 1; }
  long l_period() const { return static_cast<long>(P) * dir.sigma_star_sq; }
  long l_of(long n, int r) const;
  // Requires (n, l) to be a lattice site.
  int r_of(long n, long l) const;
  double at(long n, long l) const;
  double& ref(long n, int r) { return u[static_cast<std::size_t>((n - n_min) * P + r)]; }
  double val(long n, int r) const { return u[static_cast<std::size_t>((n - n_min) * P + r)]; }
};

// Constant field with matching boundary values.
LatticeState uniform_state(const Direction& dir, const Nonlinearity& nonlin, int P, long n_min, long n_max,
                           double value);

enum class InitialKind { planar, rippled, rippled_plus_localized, custom };

struct InitialParams {
  InitialKind kind = InitialKind::planar;
  int P = 4;
  double mu = 0.0;                // planar: u = Phi(n - mu)
  double ripple_amplitude = 0.5;  // rippled: kappa = +-A square wave over one l period
  std::vector<double> kappa;      // overrides the square wave when set (size P*sigma*^2)
  // rippled_plus_localized: v0 = amplitude on the sites with |n - n_c| <= radius and
  // transverse distance |l - l_c| <= radius (modulo the period).
  double bump_amplitude = 0.3;
  long bump_n = 0;
  long bump_l = 0;
  long bump_radius = 3;
  std::function<double(long n, long l)> custom;  // custom: u0(n, l)
  long custom_n_min = -100;
  long custom_n_max = 100;
  double T_run = 0.0;     // drift c*T_run is added to the window
  double margin = 0.0;    // default 30*sigma_inf on each side
  double tail_tol = 1e-8;
};

// Throws WindowTooNarrow when Phi at the window edges is not within tail_tol of 0/1.
LatticeState build_initial(const Profile& profile, const Direction& dir, const Nonlinearity& nonlin,
                           const InitialParams& params);

// sum_nu (u(n + tau, l + sigma) - u) + g(u) at every site.
std::vector<double> lattice_rhs(const LatticeState& s);

// RK4 with fixed dt <= 0.2; samples every sample_dt (0: only the end) plus the start.
// Throws BlowUp once a value leaves [-0.5, 1.5].
std::vector<LatticeState> evolve(const LatticeState& s, double T, double dt, double sample_dt = 0.0);

struct PhaseEntry {
  long l = 0;
  long n_star = 0;
  double theta_minus = 0.0;
  double theta_plus = 0.0;
  double vartheta = 0.0;
  double gamma = 0.0;
};

struct PhaseTrace {
  double t = 0.0;
  std::vector<PhaseEntry> entries;  // l = 0 .. P*sigma*^2 - 1
  std::vector<double> gamma() const;
};

PhaseTrace extract_phase(const LatticeState& s, const Profile& profile);

// sup |u - Phi(n - gamma_l)| over the window.
double phase_consistency(const LatticeState& s, const Profile& profile, const PhaseTrace& trace);

struct TrackingResult {
  double tau = 0.0;
  std::vector<double> times;
  std::vector<double> errors;  // sup_l |gamma_l(t) - theta_l(t - tau)|
  double max_error = 0.0;
};

// theta(0) = gamma(tau), evolved under Theta_ch; traj must contain a sample at tau.
TrackingResult track_vs_theta(const std::vector<LatticeState>& traj, const Profile& profile, double tau,
                              const KernelSpec& kernel, double horizon);

struct StabilityResult {
  double t_final = 0.0;
  double mu_hat = 0.0;     // mean_l gamma_l(T) - c* T
  double deviation = 0.0;  // sup |u - Phi(n - c* T - mu_hat)|
};

StabilityResult stability_experiment(const std::vector<LatticeState>& traj, const Profile& profile);

// 3 / |f(2 pi / period)|: time for the slowest transverse mode to decay by e^-3.
double relaxation_time(const KernelSpec& kernel, long l_period);

struct ScheduleParams {
  double eps = 0.1;
  double M = 10.0;
  double delta = 1e-3;  // bound on ||d theta(0)||
  double t_c = 0.0;     // crossover of K; 0 selects delta^(-2/3)
  double z_scale = 1.0;
};

// K(t) = M delta min(1, (t/t_c)^(-3/2)); z = 1.5 K_smooth / m with the corner rounded,
// Z = C int_0^t z. m from -g' >= 2m near 0 and 1, C = max(1, (2m + M)/min Phi').
class SuperSubSchedule {
 public:
  SuperSubSchedule(const ScheduleParams& params, const WaveSolution& wave);

  double z(double t) const;
  double Z(double t) const;
  double K(double t) const;
  double eps() const { return p_.eps; }
  double M() const { return p_.M; }
  double delta() const { return p_.delta; }
  double t_c() const { return t_c_; }
  double m() const { return m_; }
  double C() const { return C_; }
  double nu() const { return p_.M * p_.delta / (3.0 * m_); }

  // z(0) - dtheta0 (|p| + 2|pdd| + dtheta0 |q|) > nu, z(0) <= eps and, for horizon > 0,
  // Z(horizon) <= eps; throws ScheduleInvalid otherwise.
  void validate(const AuxiliaryFunctions& aux, double dtheta0, double horizon = 0.0) const;

 private:
  ScheduleParams p_;
  double t_c_ = 1.0;
  double m_ = 0.5;
  double C_ = 1.0;
  std::array<int, 4> sigma_{};
};

enum class Sign { plus, minus };

// theta(t) for the ansatz; must be smooth in t (it is differenced in time).
using ThetaPath = std::function<std::vector<double>(double)>;
ThetaPath ch_path(const KernelSpec& kernel, const PhaseField& theta0);

// u+- at one site.
double ansatz_value(const WaveSolution& wave, const AuxiliaryFunctions& aux, const SuperSubSchedule& schedule,
                    const std::vector<double>& theta, double t, long n, long l, Sign sign);
// u+- on the sites of a layout state.
LatticeState ansatz_field(const WaveSolution& wave, const AuxiliaryFunctions& aux, const SuperSubSchedule& schedule,
                          const ThetaPath& theta, double t, Sign sign, const LatticeState& layout);

struct ResidualExtreme {
  double value = 0.0;  // min J[u+] or max J[u-]
  double t = 0.0;
  long n = 0;
  long l = 0;
  std::size_t samples = 0;
};

// J = u' - Delta u - g(u) at the admissible sites with |n - theta_l| <= xi_range, for every l of
// one period and every t in times. u' by fourth-order central differences with step h.
ResidualExtreme supersub_residual(const WaveSolution& wave, const AuxiliaryFunctions& aux, const ThetaPath& theta,
                                  long l_period, const SuperSubSchedule& schedule, const std::vector<double>& times,
                                  Sign sign, double xi_range = 0.0, double h = 1e-3);

// Level-set speed of a planar front from a 1D simulation of
// U_n' = sum_nu U_{n + tau_nu} - 4 U_n + g(U_n).
struct SpeedEstimate {
  double c = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  double rms = 0.0;  // rms of the linear fit of the crossing position
};

SpeedEstimate simulate_speed(const Direction& dir, const Nonlinearity& nonlin, double T = 400.0, double dt = 0.05);

std::string field_csv(const LatticeState& s);                       // i,j,n,l,u
std::string phase_csv(const std::vector<PhaseTrace>& traces);        // t,l,n_star,gamma

}  // namespace ofront
