#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "ofront/coefficients.hpp"

namespace ofront {

// Transverse phase on a periodic window of period theta.size().
struct PhaseField {
  std::vector<double> theta;
  double t = 0.0;

  int period() const { return static_cast<int>(theta.size()); }
  double dev() const;  // sup_l |theta_l - theta_0|
};

struct KernelSpec {
  std::vector<double> a;  // a_k for k = -N..N
  int N = 0;
  double d = 0.0;
  double c_star = 0.0;
  // Only needed by the comparison model.
  Table44 alpha_q{};
  std::array<int, 4> sigma{};

  double ak(int k) const { return (k < -N || k > N) ? 0.0 : a[static_cast<std::size_t>(k + N)]; }
  double Lambda() const;
  double group_velocity() const;
  double dt_max() const;  // 0.25 / sum |a_k|
};

KernelSpec make_kernel(const CoefficientSet& c);
// a_{+-1} = 1; the nearest-neighbour kernel of the horizontal direction.
KernelSpec horizontal_kernel(double d = 0.0, double c_star = 0.0);

struct GreensSlice {
  double t = 0.0;
  long l_min = 0;
  std::vector<double> M;  // M[l - l_min]
  double mass = 0.0;
  double imag_residue = 0.0;
  int nodes = 0;
};

// M_l(t) = (1/2pi) int e^{i l w} e^{t (f(w) + i p(w))} dw by the trapezoid rule.
GreensSlice greens_function(const KernelSpec& k, double t, long l_min, long l_max, double imag_tol = 1e-10);

// Exact periodic solution of h' = sum a_k (S^k - I) h.
PhaseField linear_evolve(const KernelSpec& k, const PhaseField& h0, double t);

// Tabulated c_phi with a quintic local (Floater-Hormann) interpolant.
class Dispersion {
 public:
  Dispersion(std::vector<double> angles, std::vector<double> speeds);
  ~Dispersion();
  Dispersion(const Dispersion&);
  Dispersion& operator=(const Dispersion&);

  double operator()(double phi) const;
  double phi_min() const { return angles_.front(); }
  double phi_max() const { return angles_.back(); }
  // Largest gap between the quintic and a cubic interpolant at the cell midpoints.
  double error_estimate() const;

 private:
  struct Impl;
  std::vector<double> angles_, speeds_;
  std::unique_ptr<Impl> impl_;
};

struct DmcInputs {
  std::vector<double> A, B, C;  // indexed k + N
  double kappa_H = 0.0;
  double d = 0.0;    // (c* + d2c) / Lambda with the interpolant's derivatives
  double dc = 0.0;   // derivatives of the interpolant at 0
  double d2c = 0.0;
  std::shared_ptr<const Dispersion> dispersion;
};

// A_k and B_k follow the coefficient formulas with dc, d2c taken from the interpolant.
DmcInputs make_dmc_inputs(const CoefficientSet& c, const DirectionalFamily& family);

enum class PhaseModel { linear, ch, cmp, dmc };

std::vector<double> theta_rhs(PhaseModel model, const KernelSpec& k, const std::vector<double>& theta,
                              const DmcInputs* dmc = nullptr);

// Classical RK4 with fixed dt; returns the samples every `stride` steps plus the end point.
std::vector<PhaseField> integrate_phase(PhaseModel model, const KernelSpec& k, const PhaseField& theta0,
                                        double T, double dt, int stride = 0, const DmcInputs* dmc = nullptr,
                                        double step_tol = 1e-6);

enum class Transform { forward, inverse };

// forward: h = exp(d (theta - c t)); inverse: theta = log(h)/d + c t.
PhaseField cole_hopf(const KernelSpec& k, const PhaseField& f, Transform direction);

// The Theta_ch flow evaluated through the Cole-Hopf transform and the spectral linear solve.
PhaseField ch_flow(const KernelSpec& k, const PhaseField& theta0, double t);

// (S^m - I) theta and the n-th forward difference, both periodic.
std::vector<double> shift_difference(const std::vector<double>& theta, int m);
std::vector<double> nth_difference(const std::vector<double>& theta, int n);
double sup_norm(const std::vector<double>& v);

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  double residual = 0.0;  // rms of the log residuals
};

// Least squares of log(y) against log(t).
Fit fit_loglog(const std::vector<double>& t, const std::vector<double>& y);
std::vector<double> geometric_times(double t0, double t1, int count);

// Slope of log ||d^(n) theta(t)|| over the window; model is linear or ch (evaluated spectrally).
Fit decay_exponents(const KernelSpec& k, const PhaseField& theta0, int n, double t0, double t1,
                    PhaseModel model = PhaseModel::linear, int samples = 24);
// Same for n (S^m - I) theta - m (S^n - I) theta.
Fit combined_decay(const KernelSpec& k, const PhaseField& theta0, int m, int n, double t0, double t1,
                   PhaseModel model = PhaseModel::linear, int samples = 24);

struct ComparisonReport {
  std::vector<double> times;
  std::vector<double> minima;
  double overall_min = 0.0;
  double dip_time = 0.0;  // time of the overall minimum
  bool bound_satisfied = true;
};

// Linear evolution of h0 >= 0 with the lower bounds inf h0 - C ||dh0|| (t <= T) and
// inf h0 - eps ||h0|| (t > T).
ComparisonReport quasi_comparison_check(const KernelSpec& k, const PhaseField& h0, const std::vector<double>& times,
                                        double eps, double T, double C);

// ||theta' - Theta_cmp(theta)|| along a Theta_ch trajectory.
std::vector<double> residual_Rtheta(const KernelSpec& k, const std::vector<PhaseField>& traj);

struct ScalingResult {
  std::vector<double> eps;
  std::vector<double> gap;  // ||Theta_ch - Theta_dmc|| at theta = eps * s
  Fit fit;
};

ScalingResult ch_dmc_scaling(const KernelSpec& k, const DmcInputs& dmc, const std::vector<double>& s,
                             const std::vector<double>& eps_list);

PhaseField square_wave(int period, double amplitude);
PhaseField random_field(int period, double amplitude, std::uint64_t seed);

}  // namespace ofront
