#include "ofront/phase.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/interpolators/barycentric_rational.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "ofront/error.hpp"

namespace ofront {

namespace {

using cplx = std::complex<double>;

// Real-to-complex transform pair of fixed length.
class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    in_ = fftw_alloc_real(static_cast<std::size_t>(n));
    out_ = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    fwd_ = fftw_plan_dft_r2c_1d(n, in_, out_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(n, out_, in_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::vector<cplx> forward(const std::vector<double>& x) {
    std::copy(x.begin(), x.end(), in_);
    fftw_execute(fwd_);
    std::vector<cplx> X(static_cast<std::size_t>(n_ / 2 + 1));
    for (std::size_t j = 0; j < X.size(); ++j) X[j] = {out_[j][0], out_[j][1]};
    return X;
  }
  std::vector<double> backward(const std::vector<cplx>& X) {
    for (std::size_t j = 0; j < X.size(); ++j) {
      out_[j][0] = X[j].real();
      out_[j][1] = X[j].imag();
    }
    fftw_execute(bwd_);
    std::vector<double> x(in_, in_ + n_);
    for (double& v : x) v /= n_;
    return x;
  }

 private:
  int n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan fwd_, bwd_;
};

inline std::size_t wrap(long l, long P) { return static_cast<std::size_t>(floor_mod(l, P)); }

}  // namespace

double PhaseField::dev() const {
  double m = 0.0;
  for (double v : theta) m = std::max(m, std::abs(v - theta.front()));
  return m;
}

double KernelSpec::Lambda() const {
  double s = 0.0;
  for (int k = -N; k <= N; ++k) s += ak(k) * k * k;
  return s;
}

double KernelSpec::group_velocity() const {
  double s = 0.0;
  for (int k = -N; k <= N; ++k) s -= ak(k) * k;
  return s;
}

double KernelSpec::dt_max() const {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return 0.25 / s;
}

KernelSpec make_kernel(const CoefficientSet& c) {
  KernelSpec k;
  k.a = c.a;
  k.N = c.N;
  k.d = c.d;
  k.c_star = c.c_star;
  k.alpha_q = c.alpha_q_dd;
  k.sigma = c.dir.sigma;
  return k;
}

KernelSpec horizontal_kernel(double d, double c_star) {
  KernelSpec k;
  k.N = 1;
  k.a = {1.0, 0.0, 1.0};
  k.d = d;
  k.c_star = c_star;
  return k;
}

GreensSlice greens_function(const KernelSpec& k, double t, long l_min, long l_max, double imag_tol) {
  if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "t must be non-negative");
  if (l_max < l_min) throw Error(ErrorCode::InvalidArgument, "empty l range");
  const double need = std::max(4096.0, 16.0 * (std::max(std::abs(l_min), std::abs(l_max)) + k.N * t));
  int n = 1;
  while (n < need) n *= 2;
  // Trapezoid nodes w_j = 2 pi j / n; the sum over j is a backward DFT.
  fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  for (int j = 0; j < n; ++j) {
    const Symbol s = fourier_symbol(k.a, 2.0 * std::numbers::pi * j / n);
    const cplx e = std::exp(cplx(t * s.f, t * s.p));
    buf[j][0] = e.real();
    buf[j][1] = e.imag();
  }
  fftw_execute(plan);
  GreensSlice g;
  g.t = t;
  g.l_min = l_min;
  g.nodes = n;
  g.M.resize(static_cast<std::size_t>(l_max - l_min + 1));
  for (long l = l_min; l <= l_max; ++l) {
    const std::size_t j = wrap(l, n);
    const double re = buf[j][0] / n, im = buf[j][1] / n;
    g.M[static_cast<std::size_t>(l - l_min)] = re;
    g.imag_residue = std::max(g.imag_residue, std::abs(im));
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);
  for (double v : g.M) g.mass += v;
  if (g.imag_residue > imag_tol)
    throw Error(ErrorCode::QuadratureUnderResolved, "imaginary residue " + std::to_string(g.imag_residue));
  return g;
}

PhaseField linear_evolve(const KernelSpec& k, const PhaseField& h0, double t) {
  const int P = h0.period();
  if (P < 2 * k.N + 1) throw Error(ErrorCode::WindowTooSmall, "period must be at least 2N+1");
  RealFft fft(P);
  std::vector<cplx> X = fft.forward(h0.theta);
  for (std::size_t j = 0; j < X.size(); ++j) {
    const Symbol s = fourier_symbol(k.a, 2.0 * std::numbers::pi * static_cast<double>(j) / P);
    X[j] *= std::exp(cplx(t * s.f, t * s.p));
  }
  PhaseField out;
  out.theta = fft.backward(X);
  out.t = h0.t + t;
  return out;
}

struct Dispersion::Impl {
  boost::math::barycentric_rational<double> quintic, cubic;
  Impl(const std::vector<double>& x, const std::vector<double>& y)
      : quintic(x.begin(), x.end(), y.begin(), 5), cubic(x.begin(), x.end(), y.begin(), 3) {}
};

Dispersion::Dispersion(std::vector<double> angles, std::vector<double> speeds)
    : angles_(std::move(angles)), speeds_(std::move(speeds)) {
  if (angles_.size() != speeds_.size() || angles_.size() < 6)
    throw Error(ErrorCode::InvalidArgument, "dispersion table needs at least 6 samples");
  if (!std::is_sorted(angles_.begin(), angles_.end()))
    throw Error(ErrorCode::InvalidArgument, "dispersion angles must be increasing");
  impl_ = std::make_unique<Impl>(angles_, speeds_);
}

Dispersion::~Dispersion() = default;
Dispersion::Dispersion(const Dispersion& o) : Dispersion(o.angles_, o.speeds_) {}
Dispersion& Dispersion::operator=(const Dispersion& o) {
  if (this != &o) {
    angles_ = o.angles_;
    speeds_ = o.speeds_;
    impl_ = std::make_unique<Impl>(angles_, speeds_);
  }
  return *this;
}

double Dispersion::operator()(double phi) const {
  if (phi < phi_min() - 1e-14 || phi > phi_max() + 1e-14)
    throw Error(ErrorCode::DispersionRangeExceeded, "angle " + std::to_string(phi) + " outside the table");
  return impl_->quintic(phi);
}

double Dispersion::error_estimate() const {
  double e = 0.0;
  for (std::size_t m = 0; m + 1 < angles_.size(); ++m) {
    const double x = 0.5 * (angles_[m] + angles_[m + 1]);
    e = std::max(e, std::abs(impl_->quintic(x) - impl_->cubic(x)));
  }
  return e;
}

DmcInputs make_dmc_inputs(const CoefficientSet& c, const DirectionalFamily& family) {
  if (c.C.empty()) throw Error(ErrorCode::InvalidArgument, "curvature parameters not computed");
  if (std::abs(c.c_star) < 1e-4) throw Error(ErrorCode::PinnedWave, "dmc model needs c* != 0");
  DmcInputs in;
  in.dispersion = std::make_shared<Dispersion>(family.angles, family.speeds);
  // A_k and B_k are rebuilt from the derivatives of the interpolant itself, so that the
  // linear and quadratic terms of the expansion cancel against Theta_ch exactly.
  const Dispersion& D = *in.dispersion;
  const double h = 1e-3;
  const double fm2 = D(-2 * h), fm1 = D(-h), f0 = D(0.0), f1 = D(h), f2 = D(2 * h);
  in.dc = (fm2 - 8.0 * fm1 + 8.0 * f1 - f2) / (12.0 * h);
  in.d2c = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * f1 - f2) / (12.0 * h * h);
  in.kappa_H = 0.5 * c.Lambda;
  in.d = (c.c_star + in.d2c) / c.Lambda;
  const int N = c.N;
  in.C = c.C;
  in.A.assign(c.C.size(), 0.0);
  in.B.assign(c.C.size(), 0.0);
  for (int k = -N; k <= N; ++k) {
    if (k == 0) continue;
    const std::size_t i = static_cast<std::size_t>(k + N);
    in.A[i] = in.d * c.a[i] * k * k / c.c_star - in.C[i] * in.d2c / c.c_star;
    in.B[i] = c.a[i] * k * k / (2.0 * in.kappa_H) + k * in.C[i] * in.dc / (2.0 * in.kappa_H);
  }
  return in;
}

std::vector<double> theta_rhs(PhaseModel model, const KernelSpec& k, const std::vector<double>& th,
                              const DmcInputs* dmc) {
  const long P = static_cast<long>(th.size());
  const int N = k.N;
  std::vector<double> r(th.size());
  switch (model) {
    case PhaseModel::linear:
      for (long l = 0; l < P; ++l) {
        double s = 0.0;
        for (int q = -N; q <= N; ++q) s += k.ak(q) * (th[wrap(l + q, P)] - th[l]);
        r[l] = s;
      }
      break;
    case PhaseModel::ch:
      for (long l = 0; l < P; ++l) {
        double s = 0.0;
        for (int q = -N; q <= N; ++q) {
          const double diff = th[wrap(l + q, P)] - th[l];
          s += k.d == 0.0 ? k.ak(q) * diff : k.ak(q) * std::expm1(k.d * diff) / k.d;
        }
        r[l] = s + k.c_star;
      }
      break;
    case PhaseModel::cmp:
      for (long l = 0; l < P; ++l) {
        double s = 0.0;
        for (int q = -N; q <= N; ++q) s += k.ak(q) * (th[wrap(l + q, P)] - th[l]);
        std::array<double, 4> pi{};
        for (int nu = 0; nu < 4; ++nu) pi[nu] = th[wrap(l + k.sigma[nu], P)] - th[l];
        for (int nu = 0; nu < 4; ++nu)
          for (int mu = 0; mu < 4; ++mu) s += k.alpha_q[nu][mu] * pi[nu] * pi[mu];
        r[l] = s + k.c_star;
      }
      break;
    case PhaseModel::dmc: {
      if (!dmc || !dmc->dispersion) throw Error(ErrorCode::InvalidArgument, "dmc model needs dmc inputs");
      const Dispersion& disp = *dmc->dispersion;
      for (long l = 0; l < P; ++l) {
        double beta2 = 1.0, lap = 0.0, cbar = 0.0;
        for (int q = -N; q <= N; ++q) {
          if (q == 0) continue;
          const std::size_t i = static_cast<std::size_t>(q + N);
          const double diff = th[wrap(l + q, P)] - th[l];
          beta2 += dmc->A[i] * diff * diff / (q * q);
          lap += 2.0 * dmc->B[i] * diff / (q * q);
          if (dmc->C[i] != 0.0) cbar += dmc->C[i] * disp(std::atan(-diff / q));
        }
        r[l] = dmc->kappa_H * lap / beta2 + std::sqrt(beta2) * cbar;
      }
      break;
    }
  }
  return r;
}

namespace {

std::vector<double> rk4_step(PhaseModel model, const KernelSpec& k, const std::vector<double>& y, double dt,
                             const DmcInputs* dmc) {
  const std::size_t n = y.size();
  std::vector<double> tmp(n);
  const auto k1 = theta_rhs(model, k, y, dmc);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  const auto k2 = theta_rhs(model, k, tmp, dmc);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  const auto k3 = theta_rhs(model, k, tmp, dmc);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
  const auto k4 = theta_rhs(model, k, tmp, dmc);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace

std::vector<PhaseField> integrate_phase(PhaseModel model, const KernelSpec& k, const PhaseField& theta0, double T,
                                        double dt, int stride, const DmcInputs* dmc, double step_tol) {
  if (!(dt > 0.0) || dt > k.dt_max())
    throw Error(ErrorCode::StepSizeTooLarge, "dt exceeds 0.25 / sum |a_k| = " + std::to_string(k.dt_max()));
  // Step doubling on the first step; RK4 error is about |y_dt - y_dt/2| / 15.
  {
    const auto full = rk4_step(model, k, theta0.theta, dt, dmc);
    const auto half = rk4_step(model, k, rk4_step(model, k, theta0.theta, 0.5 * dt, dmc), 0.5 * dt, dmc);
    double e = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) e = std::max(e, std::abs(full[i] - half[i]) / 15.0);
    if (e > step_tol) throw Error(ErrorCode::StepSizeTooLarge, "local error estimate " + std::to_string(e));
  }
  const long steps = std::max(1L, std::lround(T / dt));
  const double h = T / static_cast<double>(steps);
  std::vector<PhaseField> traj{theta0};
  PhaseField cur = theta0;
  for (long s = 1; s <= steps; ++s) {
    cur.theta = rk4_step(model, k, cur.theta, h, dmc);
    cur.t = theta0.t + s * h;
    if ((stride > 0 && s % stride == 0) || s == steps) traj.push_back(cur);
  }
  return traj;
}

PhaseField cole_hopf(const KernelSpec& k, const PhaseField& f, Transform direction) {
  if (k.d == 0.0) throw Error(ErrorCode::InvalidArgument, "Cole-Hopf transform needs d != 0");
  PhaseField out;
  out.t = f.t;
  out.theta.resize(f.theta.size());
  if (direction == Transform::forward) {
    for (std::size_t i = 0; i < f.theta.size(); ++i) out.theta[i] = std::exp(k.d * (f.theta[i] - k.c_star * f.t));
  } else {
    for (std::size_t i = 0; i < f.theta.size(); ++i) {
      if (!(f.theta[i] > 0.0))
        throw Error(ErrorCode::NonPositiveField, "h_" + std::to_string(i) + " = " + std::to_string(f.theta[i]));
      out.theta[i] = std::log(f.theta[i]) / k.d + k.c_star * f.t;
    }
  }
  return out;
}

PhaseField ch_flow(const KernelSpec& k, const PhaseField& theta0, double t) {
  if (k.d == 0.0) {
    PhaseField out = linear_evolve(k, theta0, t);
    for (double& v : out.theta) v += k.c_star * t;
    return out;
  }
  return cole_hopf(k, linear_evolve(k, cole_hopf(k, theta0, Transform::forward), t), Transform::inverse);
}

std::vector<double> shift_difference(const std::vector<double>& th, int m) {
  const long P = static_cast<long>(th.size());
  std::vector<double> out(th.size());
  for (long l = 0; l < P; ++l) out[l] = th[wrap(l + m, P)] - th[l];
  return out;
}

std::vector<double> nth_difference(const std::vector<double>& th, int n) {
  std::vector<double> out = th;
  for (int i = 0; i < n; ++i) out = shift_difference(out, 1);
  return out;
}

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Fit fit_loglog(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  if (n < 2 || y.size() != n) throw Error(ErrorCode::InvalidArgument, "fit needs matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(t[i]), v = std::log(y[i]);
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
  }
  Fit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  f.t0 = t.front();
  f.t1 = t.back();
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::log(y[i]) - (f.intercept + f.slope * std::log(t[i]));
    r += e * e;
  }
  f.residual = std::sqrt(r / n);
  return f;
}

std::vector<double> geometric_times(double t0, double t1, int count) {
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[i] = t0 * std::pow(t1 / t0, static_cast<double>(i) / (count - 1));
  return t;
}

namespace {

void check_window(const KernelSpec& k, int P, double t1) {
  const double f1 = fourier_symbol(k.a, 2.0 * std::numbers::pi / P).f;
  if (std::exp(f1 * t1) < 0.95)
    throw Error(ErrorCode::WindowTooSmall, "slowest periodic mode decays by more than 5% over the window");
}

PhaseField evolve_model(const KernelSpec& k, const PhaseField& theta0, double t, PhaseModel model) {
  if (model == PhaseModel::linear) return linear_evolve(k, theta0, t);
  if (model == PhaseModel::ch) return ch_flow(k, theta0, t);
  throw Error(ErrorCode::InvalidArgument, "decay fits support the linear and ch models");
}

template <class Measure>
Fit decay_fit(const KernelSpec& k, const PhaseField& theta0, double t0, double t1, PhaseModel model, int samples,
              Measure measure) {
  check_window(k, theta0.period(), t1);
  const auto times = geometric_times(t0, t1, samples);
  std::vector<double> norms;
  for (double t : times) norms.push_back(measure(evolve_model(k, theta0, t, model).theta));
  return fit_loglog(times, norms);
}

}  // namespace

Fit decay_exponents(const KernelSpec& k, const PhaseField& theta0, int n, double t0, double t1, PhaseModel model,
                    int samples) {
  return decay_fit(k, theta0, t0, t1, model, samples,
                   [n](const std::vector<double>& th) { return sup_norm(nth_difference(th, n)); });
}

Fit combined_decay(const KernelSpec& k, const PhaseField& theta0, int m, int n, double t0, double t1,
                   PhaseModel model, int samples) {
  return decay_fit(k, theta0, t0, t1, model, samples, [m, n](const std::vector<double>& th) {
    const auto a = shift_difference(th, m), b = shift_difference(th, n);
    std::vector<double> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = n * a[i] - m * b[i];
    return sup_norm(c);
  });
}

ComparisonReport quasi_comparison_check(const KernelSpec& k, const PhaseField& h0, const std::vector<double>& times,
                                        double eps, double T, double C) {
  const double inf0 = *std::min_element(h0.theta.begin(), h0.theta.end());
  if (inf0 < 0.0) throw Error(ErrorCode::InvalidArgument, "h0 must be non-negative");
  const double dnorm = sup_norm(nth_difference(h0.theta, 1));
  const double hnorm = sup_norm(h0.theta);
  ComparisonReport r;
  r.overall_min = inf0;
  for (double t : times) {
    const auto h = linear_evolve(k, h0, t);
    const double mn = *std::min_element(h.theta.begin(), h.theta.end());
    r.times.push_back(t);
    r.minima.push_back(mn);
    if (mn < r.overall_min) {
      r.overall_min = mn;
      r.dip_time = t;
    }
    const double bound = t <= T ? inf0 - C * dnorm : inf0 - eps * hnorm;
    if (mn < bound) r.bound_satisfied = false;
  }
  return r;
}

std::vector<double> residual_Rtheta(const KernelSpec& k, const std::vector<PhaseField>& traj) {
  std::vector<double> out;
  for (const auto& f : traj) {
    // Along a ch trajectory theta' = Theta_ch(theta).
    const auto ch = theta_rhs(PhaseModel::ch, k, f.theta);
    const auto cmp = theta_rhs(PhaseModel::cmp, k, f.theta);
    double m = 0.0;
    for (std::size_t i = 0; i < ch.size(); ++i) m = std::max(m, std::abs(ch[i] - cmp[i]));
    out.push_back(m);
  }
  return out;
}

ScalingResult ch_dmc_scaling(const KernelSpec& k, const DmcInputs& dmc, const std::vector<double>& s,
                             const std::vector<double>& eps_list) {
  ScalingResult r;
  for (double e : eps_list) {
    std::vector<double> th(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) th[i] = e * s[i];
    const auto a = theta_rhs(PhaseModel::ch, k, th);
    const auto b = theta_rhs(PhaseModel::dmc, k, th, &dmc);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    r.eps.push_back(e);
    r.gap.push_back(m);
  }
  r.fit = fit_loglog(r.eps, r.gap);
  return r;
}

PhaseField square_wave(int period, double amplitude) {
  PhaseField f;
  f.theta.resize(static_cast<std::size_t>(period));
  for (int l = 0; l < period; ++l) f.theta[l] = l < period / 2 ? amplitude : -amplitude;
  return f;
}

PhaseField random_field(int period, double amplitude, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  PhaseField f;
  f.theta.resize(static_cast<std::size_t>(period));
  for (double& v : f.theta) v = u(gen);
  return f;
}

}  // namespace ofront
