#include "ofront/lattice.hpp"

#include <algorithm>
#include <cmath>
// Boost 1.74 pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "ofront/error.hpp"

namespace ofront {

namespace {

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

// l0(n) for the residues n mod sigma*^2.
std::vector<long> l0_table(const Direction& dir) {
  std::vector<long> t(static_cast<std::size_t>(dir.sigma_star_sq));
  for (long rho = 0; rho < dir.sigma_star_sq; ++rho) t[static_cast<std::size_t>(rho)] = transverse_residue(dir, rho);
  return t;
}

long l0_of(const std::vector<long>& table, long n) {
  return table[static_cast<std::size_t>(floor_mod(n, static_cast<long>(table.size())))];
}

}  // namespace

struct Profile::Impl {
  Pchip pchip;
  Impl(std::vector<double> x, std::vector<double> y) : pchip(std::move(x), std::move(y)) {}
};

Profile::Profile(const WaveSolution& wave) : c_(wave.c) {
  const WaveGrid& grid = wave.grid;
  const int n = grid.nodes();
  x_.reserve(static_cast<std::size_t>(n - 2));
  y_.reserve(static_cast<std::size_t>(n - 2));
  for (int k = 1; k < n - 1; ++k) {
    x_.push_back(grid.xi(k));
    y_.push_back(wave.phi[static_cast<std::size_t>(k)]);
  }
  const std::size_t K = static_cast<std::size_t>(grid.per_unit);
  const std::size_t N = y_.size() - 1;
  const double big = 1e3;
  lambda_left_ = (y_[0] > 0.0 && y_[K] > y_[0]) ? std::log(y_[K] / y_[0]) / (x_[K] - x_[0]) : big;
  lambda_right_ = (y_[N] < 1.0 && y_[N - K] < y_[N])
                      ? std::log((1.0 - y_[N - K]) / (1.0 - y_[N])) / (x_[N] - x_[N - K])
                      : big;
  impl_ = std::make_unique<Impl>(x_, y_);
}

Profile::~Profile() = default;
Profile::Profile(const Profile& o)
    : x_(o.x_), y_(o.y_), c_(o.c_), lambda_left_(o.lambda_left_), lambda_right_(o.lambda_right_),
      impl_(std::make_unique<Impl>(*o.impl_)) {}
Profile& Profile::operator=(const Profile& o) {
  if (this != &o) {
    x_ = o.x_;
    y_ = o.y_;
    c_ = o.c_;
    lambda_left_ = o.lambda_left_;
    lambda_right_ = o.lambda_right_;
    impl_ = std::make_unique<Impl>(*o.impl_);
  }
  return *this;
}

double Profile::operator()(double xi) const {
  if (xi < x_.front()) return y_.front() * std::exp(lambda_left_ * (xi - x_.front()));
  if (xi > x_.back()) return 1.0 - (1.0 - y_.back()) * std::exp(-lambda_right_ * (xi - x_.back()));
  return impl_->pchip(xi);
}

double Profile::inverse(double u) const {
  if (!(u > lo() && u < hi())) {
    std::ostringstream os;
    os << "u = " << u << " outside (" << lo() << ", " << hi() << ")";
    throw Error(ErrorCode::OutOfProfileRange, os.str());
  }
  const auto it = std::upper_bound(y_.begin(), y_.end(), u);
  const std::size_t k = static_cast<std::size_t>(it - y_.begin()) - 1;
  if (y_[k] == u) return x_[k];
  auto f = [&](double xi) { return impl_->pchip(xi) - u; };
  auto done = [](double a, double b) { return std::abs(b - a) <= 1e-12; };
  const auto r = boost::math::tools::bisect(f, x_[k], x_[k + 1], done);
  return 0.5 * (r.first + r.second);
}

long LatticeState::l_of(long n, int r) const {
  return transverse_residue(dir, n) + static_cast<long>(r) * dir.sigma_star_sq;
}

int LatticeState::r_of(long n, long l) const {
  const long s2 = dir.sigma_star_sq;
  const long d = l - transverse_residue(dir, n);
  if (floor_mod(d, s2) != 0) throw Error(ErrorCode::InvalidArgument, "(n, l) is not a lattice site");
  return static_cast<int>(floor_mod(d / s2, static_cast<long>(P)));
}

double LatticeState::at(long n, long l) const {
  if (n < n_min) return left;
  if (n > n_max) return right;
  return val(n, r_of(n, l));
}

LatticeState uniform_state(const Direction& dir, const Nonlinearity& nonlin, int P, long n_min, long n_max,
                           double value) {
  if (P < 1 || n_max < n_min) throw Error(ErrorCode::InvalidArgument, "empty lattice window");
  LatticeState s;
  s.dir = dir;
  s.nonlin = nonlin;
  s.P = P;
  s.n_min = n_min;
  s.n_max = n_max;
  s.left = value;
  s.right = value;
  s.u.assign(static_cast<std::size_t>(s.rows() * P), value);
  return s;
}

LatticeState build_initial(const Profile& profile, const Direction& dir, const Nonlinearity& nonlin,
                           const InitialParams& ip) {
  if (ip.P < 1) throw Error(ErrorCode::InvalidArgument, "P must be positive");
  const long Lp = static_cast<long>(ip.P) * dir.sigma_star_sq;
  LatticeState s;
  s.dir = dir;
  s.nonlin = nonlin;
  s.P = ip.P;
  s.left = 0.0;
  s.right = 1.0;

  if (ip.kind == InitialKind::custom) {
    if (!ip.custom) throw Error(ErrorCode::InvalidArgument, "custom initial condition without a function");
    s.n_min = ip.custom_n_min;
    s.n_max = ip.custom_n_max;
    s.u.resize(static_cast<std::size_t>(s.rows() * s.P));
    for (long n = s.n_min; n <= s.n_max; ++n)
      for (int r = 0; r < s.P; ++r) s.ref(n, r) = ip.custom(n, s.l_of(n, r));
  } else {
    std::vector<double> kappa(static_cast<std::size_t>(Lp), ip.mu);
    if (ip.kind != InitialKind::planar) {
      if (!ip.kappa.empty()) {
        if (static_cast<long>(ip.kappa.size()) != Lp)
          throw Error(ErrorCode::InvalidArgument, "kappa must have P*sigma*^2 entries");
        kappa = ip.kappa;
      } else {
        for (long l = 0; l < Lp; ++l)
          kappa[static_cast<std::size_t>(l)] = ip.mu + (2 * l < Lp ? ip.ripple_amplitude : -ip.ripple_amplitude);
      }
    }
    const auto [kmin, kmax] = std::minmax_element(kappa.begin(), kappa.end());
    const double margin = ip.margin > 0.0 ? ip.margin : 30.0 * dir.sigma_inf;
    const double drift = profile.c_star() * ip.T_run;
    s.n_min = static_cast<long>(std::floor(*kmin + std::min(0.0, drift) - margin));
    s.n_max = static_cast<long>(std::ceil(*kmax + std::max(0.0, drift) + margin));
    s.u.resize(static_cast<std::size_t>(s.rows() * s.P));
    for (long n = s.n_min; n <= s.n_max; ++n)
      for (int r = 0; r < s.P; ++r) {
        const long l = floor_mod(s.l_of(n, r), Lp);
        s.ref(n, r) = profile(static_cast<double>(n) - kappa[static_cast<std::size_t>(l)]);
      }
    if (ip.kind == InitialKind::rippled_plus_localized) {
      for (long n = ip.bump_n - ip.bump_radius; n <= ip.bump_n + ip.bump_radius; ++n) {
        if (n < s.n_min || n > s.n_max) continue;
        for (int r = 0; r < s.P; ++r) {
          long dl = floor_mod(s.l_of(n, r) - ip.bump_l, Lp);
          dl = std::min(dl, Lp - dl);
          if (dl <= ip.bump_radius) s.ref(n, r) += ip.bump_amplitude;
        }
      }
    }
  }

  double edge = 0.0;
  for (int r = 0; r < s.P; ++r) {
    edge = std::max(edge, std::abs(s.val(s.n_min, r) - s.left));
    edge = std::max(edge, std::abs(s.val(s.n_max, r) - s.right));
  }
  if (edge > ip.tail_tol) {
    std::ostringstream os;
    os << "far field off by " << edge << " at the window edges [" << s.n_min << ", " << s.n_max << "]";
    throw Error(ErrorCode::WindowTooNarrow, os.str());
  }
  return s;
}

namespace {

// Neighbour r offsets per residue class of n; [rho][nu].
std::vector<std::array<int, 4>> neighbour_offsets(const LatticeState& s) {
  const Direction& dir = s.dir;
  const long s2 = dir.sigma_star_sq;
  const std::vector<long> l0 = l0_table(dir);
  std::vector<std::array<int, 4>> off(static_cast<std::size_t>(s2));
  for (long rho = 0; rho < s2; ++rho)
    for (int nu = 0; nu < 4; ++nu) {
      const long d = l0[static_cast<std::size_t>(rho)] + dir.sigma[nu] - l0_of(l0, rho + dir.tau[nu]);
      off[static_cast<std::size_t>(rho)][nu] = static_cast<int>(floor_mod(d / s2, static_cast<long>(s.P)));
    }
  return off;
}

void rhs_into(const LatticeState& s, const std::vector<double>& u, const std::vector<std::array<int, 4>>& off,
              std::vector<double>& out) {
  const int P = s.P;
  const long s2 = s.dir.sigma_star_sq;
  out.resize(u.size());
  for (long n = s.n_min; n <= s.n_max; ++n) {
    const auto& o = off[static_cast<std::size_t>(floor_mod(n, s2))];
    const std::size_t row = static_cast<std::size_t>((n - s.n_min) * P);
    for (int r = 0; r < P; ++r) {
      const double v = u[row + static_cast<std::size_t>(r)];
      double lap = 0.0;
      for (int nu = 0; nu < 4; ++nu) {
        const long m = n + s.dir.tau[nu];
        double w;
        if (m < s.n_min)
          w = s.left;
        else if (m > s.n_max)
          w = s.right;
        else
          w = u[static_cast<std::size_t>((m - s.n_min) * P + (r + o[nu]) % P)];
        lap += w - v;
      }
      out[row + static_cast<std::size_t>(r)] = lap + s.nonlin.g(v);
    }
  }
}

}  // namespace

std::vector<double> lattice_rhs(const LatticeState& s) {
  std::vector<double> out;
  rhs_into(s, s.u, neighbour_offsets(s), out);
  return out;
}

std::vector<LatticeState> evolve(const LatticeState& s0, double T, double dt, double sample_dt) {
  if (!(dt > 0.0) || dt > 0.2) throw Error(ErrorCode::StepSizeTooLarge, "dt must lie in (0, 0.2]");
  if (T < 0.0) throw Error(ErrorCode::InvalidArgument, "negative horizon");
  const auto off = neighbour_offsets(s0);
  const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  const double h = steps > 0 ? T / static_cast<double>(steps) : 0.0;
  const long stride = sample_dt > 0.0 ? std::max(1L, std::lround(sample_dt / h)) : steps;

  std::vector<LatticeState> out{s0};
  LatticeState s = s0;
  const std::size_t n = s.u.size();
  std::vector<double> k1, k2, k3, k4, tmp(n);
  for (long step = 1; step <= steps; ++step) {
    rhs_into(s, s.u, off, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s.u[i] + 0.5 * h * k1[i];
    rhs_into(s, tmp, off, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s.u[i] + 0.5 * h * k2[i];
    rhs_into(s, tmp, off, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s.u[i] + h * k3[i];
    rhs_into(s, tmp, off, k4);
    for (std::size_t i = 0; i < n; ++i) {
      s.u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!(s.u[i] >= -0.5 && s.u[i] <= 1.5)) {
        std::ostringstream os;
        os << "u = " << s.u[i] << " at t = " << s0.t + step * h;
        throw Error(ErrorCode::BlowUp, os.str());
      }
    }
    s.t = s0.t + step * h;
    if (step % stride == 0 || step == steps) out.push_back(s);
  }
  return out;
}

std::vector<double> PhaseTrace::gamma() const {
  std::vector<double> g(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) g[i] = entries[i].gamma;
  return g;
}

PhaseTrace extract_phase(const LatticeState& s, const Profile& profile) {
  const Direction& dir = s.dir;
  const long s2 = dir.sigma_star_sq;
  const long Lp = s.l_period();
  PhaseTrace tr;
  tr.t = s.t;
  tr.entries.reserve(static_cast<std::size_t>(Lp));
  for (long l = 0; l < Lp; ++l) {
    const long n0 = longitudinal_residue(dir, l);
    const long first = s.n_min + floor_mod(n0 - s.n_min, s2);
    long found = 0;
    long n_star = 0;
    for (long n = first; n + s2 <= s.n_max; n += s2) {
      const double lo = s.at(n, l);
      const double hi = s.at(n + s2, l);
      const bool up = lo <= 0.5 && hi > 0.5;
      const bool down = lo > 0.5 && hi <= 0.5;
      if (up) {
        if (found == 0) n_star = n;
        ++found;
      } else if (down) {
        found += 2;
      }
      if (found > 1) {
        std::ostringstream os;
        os << "l = " << l << ": second crossing at n = " << n << " (first at " << n_star << "), t = " << s.t;
        throw Error(ErrorCode::MultipleBrackets, os.str());
      }
    }
    if (found == 0) {
      std::ostringstream os;
      os << "no crossing of 1/2 for l = " << l << " at t = " << s.t;
      throw Error(ErrorCode::NoBracket, os.str());
    }
    PhaseEntry e;
    e.l = l;
    e.n_star = n_star;
    e.theta_minus = profile.inverse(s.at(n_star, l));
    e.theta_plus = profile.inverse(s.at(n_star + s2, l));
    e.vartheta = -static_cast<double>(s2) * e.theta_minus / (e.theta_plus - e.theta_minus);
    e.gamma = static_cast<double>(n_star) + e.vartheta;
    tr.entries.push_back(e);
  }
  return tr;
}

double phase_consistency(const LatticeState& s, const Profile& profile, const PhaseTrace& trace) {
  const long Lp = s.l_period();
  double dev = 0.0;
  for (long n = s.n_min; n <= s.n_max; ++n)
    for (int r = 0; r < s.P; ++r) {
      const long l = floor_mod(s.l_of(n, r), Lp);
      const double g = trace.entries[static_cast<std::size_t>(l)].gamma;
      dev = std::max(dev, std::abs(s.val(n, r) - profile(static_cast<double>(n) - g)));
    }
  return dev;
}

TrackingResult track_vs_theta(const std::vector<LatticeState>& traj, const Profile& profile, double tau,
                              const KernelSpec& kernel, double horizon) {
  const auto start = std::find_if(traj.begin(), traj.end(), [&](const LatticeState& s) {
    return std::abs(s.t - tau) <= 1e-9 * std::max(1.0, tau);
  });
  if (start == traj.end()) throw Error(ErrorCode::InvalidArgument, "trajectory has no sample at tau");
  TrackingResult res;
  res.tau = tau;
  PhaseField theta0;
  theta0.theta = extract_phase(*start, profile).gamma();
  for (auto it = start; it != traj.end() && it->t <= tau + horizon + 1e-9; ++it) {
    const std::vector<double> g = extract_phase(*it, profile).gamma();
    const PhaseField th = ch_flow(kernel, theta0, it->t - tau);
    double e = 0.0;
    for (std::size_t l = 0; l < g.size(); ++l) e = std::max(e, std::abs(g[l] - th.theta[l]));
    res.times.push_back(it->t);
    res.errors.push_back(e);
    res.max_error = std::max(res.max_error, e);
  }
  return res;
}

StabilityResult stability_experiment(const std::vector<LatticeState>& traj, const Profile& profile) {
  if (traj.empty()) throw Error(ErrorCode::InvalidArgument, "empty trajectory");
  const LatticeState& s = traj.back();
  const std::vector<double> g = extract_phase(s, profile).gamma();
  StabilityResult res;
  res.t_final = s.t;
  double mean = 0.0;
  for (double v : g) mean += v;
  mean /= static_cast<double>(g.size());
  res.mu_hat = mean - profile.c_star() * s.t;
  const double shift = profile.c_star() * s.t + res.mu_hat;
  for (long n = s.n_min; n <= s.n_max; ++n)
    for (int r = 0; r < s.P; ++r)
      res.deviation = std::max(res.deviation, std::abs(s.val(n, r) - profile(static_cast<double>(n) - shift)));
  return res;
}

double relaxation_time(const KernelSpec& kernel, long l_period) {
  const double f = fourier_symbol(kernel.a, 2.0 * std::numbers::pi / static_cast<double>(l_period)).f;
  if (!(f < 0.0)) throw Error(ErrorCode::InvalidArgument, "slowest transverse mode is not damped");
  return 3.0 / -f;
}

SuperSubSchedule::SuperSubSchedule(const ScheduleParams& p, const WaveSolution& wave)
    : p_(p), sigma_(wave.dir.sigma) {
  if (!(p.eps > 0.0 && p.eps < 0.5) || !(p.M > 0.0) || !(p.delta > 0.0))
    throw Error(ErrorCode::ScheduleInvalid, "need 0 < eps < 1/2, M > 0 and delta > 0");
  t_c_ = p.t_c > 0.0 ? p.t_c : std::pow(p.delta, -2.0 / 3.0);
  const Nonlinearity& g = wave.nonlin;
  // -g' is convex, so its minimum over an interval sits at an end point or at the vertex.
  auto min_neg_g1 = [&](double a, double b) {
    double v = std::min(-g.g1(a), -g.g1(b));
    const double vertex = (1.0 + g.a) / 3.0;
    if (vertex > a && vertex < b) v = std::min(v, -g.g1(vertex));
    return v;
  };
  const double bound = std::min(min_neg_g1(-p.eps, p.eps), min_neg_g1(1.0 - p.eps, 1.0 + p.eps));
  if (!(bound > 0.0)) throw Error(ErrorCode::ScheduleInvalid, "-g' is not positive near the stable states");
  m_ = std::min(0.5, 0.5 * bound);
  double min_slope = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < wave.phi.size(); ++k)
    if (wave.phi[k] >= p.eps && wave.phi[k] <= 1.0 - p.eps) min_slope = std::min(min_slope, wave.dphi[k]);
  if (!(min_slope > 0.0)) throw Error(ErrorCode::ScheduleInvalid, "profile slope is not positive");
  C_ = std::max(1.0, (2.0 * m_ + p.M) / min_slope);
}

double SuperSubSchedule::K(double t) const {
  return p_.M * p_.delta * (t <= t_c_ ? 1.0 : std::pow(t / t_c_, -1.5));
}

double SuperSubSchedule::z(double t) const {
  // (1 + s^4)^(-3/8) stays within [2^(-3/8), 1] of min(1, s^(-3/2)), so K <= m z <= 2K.
  const double s = t / t_c_;
  return p_.z_scale * 1.5 * p_.M * p_.delta / m_ * std::pow(1.0 + s * s * s * s, -0.375);
}

double SuperSubSchedule::Z(double t) const {
  if (t <= 0.0) return 0.0;
  return C_ * boost::math::quadrature::gauss_kronrod<double, 31>::integrate([this](double s) { return z(s); }, 0.0,
                                                                            t, 10, 1e-12);
}

namespace {

double sup_weighted(const std::vector<const GridFunction*>& f, const std::vector<double>& w) {
  double best = 0.0;
  const std::size_t n = f.front()->size();
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::abs((*f[i])[k]);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

void SuperSubSchedule::validate(const AuxiliaryFunctions& aux, double dtheta0, double horizon) const {
  // |pi_nu theta| <= |sigma_nu| d, |pi_nu nu' theta| <= 2 min(|sigma_nu|, |sigma_nu'|) d.
  std::vector<const GridFunction*> fp, fpp, fq;
  std::vector<double> wp, wpp, wq;
  for (int a = 0; a < 4; ++a) {
    fp.push_back(&aux.p_d[a]);
    wp.push_back(std::abs(sigma_[a]));
    for (int b = 0; b < 4; ++b) {
      fpp.push_back(&aux.p_dd[a][b]);
      wpp.push_back(std::min(std::abs(sigma_[a]), std::abs(sigma_[b])));
      fq.push_back(&aux.q_dd[a][b]);
      wq.push_back(std::abs(sigma_[a] * sigma_[b]));
    }
  }
  const double np = sup_weighted(fp, wp);
  const double npp = sup_weighted(fpp, wpp);
  const double nq = sup_weighted(fq, wq);
  const double lhs = z(0.0) - dtheta0 * np - 2.0 * dtheta0 * npp - dtheta0 * dtheta0 * nq;
  if (!(lhs > nu())) {
    std::ostringstream os;
    os << "z(0) - d|p| - 2d|pdd| - d^2|q| = " << lhs << " <= nu = " << nu();
    throw Error(ErrorCode::ScheduleInvalid, os.str());
  }
  if (z(0.0) > p_.eps) throw Error(ErrorCode::ScheduleInvalid, "z(0) exceeds eps");
  if (horizon > 0.0 && Z(horizon) > p_.eps) {
    std::ostringstream os;
    os << "Z(" << horizon << ") = " << Z(horizon) << " exceeds eps = " << p_.eps;
    throw Error(ErrorCode::ScheduleInvalid, os.str());
  }
}

ThetaPath ch_path(const KernelSpec& kernel, const PhaseField& theta0) {
  return [kernel, theta0](double t) { return ch_flow(kernel, theta0, t).theta; };
}

namespace {

struct AnsatzContext {
  const WaveSolution& wave;
  const AuxiliaryFunctions& aux;
  const std::array<int, 4>& sigma;
  long Lp;
};

double ansatz_at(const AnsatzContext& c, const std::vector<double>& theta, double Z, double z, long n, long l,
                 double sgn) {
  const WaveGrid& grid = c.wave.grid;
  const double th = theta[static_cast<std::size_t>(floor_mod(l, c.Lp))];
  const double xi = static_cast<double>(n) - th + sgn * Z;
  std::array<double, 4> pi{};
  for (int a = 0; a < 4; ++a) pi[a] = theta[static_cast<std::size_t>(floor_mod(l + c.sigma[a], c.Lp))] - th;
  double u = sample(c.wave.phi, grid, xi, 0.0, 1.0) + sgn * z;
  if (xi <= grid.xi(0) || xi >= grid.xi(grid.n_intervals)) return u;
  for (int a = 0; a < 4; ++a) {
    u += pi[a] * sample(c.aux.p_d[a], grid, xi, 0.0, 0.0);
    for (int b = 0; b < 4; ++b) {
      const double th_ab = theta[static_cast<std::size_t>(floor_mod(l + c.sigma[a] + c.sigma[b], c.Lp))];
      const double pdd = th_ab - th - pi[a] - pi[b];
      u += pdd * sample(c.aux.p_dd[a][b], grid, xi, 0.0, 0.0);
      u += pi[a] * pi[b] * sample(c.aux.q_dd[a][b], grid, xi, 0.0, 0.0);
    }
  }
  return u;
}

}  // namespace

double ansatz_value(const WaveSolution& wave, const AuxiliaryFunctions& aux, const SuperSubSchedule& schedule,
                    const std::vector<double>& theta, double t, long n, long l, Sign sign) {
  const AnsatzContext ctx{wave, aux, wave.dir.sigma, static_cast<long>(theta.size())};
  const double sgn = sign == Sign::plus ? 1.0 : -1.0;
  return ansatz_at(ctx, theta, schedule.Z(t), schedule.z(t), n, l, sgn);
}

LatticeState ansatz_field(const WaveSolution& wave, const AuxiliaryFunctions& aux, const SuperSubSchedule& schedule,
                          const ThetaPath& theta, double t, Sign sign, const LatticeState& layout) {
  const std::vector<double> th = theta(t);
  if (static_cast<long>(th.size()) != layout.l_period())
    throw Error(ErrorCode::InvalidArgument, "theta period does not match the lattice period");
  const AnsatzContext ctx{wave, aux, wave.dir.sigma, layout.l_period()};
  const double sgn = sign == Sign::plus ? 1.0 : -1.0;
  const double Z = schedule.Z(t), z = schedule.z(t);
  LatticeState out = layout;
  out.t = t;
  for (long n = out.n_min; n <= out.n_max; ++n)
    for (int r = 0; r < out.P; ++r) out.ref(n, r) = ansatz_at(ctx, th, Z, z, n, out.l_of(n, r), sgn);
  return out;
}

ResidualExtreme supersub_residual(const WaveSolution& wave, const AuxiliaryFunctions& aux, const ThetaPath& theta,
                                  long l_period, const SuperSubSchedule& schedule, const std::vector<double>& times,
                                  Sign sign, double xi_range, double h) {
  const Direction& dir = wave.dir;
  const long s2 = dir.sigma_star_sq;
  if (xi_range <= 0.0) xi_range = wave.grid.L - dir.sigma_inf - 2.0;
  const AnsatzContext ctx{wave, aux, dir.sigma, l_period};
  const double sgn = sign == Sign::plus ? 1.0 : -1.0;
  ResidualExtreme ext;
  ext.value = sign == Sign::plus ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  for (double t : times) {
    std::array<std::vector<double>, 5> th;
    std::array<double, 5> Zs{}, zs{};
    for (int q = 0; q < 5; ++q) {
      const double tq = t + (q - 2) * h;
      th[q] = theta(tq);
      Zs[q] = schedule.Z(tq);
      zs[q] = schedule.z(tq);
    }
    if (static_cast<long>(th[2].size()) != l_period)
      throw Error(ErrorCode::InvalidArgument, "theta period does not match l_period");
    for (long l = 0; l < l_period; ++l) {
      const double centre = th[2][static_cast<std::size_t>(l)];
      const long n0 = longitudinal_residue(dir, l);
      const long lo = static_cast<long>(std::ceil(centre - xi_range));
      const long first = lo + floor_mod(n0 - lo, s2);
      for (long n = first; static_cast<double>(n) <= centre + xi_range; n += s2) {
        auto U = [&](int q, long nn, long ll) { return ansatz_at(ctx, th[q], Zs[q], zs[q], nn, ll, sgn); };
        const double u = U(2, n, l);
        const double du = (U(0, n, l) - 8.0 * U(1, n, l) + 8.0 * U(3, n, l) - U(4, n, l)) / (12.0 * h);
        double lap = 0.0;
        for (int a = 0; a < 4; ++a) lap += U(2, n + dir.tau[a], l + dir.sigma[a]) - u;
        const double J = du - lap - wave.nonlin.g(u);
        ++ext.samples;
        const bool worse = sign == Sign::plus ? J < ext.value : J > ext.value;
        if (worse) {
          ext.value = J;
          ext.t = t;
          ext.n = n;
          ext.l = l;
        }
      }
    }
  }
  return ext;
}

SpeedEstimate simulate_speed(const Direction& dir, const Nonlinearity& nonlin, double T, double dt) {
  if (!(dt > 0.0) || dt > 0.2) throw Error(ErrorCode::StepSizeTooLarge, "dt must lie in (0, 0.2]");
  // Speeds stay below 2 for the bistable cubic with these scales; the window holds that drift.
  const long W = static_cast<long>(std::ceil(2.0 * T)) + 40L * dir.sigma_inf;
  const long size = 2 * W + 1;
  std::vector<double> u(static_cast<std::size_t>(size));
  for (long i = 0; i < size; ++i) u[static_cast<std::size_t>(i)] = i - W >= 0 ? 1.0 : 0.0;
  auto rhs = [&](const std::vector<double>& v, std::vector<double>& out) {
    out.resize(v.size());
    for (long i = 0; i < size; ++i) {
      const double x = v[static_cast<std::size_t>(i)];
      double lap = 0.0;
      for (int a = 0; a < 4; ++a) {
        const long j = i + dir.tau[a];
        lap += (j < 0 ? 0.0 : j >= size ? 1.0 : v[static_cast<std::size_t>(j)]) - x;
      }
      out[static_cast<std::size_t>(i)] = lap + nonlin.g(x);
    }
  };
  // Crossing of 1/2 by cubic interpolation through the four sites around the first up-crossing.
  auto crossing = [&](const std::vector<double>& v) {
    for (long i = 1; i + 2 < size; ++i) {
      const double a = v[static_cast<std::size_t>(i)], b = v[static_cast<std::size_t>(i + 1)];
      if (a <= 0.5 && b > 0.5) {
        const double y0 = v[static_cast<std::size_t>(i - 1)], y3 = v[static_cast<std::size_t>(i + 2)];
        auto p = [&](double s) {
          return y0 * (-s * (s - 1) * (s - 2) / 6.0) + a * ((s + 1) * (s - 1) * (s - 2) / 2.0) +
                 b * (-(s + 1) * s * (s - 2) / 2.0) + y3 * ((s + 1) * s * (s - 1) / 6.0) - 0.5;
        };
        auto done = [](double x, double y) { return std::abs(y - x) <= 1e-13; };
        const auto r = boost::math::tools::bisect(p, 0.0, 1.0, done);
        return static_cast<double>(i - W) + 0.5 * (r.first + r.second);
      }
    }
    throw Error(ErrorCode::NoBracket, "front left the speed-oracle window");
  };
  const long steps = static_cast<long>(std::ceil(T / dt));
  const double h = T / static_cast<double>(steps);
  std::vector<double> k1, k2, k3, k4, tmp(u.size());
  std::vector<double> ts, xs;
  const long every = std::max(1L, static_cast<long>(std::lround(1.0 / h)));
  for (long step = 1; step <= steps; ++step) {
    rhs(u, k1);
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * h * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * h * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + h * k3[i];
    rhs(tmp, k4);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    const double t = step * h;
    if (t >= 0.5 * T && step % every == 0) {
      ts.push_back(t);
      xs.push_back(crossing(u));
    }
  }
  const double n = static_cast<double>(ts.size());
  double st = 0, sx = 0, stt = 0, stx = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sx += xs[i];
    stt += ts[i] * ts[i];
    stx += ts[i] * xs[i];
  }
  SpeedEstimate est;
  est.c = (n * stx - st * sx) / (n * stt - st * st);
  const double b = (sx - est.c * st) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) ss += std::pow(xs[i] - est.c * ts[i] - b, 2);
  est.rms = std::sqrt(ss / n);
  est.t0 = ts.front();
  est.t1 = ts.back();
  return est;
}

std::string field_csv(const LatticeState& s) {
  std::ostringstream os;
  os << std::setprecision(17) << "i,j,n,l,u\n";
  for (long n = s.n_min; n <= s.n_max; ++n)
    for (int r = 0; r < s.P; ++r) {
      const long l = s.l_of(n, r);
      const auto ij = is_member(s.dir, n, l);
      os << ij->first << ',' << ij->second << ',' << n << ',' << l << ',' << s.val(n, r) << '\n';
    }
  return os.str();
}

std::string phase_csv(const std::vector<PhaseTrace>& traces) {
  std::ostringstream os;
  os << std::setprecision(17) << "t,l,n_star,gamma\n";
  for (const auto& tr : traces)
    for (const auto& e : tr.entries) os << tr.t << ',' << e.l << ',' << e.n_star << ',' << e.gamma << '\n';
  return os.str();
}

}  // namespace ofront
