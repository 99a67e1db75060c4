#include "ofront/coefficients.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "ofront/error.hpp"
#include "ofront/mfde.hpp"

namespace ofront {

struct Projector::Impl {
  SparseMatrix J;
  BorderedSolver solver;
  Eigen::VectorXd dphi;

  Impl(SparseMatrix j, int pin) : J(std::move(j)), solver(J, pin) {}
};

Projector::Projector(const WaveSolution& wave) : wave_(wave) {
  const WaveGrid& grid = wave_.grid;
  const int m = grid.n_intervals - 1;
  if (wave_.psi.size() != wave_.phi.size())
    throw Error(ErrorCode::InvalidArgument, "wave has no adjoint kernel");
  MfdeOperator op(grid, wave_.nonlin, direction_shifts(wave_.dir));
  impl_ = std::make_unique<Impl>(op.jacobian(wave_.phi, wave_.c), grid.zero_index() - 1);
  impl_->dphi.resize(m);
  Eigen::VectorXd w(m);
  for (int k = 0; k < m; ++k) {
    impl_->dphi[k] = wave_.dphi[k + 1];
    w[k] = grid.dx * wave_.psi[k + 1];
  }
  impl_->solver.set_border(impl_->dphi, w);
}

Projector::~Projector() = default;

Projector::Result Projector::solve(const GridFunction& rhs) const {
  const WaveGrid& grid = wave_.grid;
  const int m = grid.n_intervals - 1;
  Eigen::VectorXd f(m);
  for (int k = 0; k < m; ++k) f[k] = rhs[k + 1];
  Result r;
  r.alpha = inner(rhs, wave_.psi, grid.dx);
  Eigen::VectorXd x;
  impl_->solver.solve(f, 0.0, x, r.beta);
  if (!x.allFinite()) throw Error(ErrorCode::SingularLinearSystem, "auxiliary solve produced non-finite values");
  r.p.assign(static_cast<std::size_t>(m) + 2, 0.0);
  for (int k = 0; k < m; ++k) r.p[k + 1] = x[k];
  r.residual = (impl_->J * x - f + r.alpha * impl_->dphi).lpNorm<Eigen::Infinity>();
  r.orthogonality = inner(r.p, wave_.psi, grid.dx);
  return r;
}

GridFunction translate(const GridFunction& f, const WaveGrid& grid, int shift) {
  const long n = static_cast<long>(f.size());
  const long s = static_cast<long>(shift) * grid.per_unit;
  GridFunction out(f.size());
  for (long k = 0; k < n; ++k) out[k] = clamped(f, k + s, 0.0, 0.0);
  return out;
}

namespace {

double sigma_quadratic(const Direction& dir, const Table44& t) {
  double s = 0.0;
  for (int nu = 0; nu < 4; ++nu)
    for (int mu = 0; mu < 4; ++mu) s += dir.sigma[nu] * dir.sigma[mu] * t[nu][mu];
  return s;
}

}  // namespace

AuxiliaryResult compute_auxiliary(const WaveSolution& wave) {
  const WaveGrid& grid = wave.grid;
  const Direction& dir = wave.dir;
  const double dx = grid.dx;
  Projector proj(wave);
  AuxiliaryResult out;
  AuxiliaryFunctions& aux = out.aux;
  CoefficientSet& cs = out.coeffs;
  cs.dir = dir;
  cs.c_star = wave.c;

  auto record = [&cs](const Projector::Result& r) {
    cs.max_residual = std::max(cs.max_residual, r.residual);
    cs.max_orthogonality = std::max(cs.max_orthogonality, std::abs(r.orthogonality));
    cs.max_alpha_gap = std::max(cs.max_alpha_gap, std::abs(r.alpha - r.beta));
  };

  for (int nu = 0; nu < 4; ++nu) {
    auto r = proj.solve(translate(wave.dphi, grid, dir.tau[nu]));
    record(r);
    cs.alpha_p_d[nu] = r.alpha;
    aux.p_d[nu] = std::move(r.p);
  }

  for (int nu = 0; nu < 4; ++nu)
    for (int mu = 0; mu < 4; ++mu) {
      GridFunction rhs = translate(aux.p_d[nu], grid, dir.tau[mu]);
      for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = cs.alpha_p_d[mu] * aux.p_d[nu][k] - rhs[k];
      auto r = proj.solve(rhs);
      record(r);
      cs.alpha_p_dd[nu][mu] = r.alpha;
      aux.p_dd[nu][mu] = std::move(r.p);
    }

  std::array<GridFunction, 4> dp;
  std::array<double, 4> dp_psi{};
  for (int nu = 0; nu < 4; ++nu) {
    dp[nu] = derivative(aux.p_d[nu], dx);
    dp_psi[nu] = inner(dp[nu], wave.psi, dx);
  }
  const GridFunction d2phi = derivative(wave.dphi, dx);
  for (int nu = 0; nu < 4; ++nu)
    for (int mu = 0; mu < 4; ++mu) {
      GridFunction rhs = translate(dp[nu], grid, dir.tau[mu]);
      const GridFunction curv =
          nu == mu ? translate(d2phi, grid, dir.tau[nu]) : GridFunction(rhs.size(), 0.0);
      for (std::size_t k = 0; k < rhs.size(); ++k) {
        rhs[k] += -cs.alpha_p_d[nu] * dp[mu][k] -
                  0.5 * wave.nonlin.g2(wave.phi[k]) * aux.p_d[nu][k] * aux.p_d[mu][k] - 0.5 * curv[k];
      }
      auto r = proj.solve(rhs);
      record(r);
      cs.alpha_q_dd[nu][mu] = r.alpha;
      cs.alpha_q_dd_alt[nu][mu] = r.alpha + cs.alpha_p_d[nu] * (dp_psi[mu] - dp_psi[nu]);
      aux.q_dd[nu][mu] = std::move(r.p);
    }

  assemble_ak(cs);
  const Margin mg = stability_margin(cs.a);
  cs.M_margin = mg.M;
  cs.M_omega = mg.omega;
  cs.kappa_H = 0.5 * cs.Lambda;
  cs.dc_identity = cs.group_velocity;
  cs.d2c_identity = -cs.c_star + 2.0 * sigma_quadratic(dir, cs.alpha_q_dd);
  return out;
}

void assemble_ak(CoefficientSet& c) {
  const Direction& dir = c.dir;
  c.N = dir.N;
  const int N = c.N;
  c.a.assign(static_cast<std::size_t>(2 * N + 1), 0.0);
  auto add = [&](int k, double v) { c.a[static_cast<std::size_t>(k + N)] += v; };
  for (int nu = 0; nu < 4; ++nu) add(dir.sigma[nu], c.alpha_p_d[nu]);
  for (int nu = 0; nu < 4; ++nu)
    for (int mu = 0; mu < 4; ++mu) {
      const double v = c.alpha_p_dd[nu][mu];
      add(dir.sigma[nu] + dir.sigma[mu], v);
      add(dir.sigma[nu], -v);
      add(dir.sigma[mu], -v);
    }
  // a_0 multiplies theta_l - theta_l and never enters the dynamics.
  c.a0_raw = c.a[static_cast<std::size_t>(N)];
  c.a[static_cast<std::size_t>(N)] = 0.0;
  c.Lambda = 0.0;
  c.group_velocity = 0.0;
  for (int k = -N; k <= N; ++k) {
    c.Lambda += c.ak(k) * k * k;
    c.group_velocity -= c.ak(k) * k;
  }
}

Symbol fourier_symbol(const std::vector<double>& a, double omega) {
  const int N = static_cast<int>(a.size() / 2);
  Symbol s;
  for (int k = -N; k <= N; ++k) {
    const double ak = a[static_cast<std::size_t>(k + N)];
    s.f += ak * (std::cos(k * omega) - 1.0);
    s.p += ak * std::sin(k * omega);
  }
  return s;
}

Margin stability_margin(const std::vector<double>& a, int scan_points) {
  if (scan_points < 2) throw Error(ErrorCode::InvalidArgument, "scan needs at least two points");
  const double pi = std::numbers::pi;
  auto ratio = [&a](double w) { return fourier_symbol(a, w).f / (w * w); };
  const double h = pi / scan_points;
  Margin best{ratio(h), h};
  int jbest = 1;
  for (int j = 2; j <= scan_points; ++j) {
    const double w = j * h;
    const double r = ratio(w);
    if (r > best.M) {
      best = {r, w};
      jbest = j;
    }
  }
  const double lo = std::max((jbest - 1) * h, 0.5 * h);
  const double hi = std::min((jbest + 1) * h, pi);
  const auto [w, neg] =
      boost::math::tools::brent_find_minima([&](double x) { return -ratio(x); }, lo, hi, 52);
  if (-neg > best.M) best = {-neg, w};
  return best;
}

void curvature_parameters(CoefficientSet& c, const DirectionalFamily* family, const std::vector<double>* C) {
  const int N = c.N;
  if (std::abs(c.c_star) < 1e-4)
    throw Error(ErrorCode::PinnedWave, "A_k is undefined for a (nearly) standing wave");
  if (!(c.Lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "Lambda must be positive");
  const double q = sigma_quadratic(c.dir, c.alpha_q_dd);
  c.kappa_H = 0.5 * c.Lambda;
  c.dc_identity = c.group_velocity;
  c.d2c_identity = -c.c_star + 2.0 * q;
  c.d_alpha = 2.0 * q / c.Lambda;
  c.d_identity = (c.c_star + c.d2c_identity) / c.Lambda;
  c.d_dispersion = family ? dispersion_curvature(*family) / (2.0 * c.kappa_H) : std::nan("");
  c.d = c.d_alpha;

  const std::size_t size = static_cast<std::size_t>(2 * N + 1);
  if (C) {
    if (C->size() != size) throw Error(ErrorCode::InvalidArgument, "C table must have 2N+1 entries");
    double s0 = 0.0, s1 = 0.0;
    for (int k = -N; k <= N; ++k) {
      if (k == 0) continue;
      s0 += (*C)[static_cast<std::size_t>(k + N)];
      s1 += k * (*C)[static_cast<std::size_t>(k + N)];
    }
    if (std::abs(s0 - 1.0) > 1e-12 || std::abs(s1) > 1e-12)
      throw Error(ErrorCode::InvalidArgument, "C must satisfy sum C_k = 1 and sum k C_k = 0");
    c.C = *C;
    c.C[static_cast<std::size_t>(N)] = 0.0;
  } else {
    c.C.assign(size, 1.0 / (2.0 * N));
    c.C[static_cast<std::size_t>(N)] = 0.0;
  }
  c.A.assign(size, 0.0);
  c.B.assign(size, 0.0);
  for (int k = -N; k <= N; ++k) {
    if (k == 0) continue;
    const std::size_t i = static_cast<std::size_t>(k + N);
    c.A[i] = c.d * c.a[i] * k * k / c.c_star - c.C[i] * c.d2c_identity / c.c_star;
    c.B[i] = c.a[i] * k * k / (2.0 * c.kappa_H) + k * c.C[i] * c.dc_identity / (2.0 * c.kappa_H);
  }
}

IdentityReport identity_report(const CoefficientSet& c, const DirectionalFamily* family) {
  IdentityReport r;
  double s = 0.0;
  for (int nu = 0; nu < 4; ++nu) s += c.dir.tau[nu] * c.alpha_p_d[nu];
  r.speed = c.c_star + s;
  double f2 = 0.0;
  for (int k = -c.N; k <= c.N; ++k) f2 -= c.ak(k) * k * k;
  r.lambda2 = f2 + c.Lambda;
  const double q = sigma_quadratic(c.dir, c.alpha_q_dd);
  const double q_alt = sigma_quadratic(c.dir, c.alpha_q_dd_alt);
  if (family) {
    r.has_family = true;
    r.first = family->dc - c.group_velocity;
    r.second = family->d2c + c.c_star - 2.0 * q;
    r.second_alt = family->d2c + c.c_star - 2.0 * q_alt;
    r.d_ab = std::abs(c.d_alpha - c.d_dispersion);
    r.d_bc = std::abs(c.d_dispersion - c.d_identity);
  }
  r.d_ac = std::abs(c.d_alpha - c.d_identity);
  return r;
}

std::string ak_csv(const CoefficientSet& c) {
  std::ostringstream os;
  os << std::setprecision(17) << "k,a_k\n";
  for (int k = -c.N; k <= c.N; ++k) os << k << ',' << c.ak(k) << '\n';
  return os.str();
}

std::string abc_csv(const CoefficientSet& c) {
  std::ostringstream os;
  os << std::setprecision(17) << "k,A_k,B_k,C_k\n";
  for (int k = -c.N; k <= c.N; ++k) {
    if (k == 0 || c.A.empty()) continue;
    const std::size_t i = static_cast<std::size_t>(k + c.N);
    os << k << ',' << c.A[i] << ',' << c.B[i] << ',' << c.C[i] << '\n';
  }
  return os.str();
}

std::string alpha_csv(const CoefficientSet& c) {
  std::ostringstream os;
  os << std::setprecision(17) << "kind,nu,nu2,alpha\n";
  for (int nu = 0; nu < 4; ++nu) os << "p_d," << nu + 1 << ",0," << c.alpha_p_d[nu] << '\n';
  for (int nu = 0; nu < 4; ++nu)
    for (int mu = 0; mu < 4; ++mu) os << "p_dd," << nu + 1 << ',' << mu + 1 << ',' << c.alpha_p_dd[nu][mu] << '\n';
  for (int nu = 0; nu < 4; ++nu)
    for (int mu = 0; mu < 4; ++mu) os << "q_dd," << nu + 1 << ',' << mu + 1 << ',' << c.alpha_q_dd[nu][mu] << '\n';
  for (int nu = 0; nu < 4; ++nu)
    for (int mu = 0; mu < 4; ++mu)
      os << "q_dd_alt," << nu + 1 << ',' << mu + 1 << ',' << c.alpha_q_dd_alt[nu][mu] << '\n';
  return os.str();
}

const ReferenceTable& reference_table_2_5() {
  static const ReferenceTable t{{0, 0.896, 0.195, 0.068, 0.966, 0, -0.143, 0, 0, 0.05},
                                {0, 0.912, 0.0925, 0.179, 1.005, 0, -0.199, 0, 0, 0.03}};
  return t;
}

std::vector<ReferenceDelta> reference_deltas(const CoefficientSet& c) {
  const ReferenceTable& t = reference_table_2_5();
  std::vector<ReferenceDelta> out;
  for (int k = 1; k <= 10; ++k) {
    out.push_back({k, c.ak(k), t.plus[static_cast<std::size_t>(k - 1)]});
    out.push_back({-k, c.ak(-k), t.minus[static_cast<std::size_t>(k - 1)]});
  }
  return out;
}

std::string coefficients_json(const CoefficientSet& c, const IdentityReport& r) {
  nlohmann::ordered_json j;
  j["sigma_h"] = c.dir.sigma_h;
  j["sigma_v"] = c.dir.sigma_v;
  j["c_star"] = c.c_star;
  j["N"] = c.N;
  j["Lambda"] = c.Lambda;
  j["kappa_H"] = c.kappa_H;
  j["group_velocity"] = c.group_velocity;
  j["d"] = {{"alpha", c.d_alpha},
            {"dispersion", std::isnan(c.d_dispersion) ? nlohmann::ordered_json() : nlohmann::ordered_json(c.d_dispersion)},
            {"identity", c.d_identity}};
  j["M_margin"] = c.M_margin;
  j["M_omega"] = c.M_omega;
  j["a0_raw"] = c.a0_raw;
  nlohmann::ordered_json id;
  id["speed"] = r.speed;
  id["lambda2"] = r.lambda2;
  id["d_alpha_identity"] = r.d_ac;
  if (r.has_family) {
    id["first_derivative"] = r.first;
    id["second_derivative"] = r.second;
    id["second_derivative_alt"] = r.second_alt;
    id["d_alpha_dispersion"] = r.d_ab;
    id["d_dispersion_identity"] = r.d_bc;
  }
  j["identities"] = id;
  j["solves"] = {{"max_residual", c.max_residual},
                 {"max_orthogonality", c.max_orthogonality},
                 {"max_alpha_gap", c.max_alpha_gap}};
  return j.dump(2);
}

}  // namespace ofront
