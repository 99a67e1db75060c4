#include "ofront/wave.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ofront/error.hpp"
#include "ofront/mfde.hpp"

namespace ofront {

namespace {

using PhaseRow = std::vector<std::pair<int, double>>;

struct NewtonResult {
  double residual = 0.0;
  int iterations = 0;
};

double phase_value(const PhaseRow& row, const GridFunction& phi) {
  double s = 0.0;
  for (const auto& [i, w] : row) s += w * phi[static_cast<std::size_t>(i) + 1];
  return s;
}

// Pin node for the banded factorization: the largest-weight entry of the phase row.
int row_pin(const PhaseRow& row) {
  int pin = row.front().first;
  double best = 0.0;
  for (const auto& [i, w] : row)
    if (std::abs(w) > best) {
      best = std::abs(w);
      pin = i;
    }
  return pin;
}

double combined_norm(const Eigen::VectorXd& F, double phase) {
  return std::max(F.lpNorm<Eigen::Infinity>(), std::abs(phase));
}

// Damped Newton on (phi interior, c) for op(phi, c) = 0 closed by row.phi = target.
NewtonResult newton(const MfdeOperator& op, GridFunction& phi, double& c, const PhaseRow& row,
                    double target, const WaveOptions& opt) {
  const int m = op.interior();
  const double dx = op.grid().dx;
  Eigen::VectorXd F = op.residual(phi, c);
  double ph = phase_value(row, phi) - target;
  double norm = combined_norm(F, ph);
  NewtonResult out;
  for (int it = 0; it < opt.max_iter; ++it) {
    if (norm <= opt.tol) {
      out.residual = F.lpNorm<Eigen::Infinity>();
      out.iterations = it;
      return out;
    }
    const GridFunction d = derivative(phi, dx, 0.0, 1.0);
    BorderedSolver solver(op.jacobian(phi, c), row_pin(row));
    Eigen::VectorXd v(m), w = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < m; ++k) v[k] = d[k + 1];
    for (const auto& [i, wt] : row) w[i] = wt;
    solver.set_border(v, w);
    Eigen::VectorXd dphi_step;
    double dc = 0.0;
    solver.solve(-F, -ph, dphi_step, dc);
    double lambda = 1.0;
    bool accepted = false;
    while (lambda >= opt.damping_floor) {
      GridFunction trial = phi;
      for (int k = 0; k < m; ++k) trial[k + 1] += lambda * dphi_step[k];
      const double ct = c + lambda * dc;
      Eigen::VectorXd Ft = op.residual(trial, ct);
      const double pt = phase_value(row, trial) - target;
      const double nt = combined_norm(Ft, pt);
      if (std::isfinite(nt) && nt < (1.0 - 1e-4 * lambda) * norm) {
        phi = std::move(trial);
        c = ct;
        F = std::move(Ft);
        ph = pt;
        norm = nt;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      if (norm <= opt.accept) {
        out.residual = F.lpNorm<Eigen::Infinity>();
        out.iterations = it;
        return out;
      }
      throw Error(ErrorCode::NewtonDiverged,
                  "no acceptable damped step, residual " + std::to_string(norm));
    }
  }
  if (norm > opt.accept)
    throw Error(ErrorCode::NewtonDiverged, "iteration limit reached, residual " + std::to_string(norm));
  out.residual = F.lpNorm<Eigen::Infinity>();
  out.iterations = opt.max_iter;
  return out;
}

// Five-point central differences on the innermost five samples of a symmetric grid.
void angle_derivatives(const std::vector<double>& angles, const std::vector<double>& values,
                       double& d1, double& d2) {
  const std::size_t n = angles.size();
  if (n < 5 || n % 2 == 0)
    throw Error(ErrorCode::InvalidArgument, "need an odd number (>= 5) of symmetric angles");
  const std::size_t c = n / 2;
  const double h = angles[c + 1] - angles[c];
  const double fm2 = values[c - 2], fm1 = values[c - 1], f0 = values[c], f1 = values[c + 1],
               f2 = values[c + 2];
  d1 = (fm2 - 8.0 * fm1 + 8.0 * f1 - f2) / (12.0 * h);
  d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * f1 - f2) / (12.0 * h * h);
}

}  // namespace

WaveSolution solve_wave(const Direction& dir, const Nonlinearity& nonlin, const WaveGrid& grid,
                        const std::optional<WaveSolution>& guess, const WaveOptions& opt) {
  if (!nonlin.bistable())
    throw Error(ErrorCode::InvalidArgument, "nonlinearity does not have stable states 0 and 1");
  if (grid.L < 4.0 * dir.sigma_inf + 10.0)
    throw Error(ErrorCode::InvalidGrid, "L must be at least 4*sigma_inf + 10");
  if (grid.per_unit < 10) throw Error(ErrorCode::InvalidGrid, "dx must be 1/m with m >= 10");

  const int n = grid.n_intervals;
  MfdeOperator op(grid, nonlin, direction_shifts(dir));
  const PhaseRow row{{grid.zero_index() - 1, 1.0}};
  const double I = nonlin.integral();
  const double c_sign = I > 0 ? -1.0 : (I < 0 ? 1.0 : 0.0);

  // Starting points: the supplied guess, then logistic profiles of increasing width.
  // Width sigma_star matches the n-scaling of oblique fronts.
  std::vector<std::pair<GridFunction, double>> starts;
  if (guess) {
    GridFunction phi(static_cast<std::size_t>(n) + 1);
    if (guess->grid.n_intervals == n && guess->grid.L == grid.L) {
      phi = guess->phi;
    } else {
      for (int k = 0; k <= n; ++k)
        phi[k] = std::clamp(sample(guess->phi, guess->grid, grid.xi(k), 0.0, 1.0), 0.0, 1.0);
    }
    starts.emplace_back(std::move(phi), guess->c);
  }
  const double sstar = std::sqrt(static_cast<double>(dir.sigma_star_sq));
  for (double width : {1.0, 0.5 * sstar, sstar}) {
    if (width < 1.0 && !starts.empty()) continue;
    GridFunction phi(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) phi[k] = 1.0 / (1.0 + std::exp(-grid.xi(k) / width));
    starts.emplace_back(std::move(phi), 0.1 * c_sign * width);
  }

  GridFunction phi;
  double c = 0.0;
  NewtonResult nr;
  bool done = false;
  std::string last_error;
  for (auto& [phi0, c0] : starts) {
    phi = phi0;
    c = c0;
    phi[0] = 0.0;
    phi[n] = 1.0;
    try {
      nr = newton(op, phi, c, row, 0.5, opt);
      done = true;
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NewtonDiverged && e.code() != ErrorCode::SingularLinearSystem) throw;
      last_error = e.what();
    }
  }
  if (!done) throw Error(ErrorCode::NewtonDiverged, "all starting profiles failed: " + last_error);

  WaveSolution w;
  w.dir = dir;
  w.nonlin = nonlin;
  w.grid = grid;
  w.c = c;
  w.phi = std::move(phi);
  w.dphi = derivative(w.phi, grid.dx, 0.0, 1.0);
  w.residual_inf = nr.residual;
  w.iterations = nr.iterations;
  w.phi_at_zero = w.phi[grid.zero_index()];
  w.tail_left = w.phi[1];
  w.tail_right = 1.0 - w.phi[n - 1];

  if (std::abs(c) < opt.c_min && !opt.allow_pinned)
    throw Error(ErrorCode::PinnedWave, "|c| = " + std::to_string(std::abs(c)) + " below c_min");
  // Decreases of the size of the truncated tails are boundary artifacts.
  const double allowed = opt.monotone_tol + 10.0 * (w.tail_left + w.tail_right);
  for (int k = 0; k < n; ++k) {
    if (w.phi[k + 1] - w.phi[k] < -allowed)
      throw Error(ErrorCode::NonMonotone, "profile decreases near xi = " + std::to_string(grid.xi(k)));
  }
  solve_adjoint(w);
  return w;
}

GridFunction solve_adjoint(WaveSolution& w) {
  const WaveGrid& grid = w.grid;
  const int n = grid.n_intervals;
  const int m = n - 1;
  MfdeOperator op(grid, w.nonlin, direction_shifts(w.dir));
  // Bordered transpose: A' psi + s*dphi = 0, psi(0) = 1. The multiplier s absorbs the
  // O(dx^4) defect of the discrete translation mode.
  const int pin = grid.zero_index() - 1;
  BorderedSolver solver(op.jacobian(w.phi, w.c), pin, true);
  Eigen::VectorXd v(m), e = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < m; ++k) v[k] = w.dphi[k + 1];
  e[pin] = 1.0;
  solver.set_border(v, e);
  Eigen::VectorXd sol;
  double s = 0.0;
  solver.solve(Eigen::VectorXd::Zero(m), 1.0, sol, s);
  if (!sol.allFinite()) throw Error(ErrorCode::SingularLinearSystem, "adjoint solve produced non-finite values");

  GridFunction psi(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k < m; ++k) psi[k + 1] = sol[k];
  const double norm = inner(psi, w.dphi, grid.dx);
  if (!(std::abs(norm) > 0.0)) throw Error(ErrorCode::SingularLinearSystem, "<psi, phi'> vanishes");
  for (double& v : psi) v /= norm;
  w.adjoint_defect = s / norm;
  w.psi = std::move(psi);
  w.psi_dphi = inner(w.psi, w.dphi, grid.dx);
  return w.psi;
}

double DirectionalFamily::dispersion(std::size_t m) const { return speeds[m] / std::cos(angles[m]); }

DirectionalFamily make_family(std::vector<double> angles, std::vector<double> speeds) {
  DirectionalFamily f;
  f.angles = std::move(angles);
  f.speeds = std::move(speeds);
  angle_derivatives(f.angles, f.speeds, f.dc, f.d2c);
  f.c_star = f.speeds[f.angles.size() / 2];
  return f;
}

double dispersion_curvature(const DirectionalFamily& family) {
  std::vector<double> D(family.angles.size());
  for (std::size_t m = 0; m < D.size(); ++m) D[m] = family.dispersion(m);
  double d1 = 0.0, d2 = 0.0;
  angle_derivatives(family.angles, D, d1, d2);
  return d2;
}

DirectionalFamily solve_directional_family(const WaveSolution& wave, double phi_max, int n_angles,
                                           double step_min, const WaveOptions& opt) {
  if (n_angles < 5 || n_angles % 2 == 0)
    throw Error(ErrorCode::InvalidArgument, "n_angles must be odd and at least 5");
  const WaveGrid& grid = wave.grid;
  const int half = n_angles / 2;
  const double h = phi_max / half;
  PhaseRow row;
  double target = 0.0;
  for (int k = 1; k < grid.n_intervals; ++k) {
    const double w = grid.dx * wave.psi[k];
    row.emplace_back(k - 1, w);
    target += w * wave.phi[k];
  }

  std::vector<double> angles(n_angles), speeds(n_angles);
  std::vector<GridFunction> profiles(n_angles);
  angles[half] = 0.0;
  speeds[half] = wave.c;
  profiles[half] = wave.phi;
  double defect = 0.0;

  for (int side : {1, -1}) {
    GridFunction phi = wave.phi;
    double c = wave.c;
    double current = 0.0;
    for (int j = 1; j <= half; ++j) {
      const double goal = side * j * h;
      double step = goal - current;
      while (std::abs(goal - current) > 1e-15) {
        if (std::abs(step) < step_min)
          throw Error(ErrorCode::ContinuationStall, "angle step fell below minimum near phi = " +
                                                        std::to_string(current));
        const double next = std::abs(goal - current) < std::abs(step) ? goal : current + step;
        GridFunction trial = phi;
        double ct = c;
        try {
          MfdeOperator op(grid, wave.nonlin, direction_shifts(wave.dir, next));
          newton(op, trial, ct, row, target, opt);
          phi = std::move(trial);
          c = ct;
          current = next;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NewtonDiverged && e.code() != ErrorCode::SingularLinearSystem) throw;
          step *= 0.5;
        }
      }
      const int idx = half + side * j;
      angles[idx] = goal;
      speeds[idx] = c;
      profiles[idx] = phi;
      defect = std::max(defect, std::abs(phase_value(row, phi) - target));
    }
  }
  DirectionalFamily fam = make_family(std::move(angles), std::move(speeds));
  fam.profiles = std::move(profiles);
  fam.c_star = wave.c;
  fam.normalization_defect = defect;
  return fam;
}

std::string wave_csv(const WaveSolution& wave) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "xi,phi,psi\n";
  for (int k = 0; k <= wave.grid.n_intervals; ++k)
    os << wave.grid.xi(k) << ',' << wave.phi[k] << ',' << wave.psi[k] << '\n';
  return os.str();
}

std::string wave_summary_json(const WaveSolution& wave) {
  nlohmann::ordered_json j;
  j["sigma_h"] = wave.dir.sigma_h;
  j["sigma_v"] = wave.dir.sigma_v;
  j["a"] = wave.nonlin.a;
  j["scale"] = wave.nonlin.scale;
  j["L"] = wave.grid.L;
  j["dx"] = wave.grid.dx;
  j["c"] = wave.c;
  j["residual_inf"] = wave.residual_inf;
  j["phi_at_zero"] = wave.phi_at_zero;
  j["psi_dphi"] = wave.psi_dphi;
  j["tail_left"] = wave.tail_left;
  j["tail_right"] = wave.tail_right;
  j["newton_iterations"] = wave.iterations;
  return j.dump(2);
}

}  // namespace ofront
