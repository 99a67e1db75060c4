#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ofront/geometry.hpp"
#include "ofront/grid.hpp"
#include "ofront/nonlinearity.hpp"

namespace ofront {

struct WaveOptions {
  int max_iter = 50;
  double damping_floor = 1.0 / 1024.0;
  double tol = 1e-11;     // Newton stops below this residual
  double accept = 1e-9;   // largest residual accepted when the iteration stalls
  double c_min = 1e-4;
  bool allow_pinned = false;
  double monotone_tol = 1e-8;
};

struct WaveSolution {
  Direction dir;
  Nonlinearity nonlin;
  WaveGrid grid;
  double c = 0.0;
  GridFunction phi;   // all nodes, phi[0] = 0, phi[n] = 1
  GridFunction dphi;  // fourth-order derivative of phi
  GridFunction psi;   // adjoint kernel, zero at both ends, <psi, dphi> = 1
  double residual_inf = 0.0;
  double phi_at_zero = 0.5;
  double psi_dphi = 1.0;
  double adjoint_defect = 0.0;  // bordering multiplier of the adjoint solve
  double tail_left = 0.0;       // phi at the first interior node
  double tail_right = 0.0;      // 1 - phi at the last interior node
  int iterations = 0;
};

WaveSolution solve_wave(const Direction& dir, const Nonlinearity& nonlin, const WaveGrid& grid,
                        const std::optional<WaveSolution>& guess = std::nullopt,
                        const WaveOptions& opt = {});

// Recomputes psi (and the normalization fields) of a converged wave in place and returns it.
GridFunction solve_adjoint(WaveSolution& wave);

struct DirectionalFamily {
  std::vector<double> angles;
  std::vector<double> speeds;
  std::vector<GridFunction> profiles;  // may be empty for synthetic families
  double c_star = 0.0;
  double dc = 0.0;    // d c_phi / d phi at 0
  double d2c = 0.0;   // d^2 c_phi / d phi^2 at 0
  double normalization_defect = 0.0;

  double dispersion(std::size_t m) const;
};

DirectionalFamily solve_directional_family(const WaveSolution& wave, double phi_max = 0.15,
                                           int n_angles = 9, double step_min = 1e-4,
                                           const WaveOptions& opt = {});

// Builds a family from tabulated speeds on a symmetric angle grid and fills the derivatives.
DirectionalFamily make_family(std::vector<double> angles, std::vector<double> speeds);

// d^2/dphi^2 of c_phi / cos(phi) at 0.
double dispersion_curvature(const DirectionalFamily& family);

std::string wave_csv(const WaveSolution& wave);
std::string wave_summary_json(const WaveSolution& wave);

}  // namespace ofront
