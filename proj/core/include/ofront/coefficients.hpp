#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "ofront/wave.hpp"

namespace ofront {

// Solutions p of  L0 p = rhs - alpha*Phi'  with <p, psi> = 0 for a fixed wave. The
// bordered matrix is factored once and shared by every right-hand side.
class Projector {
 public:
  explicit Projector(const WaveSolution& wave);
  ~Projector();

  struct Result {
    GridFunction p;         // all nodes, zero at both ends
    double alpha = 0.0;     // <rhs, psi>
    double beta = 0.0;      // multiplier of the bordered system
    double residual = 0.0;  // sup |L0 p - rhs + alpha*Phi'| over interior nodes
    double orthogonality = 0.0;  // <p, psi>
  };

  // rhs holds all nodes; only interior values enter.
  Result solve(const GridFunction& rhs) const;

  const WaveSolution& wave() const { return wave_; }

 private:
  struct Impl;
  WaveSolution wave_;
  std::unique_ptr<Impl> impl_;
};

// [T f](xi) = f(xi + shift) on the grid, zero beyond it. shift must be an integer.
GridFunction translate(const GridFunction& f, const WaveGrid& grid, int shift);

using Table4 = std::array<double, 4>;
using Table44 = std::array<std::array<double, 4>, 4>;

struct AuxiliaryFunctions {
  std::array<GridFunction, 4> p_d;
  std::array<std::array<GridFunction, 4>, 4> p_dd;
  std::array<std::array<GridFunction, 4>, 4> q_dd;
};

struct IdentityReport {
  double speed = 0.0;         // c* + sum tau*alpha_p
  double first = 0.0;         // dc (family) + sum a_k k
  double second = 0.0;        // d2c (family) + c* - 2 sum sigma sigma alpha_q
  double second_alt = 0.0;    // same with the alternate alpha_q
  double lambda2 = 0.0;       // f''(0) + Lambda, f'' by differencing the symbol
  double d_ab = 0.0;          // |d_alpha - d_dispersion|
  double d_ac = 0.0;          // |d_alpha - d_identity|
  double d_bc = 0.0;
  bool has_family = false;
};

struct CoefficientSet {
  Direction dir;
  double c_star = 0.0;
  Table4 alpha_p_d{};
  Table44 alpha_p_dd{};
  Table44 alpha_q_dd{};      // q right-hand side with the derivative of p_nu'
  Table44 alpha_q_dd_alt{};  // q right-hand side with the derivative of p_nu

  int N = 0;
  std::vector<double> a;  // a[k + N], a_0 stored as zero
  double a0_raw = 0.0;
  double Lambda = 0.0;          // sum a_k k^2
  double group_velocity = 0.0;  // -sum a_k k

  double kappa_H = 0.0;
  double d = 0.0;             // the value used downstream (alpha form)
  double d_alpha = 0.0;
  double d_dispersion = 0.0;  // needs a directional family
  double d_identity = 0.0;
  double dc_identity = 0.0;   // -sum a_k k
  double d2c_identity = 0.0;  // -c* + 2 sum sigma sigma alpha_q
  std::vector<double> A, B, C;  // indexed like a, zero at k = 0

  double M_margin = 0.0;
  double M_omega = 0.0;

  // Diagnostics of the auxiliary solves.
  double max_residual = 0.0;
  double max_orthogonality = 0.0;
  double max_alpha_gap = 0.0;  // |alpha - beta| over all solves

  double ak(int k) const { return (k < -N || k > N) ? 0.0 : a[static_cast<std::size_t>(k + N)]; }
};

struct AuxiliaryResult {
  AuxiliaryFunctions aux;
  CoefficientSet coeffs;
};

// All 36 auxiliary solves; fills the alpha tables, a_k, Lambda and M_margin.
AuxiliaryResult compute_auxiliary(const WaveSolution& wave);

// a_k from the alpha tables; also sets Lambda and group_velocity.
void assemble_ak(CoefficientSet& c);

struct Symbol {
  double f = 0.0;  // sum a_k (cos k w - 1)
  double p = 0.0;  // sum a_k sin k w
};

// a holds a_k for k = -N..N.
Symbol fourier_symbol(const std::vector<double>& a, double omega);
inline Symbol fourier_symbol(const CoefficientSet& c, double omega) { return fourier_symbol(c.a, omega); }

struct Margin {
  double M = 0.0;
  double omega = 0.0;
};

// sup over (0, pi] of f(w)/w^2: uniform scan, then Brent minimisation around the best cell.
Margin stability_margin(const std::vector<double>& a, int scan_points = 100000);

// kappa_H, the d forms and A_k, B_k, C_k. family may be null; C defaults to 1/(2N).
void curvature_parameters(CoefficientSet& c, const DirectionalFamily* family,
                          const std::vector<double>* C = nullptr);

IdentityReport identity_report(const CoefficientSet& c, const DirectionalFamily* family);

// Reference a_k for (2,5) with a = 0.45, scale 6; k = 1..10 in each list.
struct ReferenceTable {
  std::array<double, 10> plus;   // a_k
  std::array<double, 10> minus;  // a_-k
};
const ReferenceTable& reference_table_2_5();

struct ReferenceDelta {
  int k = 0;
  double computed = 0.0;
  double reference = 0.0;
};
std::vector<ReferenceDelta> reference_deltas(const CoefficientSet& c);

std::string ak_csv(const CoefficientSet& c);
std::string abc_csv(const CoefficientSet& c);
std::string alpha_csv(const CoefficientSet& c);
std::string coefficients_json(const CoefficientSet& c, const IdentityReport& report);

}  // namespace ofront
