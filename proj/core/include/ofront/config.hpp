#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ofront {

struct ExperimentConfig {
  // direction and nonlinearity
  int sh = 1;
  int sv = 0;
  double a = 0.45;
  double scale = 6.0;
  bool literal_sign = false;
  // wave grid; L = 0 selects max(40, 12 sigma_inf)
  double L = 0.0;
  int per_unit = 20;
  // directional family; n_angles = 0 skips it
  double phi_max = 0.15;
  int n_angles = 0;
  // phase dynamics
  int period = 256;
  std::string model = "ch";  // linear | ch | cmp | dmc
  std::string phase_ic = "square";  // square | random | sine
  double phase_amplitude = 1.0;
  double dt = 1e-3;
  double T = 5.0;
  int stride = 1000;
  std::vector<double> greens_times{0.1, 1.0, 10.0, 100.0};
  long greens_lmax = 200;
  // lattice simulation
  int sim_P = 4;
  std::string sim_ic = "rippled";  // planar | rippled | localized
  double sim_amplitude = 0.5;
  double sim_mu = 0.0;
  double sim_T = 100.0;
  double sim_dt = 0.1;
  double sim_sample = 1.0;
  double sim_margin = 0.0;  // 0 selects 30 sigma_inf
  std::vector<double> taus{20.0, 40.0};
  double track_horizon = 50.0;
  // scan
  int scan_max = 6;
  // verification
  double tol_residual = 1e-9;
  double tol_identity = 1e-4;
  double tol_mass = 1e-8;
  double tol_cole_hopf = 1e-6;
  double tol_reference = 0.05;
  bool reference_check = false;
  std::vector<double> ak_perturb;  // pairs k, delta added to a_k for the Cole-Hopf check
  // output
  std::string out = "out";
  std::uint64_t seed = 1;
};

// Flat "key = value" lines; '#' starts a comment; lists are comma separated.
// Unknown keys and malformed values throw InvalidArgument.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

// Calls f(key, field) for every field in serialization order.
template <class F>
void visit_fields(ExperimentConfig& c, F&& f) {
  f("sh", c.sh);
  f("sv", c.sv);
  f("a", c.a);
  f("scale", c.scale);
  f("literal_sign", c.literal_sign);
  f("L", c.L);
  f("per_unit", c.per_unit);
  f("phi_max", c.phi_max);
  f("n_angles", c.n_angles);
  f("period", c.period);
  f("model", c.model);
  f("phase_ic", c.phase_ic);
  f("phase_amplitude", c.phase_amplitude);
  f("dt", c.dt);
  f("T", c.T);
  f("stride", c.stride);
  f("greens_times", c.greens_times);
  f("greens_lmax", c.greens_lmax);
  f("sim_P", c.sim_P);
  f("sim_ic", c.sim_ic);
  f("sim_amplitude", c.sim_amplitude);
  f("sim_mu", c.sim_mu);
  f("sim_T", c.sim_T);
  f("sim_dt", c.sim_dt);
  f("sim_sample", c.sim_sample);
  f("sim_margin", c.sim_margin);
  f("taus", c.taus);
  f("track_horizon", c.track_horizon);
  f("scan_max", c.scan_max);
  f("tol_residual", c.tol_residual);
  f("tol_identity", c.tol_identity);
  f("tol_mass", c.tol_mass);
  f("tol_cole_hopf", c.tol_cole_hopf);
  f("tol_reference", c.tol_reference);
  f("reference_check", c.reference_check);
  f("ak_perturb", c.ak_perturb);
  f("out", c.out);
  f("seed", c.seed);
}

// Throws InvalidArgument unless every tolerance is positive and the enumerations are known.
void check_config(const ExperimentConfig& cfg);

}  // namespace ofront
