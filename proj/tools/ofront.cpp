// Command line driver: one subcommand per pipeline stage, configured by a key=value file
// (--config) plus flags that mirror the file keys.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <type_traits>

#include "ofront/coefficients.hpp"
#include "ofront/config.hpp"
#include "ofront/error.hpp"
#include "ofront/lattice.hpp"
#include "ofront/phase.hpp"
#include "ofront/wave.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace ofront;

namespace {

const char* kColumns = R"(Output files (CSV column order):
  wave      wave.csv          xi,phi,psi              wave.json
  coeffs    ak.csv            k,a_k
            abc.csv           k,A_k,B_k,C_k
            alpha.csv         kind,nu,nu2,alpha       coefficients.json
  scan      scan.csv          sh,sv,ratio,M,c,d,kappa_H,status
  greens    greens.csv        t,l,M                   greens.json
  phase     phase.csv         t,l,theta               phase.json
  simulate  phase_trace.csv   t,l,n_star,gamma
            field.csv         i,j,n,l,u (final state) simulate.json
  verify    verify.json
Every CSV starts with a '# ofront <command> seed=<seed>' line.
Exit codes: 0 success, 1 verification failure, 10-19 solver errors, 20-29 simulation errors.)";

struct Context {
  ExperimentConfig cfg;
  std::string command;
};

void write_file(const Context& ctx, const std::string& name, const std::string& body, bool csv) {
  fs::create_directories(ctx.cfg.out);
  std::ofstream f(fs::path(ctx.cfg.out) / name);
  if (csv) f << "# ofront " << ctx.command << " seed=" << ctx.cfg.seed << '\n';
  f << body;
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + name);
}

json header(const Context& ctx) {
  json j;
  j["command"] = ctx.command;
  j["seed"] = ctx.cfg.seed;
  return j;
}

WaveSolution wave_for(const ExperimentConfig& c) {
  const Direction dir = make_direction(c.sh, c.sv);
  const WaveGrid grid = c.L > 0.0 ? make_grid(c.L, c.per_unit) : default_grid(dir, c.per_unit);
  return solve_wave(dir, make_nonlinearity(c.a, c.scale, c.literal_sign), grid);
}

struct Pipeline {
  WaveSolution wave;
  AuxiliaryResult aux;
  DirectionalFamily family;
  bool has_family = false;
};

Pipeline pipeline_for(const ExperimentConfig& c) {
  Pipeline p{wave_for(c), {}, {}, false};
  p.aux = compute_auxiliary(p.wave);
  if (c.n_angles > 0) {
    p.family = solve_directional_family(p.wave, c.phi_max, c.n_angles);
    p.has_family = true;
  }
  curvature_parameters(p.aux.coeffs, p.has_family ? &p.family : nullptr);
  return p;
}

int cmd_wave(const Context& ctx) {
  const WaveSolution w = wave_for(ctx.cfg);
  write_file(ctx, "wave.csv", wave_csv(w), true);
  json j = header(ctx);
  j["wave"] = json::parse(wave_summary_json(w));
  write_file(ctx, "wave.json", j.dump(2) + "\n", false);
  std::cout << "c = " << w.c << "  residual = " << w.residual_inf << '\n';
  return 0;
}

int cmd_coeffs(const Context& ctx) {
  const Pipeline p = pipeline_for(ctx.cfg);
  const CoefficientSet& c = p.aux.coeffs;
  const IdentityReport rep = identity_report(c, p.has_family ? &p.family : nullptr);
  write_file(ctx, "ak.csv", ak_csv(c), true);
  write_file(ctx, "abc.csv", abc_csv(c), true);
  write_file(ctx, "alpha.csv", alpha_csv(c), true);
  json j = header(ctx);
  j["coefficients"] = json::parse(coefficients_json(c, rep));
  write_file(ctx, "coefficients.json", j.dump(2) + "\n", false);
  std::cout << "Lambda = " << c.Lambda << "  group velocity = " << c.group_velocity << "  M = " << c.M_margin << '\n';
  return 0;
}

int cmd_scan(const Context& ctx) {
  std::ostringstream os;
  os << std::setprecision(12) << "sh,sv,ratio,M,c,d,kappa_H,status\n";
  int failures = 0;
  for (int sh = 1; sh <= ctx.cfg.scan_max; ++sh)
    for (int sv = 0; sv <= sh; ++sv) {
      if (std::gcd(sh, sv) != 1) continue;
      ExperimentConfig c = ctx.cfg;
      c.sh = sh;
      c.sv = sv;
      c.n_angles = 0;
      os << sh << ',' << sv << ',' << static_cast<double>(sv) / sh << ',';
      try {
        const Pipeline p = pipeline_for(c);
        const CoefficientSet& cs = p.aux.coeffs;
        os << cs.M_margin << ',' << cs.c_star << ',' << cs.d << ',' << cs.kappa_H << ",ok\n";
      } catch (const Error& e) {
        ++failures;
        os << ",,,," << error_name(e.code()) << '\n';
      }
    }
  write_file(ctx, "scan.csv", os.str(), true);
  std::cout << "scan written; failed directions: " << failures << '\n';
  return 0;
}

KernelSpec kernel_with_perturbation(const CoefficientSet& cs, const std::vector<double>& perturb) {
  KernelSpec k = make_kernel(cs);
  for (std::size_t i = 0; i + 1 < perturb.size(); i += 2) {
    const int kk = static_cast<int>(std::lround(perturb[i]));
    if (kk < -k.N || kk > k.N || kk == 0) throw Error(ErrorCode::InvalidArgument, "ak_perturb index out of range");
    k.a[static_cast<std::size_t>(kk + k.N)] += perturb[i + 1];
  }
  return k;
}

int cmd_greens(const Context& ctx) {
  const Pipeline p = pipeline_for(ctx.cfg);
  const KernelSpec k = make_kernel(p.aux.coeffs);
  std::ostringstream os;
  os << std::setprecision(17) << "t,l,M\n";
  json j = header(ctx);
  j["group_velocity"] = k.group_velocity();
  json slices = json::array();
  for (double t : ctx.cfg.greens_times) {
    const GreensSlice g = greens_function(k, t, -ctx.cfg.greens_lmax, ctx.cfg.greens_lmax);
    std::size_t best = 0;
    for (std::size_t i = 0; i < g.M.size(); ++i) {
      os << t << ',' << g.l_min + static_cast<long>(i) << ',' << g.M[i] << '\n';
      if (std::abs(g.M[i]) > std::abs(g.M[best])) best = i;
    }
    slices.push_back({{"t", t}, {"mass", g.mass}, {"imag_residue", g.imag_residue}, {"nodes", g.nodes},
                      {"argmax", g.l_min + static_cast<long>(best)}});
  }
  j["slices"] = slices;
  write_file(ctx, "greens.csv", os.str(), true);
  write_file(ctx, "greens.json", j.dump(2) + "\n", false);
  return 0;
}

PhaseField initial_phase(const ExperimentConfig& c) {
  if (c.phase_ic == "square") return square_wave(c.period, c.phase_amplitude);
  if (c.phase_ic == "random") return random_field(c.period, c.phase_amplitude, c.seed);
  PhaseField f;
  f.theta.resize(static_cast<std::size_t>(c.period));
  for (int l = 0; l < c.period; ++l) f.theta[l] = c.phase_amplitude * std::sin(2.0 * std::numbers::pi * l / c.period);
  return f;
}

PhaseModel model_of(const std::string& s) {
  if (s == "linear") return PhaseModel::linear;
  if (s == "cmp") return PhaseModel::cmp;
  if (s == "dmc") return PhaseModel::dmc;
  return PhaseModel::ch;
}

int cmd_phase(const Context& ctx) {
  const ExperimentConfig& c = ctx.cfg;
  const PhaseModel model = model_of(c.model);
  if (model == PhaseModel::dmc && c.n_angles <= 0)
    throw Error(ErrorCode::InvalidArgument, "the dmc model needs a directional family (n_angles > 0)");
  const Pipeline p = pipeline_for(c);
  const KernelSpec k = make_kernel(p.aux.coeffs);
  DmcInputs dmc;
  if (model == PhaseModel::dmc) dmc = make_dmc_inputs(p.aux.coeffs, p.family);
  const PhaseField th0 = initial_phase(c);
  const auto traj = integrate_phase(model, k, th0, c.T, c.dt, c.stride, model == PhaseModel::dmc ? &dmc : nullptr);
  std::ostringstream os;
  os << std::setprecision(17) << "t,l,theta\n";
  for (const auto& f : traj)
    for (int l = 0; l < f.period(); ++l) os << f.t << ',' << l << ',' << f.theta[l] << '\n';
  write_file(ctx, "phase.csv", os.str(), true);
  json j = header(ctx);
  j["model"] = c.model;
  j["final_dev"] = traj.back().dev();
  j["final_d1"] = sup_norm(nth_difference(traj.back().theta, 1));
  if (model == PhaseModel::ch) {
    const PhaseField ex = ch_flow(k, th0, c.T);
    double e = 0.0;
    for (std::size_t l = 0; l < ex.theta.size(); ++l) e = std::max(e, std::abs(ex.theta[l] - traj.back().theta[l]));
    j["cole_hopf_error"] = e;
  }
  write_file(ctx, "phase.json", j.dump(2) + "\n", false);
  return 0;
}

int cmd_simulate(const Context& ctx) {
  const ExperimentConfig& c = ctx.cfg;
  const Pipeline p = pipeline_for(c);
  const Profile prof(p.wave);
  const KernelSpec k = make_kernel(p.aux.coeffs);
  InitialParams ip;
  ip.P = c.sim_P;
  ip.mu = c.sim_mu;
  ip.ripple_amplitude = c.sim_amplitude;
  ip.T_run = c.sim_T;
  ip.margin = c.sim_margin;
  ip.kind = c.sim_ic == "planar"    ? InitialKind::planar
            : c.sim_ic == "rippled" ? InitialKind::rippled
                                    : InitialKind::rippled_plus_localized;
  const LatticeState s0 = build_initial(prof, p.wave.dir, p.wave.nonlin, ip);
  const auto traj = evolve(s0, c.sim_T, c.sim_dt, c.sim_sample);

  std::vector<PhaseTrace> traces;
  double t_mono = -1.0;
  for (const auto& s : traj) {
    try {
      traces.push_back(extract_phase(s, prof));
      if (t_mono < 0.0) t_mono = s.t;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoBracket && e.code() != ErrorCode::MultipleBrackets &&
          e.code() != ErrorCode::OutOfProfileRange)
        throw;
      if (t_mono >= 0.0) throw;
    }
  }
  write_file(ctx, "phase_trace.csv", phase_csv(traces), true);
  write_file(ctx, "field.csv", field_csv(traj.back()), true);

  json j = header(ctx);
  j["c_star"] = p.wave.c;
  j["window"] = {s0.n_min, s0.n_max};
  j["t_mono"] = t_mono;
  j["relaxation_time"] = relaxation_time(k, s0.l_period());
  const StabilityResult st = stability_experiment(traj, prof);
  j["t_final"] = st.t_final;
  j["mu_hat"] = st.mu_hat;
  j["deviation"] = st.deviation;
  json tracking = json::array();
  for (double tau : c.taus) {
    if (tau < t_mono || tau > c.sim_T) continue;
    const TrackingResult tr = track_vs_theta(traj, prof, tau, k, c.track_horizon);
    tracking.push_back({{"tau", tau}, {"max_error", tr.max_error}});
  }
  j["tracking"] = tracking;
  write_file(ctx, "simulate.json", j.dump(2) + "\n", false);
  std::cout << "mu_hat = " << st.mu_hat << "  deviation = " << st.deviation << '\n';
  return 0;
}

struct Check {
  std::string name;
  bool pass;
  json detail;
};

int cmd_verify(const Context& ctx) {
  const ExperimentConfig& c = ctx.cfg;
  std::vector<Check> checks;

  {
    bool ok = true;
    int count = 0;
    for (int sh = 0; sh <= 6; ++sh)
      for (int sv = 0; sv <= 6; ++sv) {
        if (std::gcd(sh, sv) != 1) continue;
        const Direction d = make_direction(sh, sv);
        int st = 0, ss = 0;
        for (int nu = 0; nu < 4; ++nu) {
          st += d.tau[nu];
          ss += d.sigma[nu];
        }
        ok = ok && st == 0 && ss == 0 && d.sigma_star_sq == sh * sh + sv * sv;
        for (long i = -3; i <= 3; ++i)
          for (long j = -3; j <= 3; ++j) {
            const SublatticePoint q = to_transverse(d, i, j);
            const auto back = is_member(d, q.n, q.l);
            ok = ok && back && back->first == i && back->second == j;
          }
        ++count;
      }
    checks.push_back({"geometry", ok, {{"directions", count}}});
  }
  {
    const double M10 = stability_margin({1.0, 0.0, 1.0}).M;
    const double err = std::abs(M10 + 4.0 / (std::numbers::pi * std::numbers::pi));
    checks.push_back({"horizontal_margin", err <= 1e-6, {{"M", M10}, {"error", err}}});
  }

  const Pipeline p = pipeline_for(c);
  const CoefficientSet& cs = p.aux.coeffs;
  checks.push_back({"wave_residual", p.wave.residual_inf <= c.tol_residual, {{"residual", p.wave.residual_inf}}});
  {
    bool sym = std::abs(fourier_symbol(cs, 0.0).f) == 0.0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 2000; ++i) worst = std::max(worst, fourier_symbol(cs, std::numbers::pi * i / 2000).f);
    checks.push_back({"symbol", sym && worst < 0.0 && cs.M_margin < 0.0, {{"M", cs.M_margin}, {"max_f", worst}}});
  }
  {
    const IdentityReport rep = identity_report(cs, p.has_family ? &p.family : nullptr);
    const double tol = c.tol_identity * (1.0 + std::abs(cs.c_star));
    checks.push_back({"speed_identity", std::abs(rep.speed) <= tol, {{"residual", rep.speed}}});
  }
  {
    const KernelSpec k = make_kernel(cs);
    double worst = 0.0;
    for (double t : {0.1, 1.0, 10.0, 100.0})
      worst = std::max(worst, std::abs(greens_function(k, t, -2000, 2000).mass - 1.0));
    checks.push_back({"greens_mass", worst <= c.tol_mass, {{"max_error", worst}}});
  }
  {
    const KernelSpec exact = make_kernel(cs);
    const KernelSpec used = kernel_with_perturbation(cs, c.ak_perturb);
    const PhaseField th0 = random_field(64, 1.0, c.seed);
    const double T = 1.0;
    const auto traj = integrate_phase(PhaseModel::ch, used, th0, T, std::min(c.dt, used.dt_max()));
    const PhaseField ex = ch_flow(exact, th0, T);
    double e = 0.0;
    for (std::size_t l = 0; l < ex.theta.size(); ++l) e = std::max(e, std::abs(ex.theta[l] - traj.back().theta[l]));
    checks.push_back({"cole_hopf", e <= c.tol_cole_hopf, {{"error", e}, {"perturbed", !c.ak_perturb.empty()}}});
  }
  if (c.reference_check) {
    json deltas = json::array();
    bool ok = c.sh == 2 && c.sv == 5;
    for (const auto& d : reference_deltas(cs)) {
      const double delta = d.computed - d.reference;
      ok = ok && std::abs(delta) <= c.tol_reference;
      deltas.push_back({{"k", d.k}, {"computed", d.computed}, {"reference", d.reference}, {"delta", delta}});
    }
    checks.push_back({"reference_table", ok, deltas});
  }

  json j = header(ctx);
  json list = json::array();
  bool all = true;
  for (const auto& ch : checks) {
    list.push_back({{"name", ch.name}, {"status", ch.pass ? "pass" : "fail"}, {"detail", ch.detail}});
    all = all && ch.pass;
    if (!ch.pass) std::cerr << "check failed: " << ch.name << '\n';
  }
  j["checks"] = list;
  j["all_pass"] = all;
  write_file(ctx, "verify.json", j.dump(2) + "\n", false);
  std::cout << j.dump(2) << '\n';
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  // The config file is read before the flags so that flags override it.
  ExperimentConfig cfg;
  try {
    for (int i = 1; i + 1 < argc; ++i)
      if (std::string(argv[i]) == "--config") cfg = load_config(argv[i + 1]);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code(e.code());
  }

  CLI::App app{"Front propagation along rational lattice directions"};
  app.footer(kColumns);
  app.fallthrough();
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");
  bool dump_config = false;
  app.add_flag("--dump-config", dump_config, "print the effective configuration and exit");
  visit_fields(cfg, [&](const char* name, auto& field) {
    auto* opt = app.add_option(std::string("--") + name, field);
    if constexpr (std::is_same_v<std::decay_t<decltype(field)>, std::vector<double>>) opt->delimiter(',');
  });

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Context&);
  };
  const Sub subs[] = {
      {"wave", "solve for the travelling wave", cmd_wave},
      {"coeffs", "auxiliary solves, a_k and curvature parameters", cmd_coeffs},
      {"scan", "stability margin over all coprime directions up to scan_max", cmd_scan},
      {"greens", "fundamental solution of the linear phase equation", cmd_greens},
      {"phase", "integrate a phase model", cmd_phase},
      {"simulate", "2D lattice simulation with phase extraction", cmd_simulate},
      {"verify", "run the verification checks", cmd_verify},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    check_config(cfg);
    if (dump_config) {
      std::cout << serialize_config(cfg);
      return 0;
    }
    for (const auto& s : subs)
      if (app.got_subcommand(s.name)) return s.run(Context{cfg, s.name});
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 19;
  }
  return 0;
}
