#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cavelim/classical.hpp"
#include "cavelim/config.hpp"
#include "cavelim/dipole.hpp"
#include "cavelim/elimination.hpp"
#include "cavelim/io.hpp"
#include "cavelim/model.hpp"
#include "cavelim/quantum.hpp"
#include "cavelim/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cavelim;

namespace {

std::vector<double> parse_grid(const std::string& text) {
  return parse_axis("grid=" + text).values;
}

// Load a config and run the spec diagnostics: warnings go to stderr, any
// error-severity diagnostic aborts with a config error.
SystemSpec load_validated(const std::string& path) {
  SystemSpec spec = load_system_config(path);
  bool bad = false;
  for (const auto& d : validate_spec(spec)) {
    const bool err = d.severity == Diagnostic::Severity::error;
    bad = bad || err;
    std::cerr << (err ? "error: " : "warning: ") << d.message << "\n";
  }
  if (bad) throw ConfigError(path + ": system parameters are invalid");
  return spec;
}

void emit(const fs::path& out_dir, const std::string& name,
          const std::string& contents) {
  const fs::path path = out_dir / name;
  write_file_atomic(path, contents);
  std::cout << "wrote " << path.string() << "\n";
}

void emit_manifest(const fs::path& out_dir, const std::string& sub,
                   const json& config_snapshot,
                   const std::vector<std::string>& outputs,
                   const json& extra = json::object()) {
  json m = make_manifest(sub, config_snapshot, outputs);
  for (const auto& [key, value] : extra.items()) m[key] = value;
  emit(out_dir, sub + ".manifest.json", m.dump(2) + "\n");
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::marginal: return "marginal";
    default: return "fail";
  }
}

json validity_json(const ValidityReport& r) {
  json eigs = json::array();
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i)
    eigs.push_back({{"re", r.eigenvalues(i).real()},
                    {"im", r.eigenvalues(i).imag()}});
  json out{{"verdict", verdict_name(r.verdict)},
           {"max_coupling_ratio", r.max_coupling_ratio},
           {"cavity_scale_ratio", r.cavity_scale_ratio},
           {"emitter_scale_ratio", r.emitter_scale_ratio},
           {"coupling_scale_ratio", r.coupling_scale_ratio},
           {"min_eigenvalue_magnitude", r.min_eigenvalue_magnitude},
           {"eigenvalues", eigs},
           {"degraded", r.degraded},
           {"n_bar", r.n_bar},
           {"pass_threshold", r.pass_threshold},
           {"marginal_threshold", r.marginal_threshold}};
  if (r.retardation_ratio) out["retardation_ratio"] = *r.retardation_ratio;
  if (r.single)
    out["single_emitter"] = {{"dipole_ratio", r.single->dipole},
                             {"cavity_ratio", r.single->cavity}};
  return out;
}

json effective_json(const EffectiveParams& p) {
  return json{{"delta_c_eff", p.delta_c_eff},
              {"delta_a_eff", p.delta_a_eff},
              {"g_a_eff", p.g_a_eff},
              {"kappa_eff", p.kappa_eff},
              {"gamma_a_eff", p.gamma_a_eff},
              {"mu", p.mu},
              {"omega_c_eff", p.omega_c_eff},
              {"omega_a_eff", p.omega_a_eff}};
}

double worst_ratio(const ValidityReport& r) {
  return std::max({r.max_coupling_ratio, r.cavity_scale_ratio,
                   r.emitter_scale_ratio, r.coupling_scale_ratio});
}

int run_eliminate(const std::string& config, const fs::path& out_dir,
                  bool strict, double n_bar) {
  const SystemSpec spec = load_validated(config);
  const CouplingSet cs = build_couplings(spec);
  const EffectiveParams p = effective_params(cs, spec);
  ValidityOptions vopt;
  vopt.n_bar = n_bar;
  const ValidityReport report = validity_report(spec, cs, vopt);
  const DissipatorModes modes = diagonalize_dissipator(p);

  json out;
  out["manifest"] = "eliminate.manifest.json";
  out["effective"] = effective_json(p);
  out["dissipator_modes"] = {{"gamma_plus", modes.gamma_plus},
                             {"gamma_minus", modes.gamma_minus},
                             {"alpha", modes.alpha}};
  out["validity"] = validity_json(report);
  if (cs.size() == 1) {
    const CouplingModification cm = coupling_modification(spec, cs);
    out["coupling_modification"] = {{"delta_g_a", cm.delta_g_a},
                                    {"coherent", cm.coherent},
                                    {"dissipative", cm.dissipative}};
    if (spec.ensemble_b.gamma > 0.0) {
      const LinewidthModification lm = linewidth_modification(spec, cs);
      out["linewidth_modification"] = {{"delta_kappa", lm.delta_kappa},
                                       {"delta_gamma_a", lm.delta_gamma_a},
                                       {"broadening", lm.broadening},
                                       {"narrowing", lm.narrowing}};
    }
  }
  const double scale =
      std::max({1.0, std::abs(p.omega_a_eff), std::abs(p.omega_c_eff)});
  if (std::abs(p.omega_a_eff - p.omega_c_eff) <= 1e-8 * scale) {
    const PolaritonAnalysis pol = polariton_analysis(p);
    out["polariton"] = {{"gamma_plus", pol.gamma_plus},
                        {"gamma_minus", pol.gamma_minus},
                        {"omega_plus", pol.omega_plus},
                        {"omega_minus", pol.omega_minus},
                        {"z_plus", {pol.z_plus.real(), pol.z_plus.imag()}},
                        {"z_minus", {pol.z_minus.real(), pol.z_minus.imag()}},
                        {"omega0_eff", pol.omega0_eff}};
  }

  emit(out_dir, "eliminate.json", out.dump(2) + "\n");
  emit_manifest(out_dir, "eliminate", system_spec_json(spec),
                {"eliminate.json"});

  std::cout << "g_a_eff = " << format_double(p.g_a_eff)
            << "  kappa_eff = " << format_double(p.kappa_eff)
            << "  gamma_a_eff = " << format_double(p.gamma_a_eff)
            << "  mu = " << format_double(p.mu) << "\n"
            << "validity: " << verdict_name(report.verdict)
            << " (worst ratio " << format_double(worst_ratio(report)) << ")\n";
  if (report.verdict != Verdict::pass) {
    std::cerr << "warning: elimination validity verdict is "
              << verdict_name(report.verdict) << "\n";
    if (strict) return 2;
  }
  return 0;
}

int run_spectrum(const std::string& config, const fs::path& out_dir,
                 double eta, const std::string& grid_text,
                 const std::string& mode) {
  const SystemSpec spec = load_validated(config);
  const CouplingSet cs = build_couplings(spec);
  const std::vector<double> offsets = parse_grid(grid_text);
  std::vector<double> grid;
  grid.reserve(offsets.size());
  for (double o : offsets) grid.push_back(spec.emitter_a.omega + o);

  Spectrum s;
  if (mode == "full") {
    s = transmission_spectrum_exact_frame(spec, cs, eta, grid);
  } else {
    const EffectiveParams p = effective_params(cs, spec);
    s = transmission_spectrum(
        p, spec.cavity.kappa, eta, grid,
        mode == "polariton" ? SpectrumMode::polariton : SpectrumMode::exact);
  }

  Table table;
  table.columns = {"omega_l", "t_c"};
  for (std::size_t i = 0; i < offsets.size(); ++i)
    table.add_numeric_row({offsets[i], s.t_c[i]});
  emit(out_dir, "spectrum.csv",
       table.to_csv({"manifest: spectrum.manifest.json",
                     "omega_l: laser offset from emitter A's frequency"}));
  emit_manifest(out_dir, "spectrum", system_spec_json(spec), {"spectrum.csv"},
                json{{"eta", eta}, {"grid", grid_text}, {"mode", mode}});
  return 0;
}

int run_dynamics(const std::string& config, const fs::path& out_dir,
                 const std::string& model_kind, const std::string& initial,
                 double alpha_re, double alpha_im, int n_max, int cap,
                 double t_end, double dt, int samples, double eta,
                 double omega_l_offset) {
  const SystemSpec spec = load_validated(config);
  const CouplingSet cs = build_couplings(spec);
  std::optional<DriveSpec> drive;
  if (eta != 0.0)
    drive = DriveSpec{eta, spec.emitter_a.omega + omega_l_offset};

  HilbertSpec h{n_max, 0, cap};
  LindbladModel model;
  if (model_kind == "full") {
    h.n_spins_b = cs.size();
    model = build_full_model(spec, cs, h, drive);
  } else {
    model = build_effective_model(effective_params(cs, spec), n_max, drive,
                                  cap);
  }

  Mat rho0;
  if (initial == "vacuum") rho0 = vacuum_state(h);
  else if (initial == "a-excited") rho0 = a_excited_state(h);
  else if (initial == "a-superposition") rho0 = a_superposition_state(h);
  else rho0 = coherent_state(h, cplx(alpha_re, alpha_im));

  EvolveOptions opts;
  opts.t_end = t_end;
  opts.dt = dt;
  opts.n_samples = samples;
  const QuantumTrajectory traj = evolve(model, rho0, opts);

  Table table;
  table.columns = {"t",   "re_a",     "im_a", "re_sigma_a", "im_sigma_a",
                   "n_photon", "p_a", "p_b",  "trace"};
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    table.add_numeric_row({traj.times[i], traj.a_amp[i].real(),
                           traj.a_amp[i].imag(), traj.sigma_a_amp[i].real(),
                           traj.sigma_a_amp[i].imag(),
                           traj.photon_population[i], traj.a_population[i],
                           traj.b_population[i], traj.trace[i]});
  emit(out_dir, "dynamics.csv",
       table.to_csv({"manifest: dynamics.manifest.json"}));
  emit_manifest(out_dir, "dynamics", system_spec_json(spec), {"dynamics.csv"},
                json{{"model", model_kind},
                     {"initial", initial},
                     {"t_end", t_end},
                     {"eta", eta},
                     {"n_max", n_max}});
  return 0;
}

int run_validate(const std::string& config, const fs::path& out_dir,
                 bool strict, double n_bar) {
  const SystemSpec spec = load_system_config(config);
  json out;
  out["manifest"] = "validate.manifest.json";
  json diags = json::array();
  bool has_error = false;
  for (const auto& d : validate_spec(spec)) {
    const bool err = d.severity == Diagnostic::Severity::error;
    has_error = has_error || err;
    std::cerr << (err ? "error: " : "warning: ") << d.message << "\n";
    diags.push_back(
        {{"severity", err ? "error" : "warning"}, {"message", d.message}});
  }
  out["diagnostics"] = diags;

  int code = 0;
  if (has_error) {
    out["validity"] = nullptr;
    code = 1;
  } else {
    const CouplingSet cs = build_couplings(spec);
    ValidityOptions vopt;
    vopt.n_bar = n_bar;
    const ValidityReport report = validity_report(spec, cs, vopt);
    out["validity"] = validity_json(report);
    std::cout << "validity: " << verdict_name(report.verdict)
              << " (worst ratio " << format_double(worst_ratio(report))
              << ")\n";
    if (strict && report.verdict != Verdict::pass) code = 2;
  }
  emit(out_dir, "validate.json", out.dump(2) + "\n");
  emit_manifest(out_dir, "validate", system_spec_json(spec),
                {"validate.json"});
  return code;
}

int run_sweep(const std::string& config, const fs::path& out_dir,
              const std::vector<std::string>& axis_texts,
              const std::string& outputs_text, int threads, long max_points) {
  SweepRequest req;
  for (const auto& text : axis_texts) req.axes.push_back(parse_axis(text));
  req.threads = threads;
  req.max_points = max_points;

  std::size_t n_pol = 0;
  for (const auto& axis : req.axes)
    if (axis.path.rfind("polariton.", 0) == 0) ++n_pol;
  if (n_pol > 0 && n_pol != req.axes.size())
    throw ConfigError("cannot mix polariton.* axes with system axes");

  SweepOutcome outcome;
  json snapshot;
  if (n_pol == req.axes.size() && n_pol > 0) {
    outcome = run_polariton_sweep(req);
    snapshot = json{{"axes", axis_texts}};
  } else {
    if (config.empty())
      throw ConfigError("--config is required for system-parameter sweeps");
    const SystemSpec spec = load_validated(config);
    req.outputs.clear();
    std::string item;
    std::istringstream ss(outputs_text);
    while (std::getline(ss, item, ','))
      if (!item.empty()) req.outputs.push_back(item);
    outcome = run_spec_sweep(spec, req);
    snapshot = system_spec_json(spec);
  }

  emit(out_dir, "sweep.csv",
       outcome.table.to_csv({"manifest: sweep.manifest.json"}));
  emit_manifest(out_dir, "sweep", snapshot, {"sweep.csv"},
                json{{"axes", axis_texts},
                     {"points", outcome.status.size()},
                     {"failures", outcome.failures},
                     {"status", outcome.status}});
  if (outcome.failures > 0)
    std::cerr << "warning: " << outcome.failures
              << " grid point(s) failed; see the manifest status list\n";
  return 0;
}

int run_dipole_map(const fs::path& out_dir, const std::string& theta_text,
                   const std::string& xi_text, bool raw) {
  const std::vector<double> thetas = parse_grid(theta_text);
  const std::vector<double> xis = parse_grid(xi_text);
  const CouplingMap map = coupling_map(thetas, xis, 1.0, 1.0);

  Table table;
  table.columns = {"theta", "xi", "g", "f"};
  for (std::size_t i = 0; i < thetas.size(); ++i)
    for (std::size_t j = 0; j < xis.size(); ++j) {
      double g = map.g(static_cast<Eigen::Index>(i),
                       static_cast<Eigen::Index>(j));
      if (!raw) g = std::clamp(g, -2.0, 2.0);
      table.add_numeric_row({thetas[i], xis[j], g,
                             map.f(static_cast<Eigen::Index>(i),
                                   static_cast<Eigen::Index>(j))});
    }

  std::vector<std::string> comments = {"manifest: dipole-map.manifest.json"};
  if (!raw)
    comments.push_back("g clamped to [-2, 2] for plotting; --raw disables");
  emit(out_dir, "dipole_map.csv", table.to_csv(comments));
  emit_manifest(out_dir, "dipole-map",
                json{{"theta_grid", theta_text}, {"xi_grid", xi_text}},
                {"dipole_map.csv"}, json{{"raw", raw}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cavelim: effective cavity-emitter models after eliminating a fast "
      "emitter ensemble"};
  app.set_version_flag("--version", CAVELIM_VERSION);
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  bool strict = false;
  double n_bar = 1.0;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("-c,--config", config,
                                "system description file");
    if (config_required) opt->required();
    sub->add_option("-o,--out-dir", out_dir, "output directory");
    return sub;
  };

  auto* elim = add_common(
      app.add_subcommand("eliminate",
                         "compute effective subsystem parameters"),
      true);
  elim->add_flag("--strict", strict, "exit 2 unless validity verdict is pass");
  elim->add_option("--n-bar", n_bar, "photon-number scale for validity");

  std::string grid_text;
  double eta = 1e-3;
  std::string mode = "exact";
  auto* spect = add_common(
      app.add_subcommand("spectrum", "driven transmission spectrum"), true);
  spect->add_option("--grid", grid_text,
                    "laser offsets from emitter A's frequency, min:max:count "
                    "or v1,v2,...")
      ->required();
  spect->add_option("--eta", eta, "drive amplitude");
  spect->add_option("--mode", mode, "exact | polariton | full")
      ->check(CLI::IsMember({"exact", "polariton", "full"}));

  std::string model_kind = "full";
  std::string initial = "a-excited";
  double alpha_re = 0.2, alpha_im = 0.0;
  int n_max = 1, cap = 256, samples = 201;
  double t_end = 20.0, dt = 0.0, omega_l_offset = 0.0;
  double dyn_eta = 0.0;
  auto* dyn = add_common(
      app.add_subcommand("dynamics", "master-equation time evolution"), true);
  dyn->add_option("--model", model_kind, "full | effective")
      ->check(CLI::IsMember({"full", "effective"}));
  dyn->add_option("--initial", initial,
                  "vacuum | a-excited | a-superposition | coherent")
      ->check(CLI::IsMember(
          {"vacuum", "a-excited", "a-superposition", "coherent"}));
  dyn->add_option("--alpha-re", alpha_re, "coherent amplitude, real part");
  dyn->add_option("--alpha-im", alpha_im, "coherent amplitude, imag part");
  dyn->add_option("--n-max", n_max, "photon-number truncation");
  dyn->add_option("--cap", cap, "Hilbert-space dimension cap");
  dyn->add_option("--t-end", t_end, "evolution time");
  dyn->add_option("--dt", dt, "integrator step (0: automatic)");
  dyn->add_option("--samples", samples, "number of recorded samples");
  dyn->add_option("--eta", dyn_eta, "drive amplitude (0: undriven)");
  dyn->add_option("--omega-l", omega_l_offset,
                  "laser offset from emitter A's frequency");

  auto* val = add_common(
      app.add_subcommand("validate",
                         "spec diagnostics and elimination validity"),
      true);
  val->add_flag("--strict", strict, "exit 2 unless validity verdict is pass");
  val->add_option("--n-bar", n_bar, "photon-number scale for validity");

  std::vector<std::string> axis_texts;
  std::string outputs_text = "effective,validity";
  int threads = 0;
  long max_points = 200000;
  auto* swp = add_common(
      app.add_subcommand("sweep", "parallel parameter-grid evaluation"),
      false);
  swp->add_option("--axis", axis_texts,
                  "axis as path=min:max:count or path=v1,v2,... "
                  "(repeatable; polariton.* axes skip the config)")
      ->required();
  swp->add_option("--outputs", outputs_text,
                  "comma list: effective, validity, polariton");
  swp->add_option("-j,--threads", threads,
                  "worker threads (0: CAVELIM_THREADS or hardware)");
  swp->add_option("--max-points", max_points, "grid-size cap");

  std::string theta_text = "0:3.141592653589793:181";
  std::string xi_text = "0.6283185307179586:6.283185307179586:32";
  bool raw = false;
  auto* dmap = app.add_subcommand(
      "dipole-map", "dipole coupling g, f over an angle-distance grid");
  dmap->add_option("-o,--out-dir", out_dir, "output directory");
  dmap->add_option("--theta-grid", theta_text, "polar angles, min:max:count");
  dmap->add_option("--xi-grid", xi_text,
                   "scaled separations k*r, min:max:count");
  dmap->add_flag("--raw", raw, "do not clamp g to [-2, 2]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const fs::path out(out_dir);
    if (elim->parsed()) return run_eliminate(config, out, strict, n_bar);
    if (spect->parsed())
      return run_spectrum(config, out, eta, grid_text, mode);
    if (dyn->parsed())
      return run_dynamics(config, out, model_kind, initial, alpha_re,
                          alpha_im, n_max, cap, t_end, dt, samples, dyn_eta,
                          omega_l_offset);
    if (val->parsed()) return run_validate(config, out, strict, n_bar);
    if (swp->parsed())
      return run_sweep(config, out, axis_texts, outputs_text, threads,
                       max_points);
    if (dmap->parsed()) return run_dipole_map(out, theta_text, xi_text, raw);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
