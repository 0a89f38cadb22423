#include "fnsc/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "fnsc/snapshot.hpp"
#include "fnsc/stationary_solver.hpp"
#include "fnsc/verify_suite.hpp"

namespace fnsc {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

json index_json(const FBParams& p) { return {{"s", num(p.s)}, {"p", num(p.p)}, {"q", num(p.q)}}; }

json gate_json(const GateReport& g) {
  return {{"u0_norm", g.u0_norm}, {"force_norm", g.force_norm}, {"epsilon", g.epsilon}, {"passed", g.passed}};
}

std::size_t step_count(const SolverConfig& s) {
  return static_cast<std::size_t>(std::ceil(s.T / s.dt - 1e-9));
}

struct Context {
  RunConfig config;
  FrequencyGrid grid;
  LPFrame frame;
  FBParams velocity;
  FBParams force;
  MeasuredConstants constants;
  SolverConfig solver;
  std::filesystem::path dir;
  std::string id;
  json manifest;
  std::ostream* log = nullptr;
  std::size_t steps = 0;
  std::vector<std::string> summary;

  Context(const RunConfig& c, std::ostream* l)
      : config(c),
        grid(c.grid()),
        frame(grid),
        velocity(c.solver.velocity_index()),
        force(c.solver.force_index()),
        solver(c.solver),
        dir(c.experiment.output_dir),
        id(run_id(c)),
        log(l) {}

  std::filesystem::path at(const std::string& file) const { return dir / file; }

  void output(const std::string& name, const std::string& file) { manifest["outputs"][name] = file; }

  void write(const std::string& name, const std::string& file, const std::string& content) {
    write_text(at(file), content);
    output(name, file);
  }

  void snapshot(const std::string& name, const std::string& file, const SpectralField& f,
                const PhysicalParams& params) {
    try {
      write_snapshot(at(file), f, SnapshotHeader{params.nu, params.alpha, params.omega});
    } catch (const SnapshotError& e) {
      throw IoError(e.what());
    }
    output(name, file);
  }

  void note(const std::string& line) const {
    if (log) *log << line << '\n' << std::flush;
  }

  void line(const std::string& key, const std::string& value) { summary.push_back(key + ": " + value); }
  void line(const std::string& key, double value) { line(key, fmt(value)); }
};

SpectralField source_field(const Context& c, const FieldSource& src, std::uint64_t seed, double amplitude,
                           const FBParams& index, BandSpec band) {
  switch (src.kind) {
    case FieldSource::Kind::zero: return SpectralField(c.grid);
    case FieldSource::Kind::snapshot: {
      if (!std::filesystem::exists(src.path)) throw IoError("snapshot " + src.path.string() + " not found");
      Snapshot s;
      try {
        s = read_snapshot(src.path);
      } catch (const SnapshotError& e) {
        throw IoError(e.what());
      }
      if (!s.field.grid().compatible(c.grid))
        throw ConfigError("snapshot " + src.path.string() + " is on a different grid");
      return s.field;
    }
    case FieldSource::Kind::generated: {
      DataRequest req;
      req.kind = src.data;
      req.seed = seed;
      req.amplitude = amplitude;
      req.band = band;
      req.mode = c.config.experiment.mode;
      req.degree = c.config.experiment.degree;
      return generate_data(req, c.grid, index, c.frame);
    }
  }
  return SpectralField(c.grid);
}

SpectralField random_direction(const Context& c, std::uint64_t seed, double amplitude, const FBParams& index) {
  if (amplitude == 0.0) return SpectralField(c.grid);
  return normalized(random_band_field(c.grid, seed, c.config.experiment.band), amplitude, index, c.frame);
}

double stationary_gate(const Context& c) {
  return c.constants.epsilon * c.solver.params.nu / *c.constants.forcing_C;
}

json run_wellposed(Context& c) {
  const auto& e = c.config.experiment;
  const double eps = c.constants.epsilon;
  const auto u0 = source_field(c, e.u0, e.seed, e.u0_scale * eps, c.velocity, e.band);
  const auto f = source_field(c, e.force, e.seed + 1000, e.force_scale * eps, c.force, e.band);
  const FieldSeries series{{0.0, f}};
  const auto gate = theorem1_gate(u0, series, c.solver);
  c.manifest["gates"]["theorem1"] = gate_json(gate);
  if (c.solver.gate && !gate.passed)
    throw GateRefusal("|u0| + |F| = " + fmt(gate.u0_norm + gate.force_norm) + " is not below epsilon = " + fmt(eps));
  c.snapshot("u0", "u0.fnsc", u0, c.solver.params);
  c.snapshot("force", "force.fnsc", f, c.solver.params);

  c.note("evolving " + std::to_string(step_count(c.solver)) + " steps");
  auto traj = evolve(u0, series, c.solver);
  c.steps += step_count(c.solver);
  traj.norms.run_id = c.id;
  c.write("norms", "norms.csv", traj.norms.to_csv());
  c.snapshot("final", "final.fnsc", traj.states.back().field, c.solver.params);

  double peak = 0.0;
  double div = 0.0;
  for (const auto& r : traj.norms.rows) {
    peak = std::max(peak, r.fb_norm_critical);
    div = std::max(div, r.divergence_residual);
  }
  const double bound = 2.0 * eps;
  c.line("max critical norm", peak);
  c.line("bound 2 epsilon", bound);
  c.line("bound held", peak <= bound + 1e-6 ? "yes" : "no");
  return {{"max_critical_norm", peak},
          {"bound", bound},
          {"bound_held", peak <= bound + 1e-6},
          {"final_critical_norm", traj.norms.rows.back().fb_norm_critical},
          {"max_divergence_residual", div},
          {"recorded_states", traj.norms.rows.size()}};
}

json run_stability(Context& c) {
  const auto& e = c.config.experiment;
  const double eps = c.constants.epsilon;
  const auto u0 = source_field(c, e.u0, e.seed, e.u0_scale * eps, c.velocity, e.band);
  const auto f = source_field(c, e.force, e.seed + 1000, e.force_scale * eps, c.force, e.band);
  const auto v0 = u0 + random_direction(c, e.seed + 2000, e.perturbation * eps, c.velocity);
  const auto g = f + random_direction(c, e.seed + 3000, e.force_mismatch * eps, c.force);
  const FieldSeries fu{{0.0, f}};
  const FieldSeries fv{{0.0, g}};
  c.snapshot("u0", "u0.fnsc", u0, c.solver.params);
  c.snapshot("v0", "v0.fnsc", v0, c.solver.params);

  c.note("evolving the pair over " + std::to_string(step_count(c.solver)) + " steps");
  StabilityReport rep;
  try {
    rep = stability_experiment(u0, v0, fu, fv, c.solver);
  } catch (const GateRefusal&) {
    c.manifest["gates"]["u"] = gate_json(theorem1_gate(u0, fu, c.solver));
    c.manifest["gates"]["v"] = gate_json(theorem1_gate(v0, fv, c.solver));
    throw;
  }
  c.steps += 2 * step_count(c.solver);
  c.manifest["gates"]["u"] = gate_json(rep.gate_u);
  c.manifest["gates"]["v"] = gate_json(rep.gate_v);
  rep.series.run_id = c.id;
  c.write("norms", "norms.csv", rep.series.to_csv());

  const double ratio = rep.initial_gap > 0.0 ? rep.final_gap / rep.initial_gap : 0.0;
  c.line("initial gap", rep.initial_gap);
  c.line("final gap", rep.final_gap);
  c.line("gap ratio", ratio);
  c.line("decay hypothesis", rep.hypothesis_holds ? "holds" : "violated");
  if (!rep.note.empty()) c.line("note", rep.note);
  return {{"initial_gap", rep.initial_gap},
          {"final_gap", rep.final_gap},
          {"gap_ratio", ratio},
          {"gap_decayed", rep.gap_decayed},
          {"linear_gap_ratio", rep.linear_gap_ratio},
          {"force_gap_ratio", rep.force_gap_ratio},
          {"hypothesis_holds", rep.hypothesis_holds},
          {"decay_asserted", rep.hypothesis_holds && rep.gap_decayed},
          {"note", rep.note}};
}

json run_stationary(Context& c) {
  const auto& e = c.config.experiment;
  const double gate = stationary_gate(c);
  const auto f = source_field(c, e.force, e.seed + 1000, e.force_scale * gate, c.force, e.band);
  const double fnorm = fb_norm(f, c.force, c.frame);
  c.manifest["gates"]["stationary"] = {{"force_norm", fnorm}, {"gate", gate}, {"passed", fnorm < gate}};
  if (c.solver.gate && !(fnorm < gate))
    throw GateRefusal("|F| = " + fmt(fnorm) + " is not below the stationary gate epsilon nu / C = " + fmt(gate));
  c.snapshot("force", "force.fnsc", f, c.solver.params);

  c.note("stationary Picard from " + std::to_string(e.n_starts) + " starts");
  const auto probe = uniqueness_probe(f, c.solver, e.n_starts, e.seed + 4000);
  const auto& sol = probe.runs.front();
  if (!sol.converged) throw NumericalDivergence("stationary Picard did not converge: " + sol.warning);

  std::ostringstream hist;
  hist << "iteration,residual\n";
  for (std::size_t k = 0; k < sol.residual_history.size(); ++k)
    hist << k + 1 << ',' << fmt(sol.residual_history[k]) << '\n';
  c.write("residuals", "residuals.csv", hist.str());
  std::ostringstream starts;
  starts << "start,iterations,residual,converged,distance_to_first\n";
  for (std::size_t k = 0; k < probe.runs.size(); ++k) {
    const auto& r = probe.runs[k];
    starts << k << ',' << r.iterations << ',' << fmt(r.residual) << ',' << (r.converged ? "true" : "false") << ','
           << fmt(fb_norm(r.u - sol.u, c.velocity, c.frame)) << '\n';
  }
  c.write("uniqueness", "uniqueness.csv", starts.str());
  c.snapshot("stationary", "stationary.fnsc", sol.u, c.solver.params);

  const std::vector<double> times{0.5, 1.0, 2.0};
  const double equivalence = verify_stationary_equivalence(sol.u, f, times, c.solver.params, c.velocity);
  c.line("residual", sol.residual);
  c.line("iterations", std::to_string(sol.iterations));
  c.line("uniqueness spread", probe.spread);
  c.line("equivalence residual", equivalence);
  return {{"converged", sol.converged},
          {"residual", sol.residual},
          {"iterations", sol.iterations},
          {"gate_held", sol.gate_held},
          {"solution_norm", fb_norm(sol.u, c.velocity, c.frame)},
          {"uniqueness_spread", probe.spread},
          {"all_starts_converged", probe.all_converged},
          {"equivalence_times", times},
          {"equivalence_residual", equivalence},
          {"warning", sol.warning}};
}

json run_converge(Context& c) {
  const auto& e = c.config.experiment;
  const double eps = c.constants.epsilon;
  const double gate = stationary_gate(c);
  const auto v0 = source_field(c, e.u0, e.seed, e.u0_scale * eps, c.velocity, e.band);
  const auto f = source_field(c, e.force, e.seed + 1000, e.force_scale * gate, c.force, e.band);
  const auto pulse = random_direction(c, e.seed + 5000, e.pulse * eps, c.force);
  const FieldSeries g{{0.0, f + pulse}, {e.pulse_end, f}};
  const double fnorm = fb_norm(f, c.force, c.frame);
  c.manifest["gates"]["stationary"] = {{"force_norm", fnorm}, {"gate", gate}, {"passed", fnorm < gate}};
  c.manifest["gates"]["theorem1"] = gate_json(theorem1_gate(v0, g, c.solver));
  if (c.solver.gate && !(fnorm < gate))
    throw GateRefusal("|F| = " + fmt(fnorm) + " is not below the stationary gate " + fmt(gate));
  c.snapshot("v0", "v0.fnsc", v0, c.solver.params);
  c.snapshot("force", "force.fnsc", f, c.solver.params);

  c.note("stationary solve, then " + std::to_string(step_count(c.solver)) + " steps");
  auto rep = converge_to_stationary_experiment(v0, g, f, c.solver);
  c.steps += step_count(c.solver);
  rep.series.run_id = c.id;
  c.write("norms", "norms.csv", rep.series.to_csv());
  c.snapshot("stationary", "stationary.fnsc", rep.stationary.u, c.solver.params);

  const double ratio = rep.initial_gap > 0.0 ? rep.final_gap / rep.initial_gap : 0.0;
  c.line("initial gap", rep.initial_gap);
  c.line("final gap", rep.final_gap);
  c.line("gap ratio", ratio);
  c.line("decay hypothesis", rep.hypothesis_holds ? "holds" : "violated");
  return {{"initial_gap", rep.initial_gap},
          {"final_gap", rep.final_gap},
          {"gap_ratio", ratio},
          {"converged", rep.converged},
          {"linear_gap_ratio", rep.linear_gap_ratio},
          {"force_gap_ratio", rep.force_gap_ratio},
          {"hypothesis_holds", rep.hypothesis_holds},
          {"stationary_residual", rep.stationary.residual}};
}

json run_omega_scan(Context& c) {
  const auto& e = c.config.experiment;
  const double eps = c.constants.epsilon;
  const double gate = stationary_gate(c);
  BandSpec band = e.band;
  band.planar = e.force_support == "planar";
  band.off_axis = e.force_support == "off_axis";
  const auto f = source_field(c, e.force, e.seed + 1000, e.force_scale * gate, c.force, band);
  const double fnorm = fb_norm(f, c.force, c.frame);
  c.manifest["gates"]["stationary"] = {{"force_norm", fnorm}, {"gate", gate}, {"passed", fnorm < gate}};
  c.snapshot("force", "force.fnsc", f, c.solver.params);

  OmegaScanOptions opts;
  opts.omega_min = e.omega_min;
  opts.omega_max = e.omega_max;
  opts.factor = e.omega_factor;
  opts.tail_shells = e.tail_shells;
  c.note("scanning rotation rates");
  const auto scan = estimate_omega_threshold(f, c.solver.params, c.force, eps, opts);
  c.write("omega_scan", "omega_scan.csv", scan.to_csv());

  double bound_ratio = 0.0;
  if (fnorm > 0.0)
    for (double x : scan.x_norms) bound_ratio = std::max(bound_ratio, x * c.solver.params.nu / fnorm);

  json out{{"force_norm", fnorm},
           {"stationary_gate", gate},
           {"force_over_gate", gate > 0.0 ? fnorm / gate : 0.0},
           {"omega_threshold", scan.omega_threshold ? json(*scan.omega_threshold) : json(nullptr)},
           {"delta", scan.delta},
           {"delta_found", scan.delta_found},
           {"outer_bound", scan.outer_bound},
           {"analytic_omega0", scan.analytic_omega0 ? json(*scan.analytic_omega0) : json(nullptr)},
           {"tail_value", scan.tail_value ? json(*scan.tail_value) : json(nullptr)},
           {"hypothesis_holds", scan.hypothesis_holds},
           {"x_norm_over_fb_bound", bound_ratio},
           {"x_norm_bound_held", bound_ratio <= 1.0}};
  c.line("omega threshold", scan.omega_threshold ? fmt(*scan.omega_threshold) : "none");
  c.line("threshold hypothesis", scan.hypothesis_holds ? "holds" : "not met for this (p, q)");
  c.line("x norm over |F|/nu, max", bound_ratio);

  if (scan.omega_threshold) {
    SolverConfig at = c.solver;
    at.params.omega = *scan.omega_threshold;
    c.note("stationary Picard at omega = " + fmt(at.params.omega));
    const auto sol = stationary_picard(f, at);
    out["stationary_at_threshold"] = {{"omega", at.params.omega},
                                      {"converged", sol.converged},
                                      {"residual", num(sol.residual)},
                                      {"iterations", sol.iterations},
                                      {"gate_held", sol.gate_held},
                                      {"warning", sol.warning}};
    c.line("stationary solve at threshold", sol.converged ? "converged" : "did not converge");
    if (sol.converged) c.snapshot("stationary", "stationary.fnsc", sol.u, at.params);
  }
  return out;
}

json run_verify(Context& c) {
  VerifyOptions opts;
  opts.micro = c.config.experiment.micro;
  opts.n = c.config.n;
  opts.seed = c.config.experiment.seed;
  const auto report = run_verify_suite(opts);
  c.note(report.table());
  c.write("checks", "checks.csv", report.to_csv());
  json checks = json::array();
  for (const auto& k : report.checks) {
    checks.push_back({{"name", k.name}, {"value", num(k.value)}, {"tolerance", k.tolerance}, {"passed", k.passed}});
    c.line(k.name, k.passed ? "PASS" : "FAIL");
  }
  return {{"all_passed", report.all_passed()}, {"checks", checks}};
}

bool needs_constants(ExperimentKind k) { return k != ExperimentKind::verify_suite; }

bool needs_forcing(ExperimentKind k) {
  return k == ExperimentKind::stationary || k == ExperimentKind::converge_to_stationary ||
         k == ExperimentKind::omega_scan;
}

json config_json(const RunConfig& c) {
  json out = json::object();
  for (const auto& e : config_entries(c)) out[e.section][e.key] = e.value;
  return out;
}

std::string summary_text(const Context& c, const std::string& status) {
  std::ostringstream os;
  os << "fnsc run " << c.id << '\n';
  os << "experiment: " << to_string(c.config.experiment.kind) << '\n';
  os << "status: " << status << '\n';
  os << "grid: n=" << c.grid.n() << " L=" << fmt(c.grid.period()) << '\n';
  os << "physics: nu=" << fmt(c.solver.params.nu) << " alpha=" << fmt(c.solver.params.alpha)
     << " omega=" << fmt(c.solver.params.omega) << '\n';
  os << "indices: velocity s=" << fmt(c.velocity.s) << " force s=" << fmt(c.force.s) << " p=" << fmt(c.velocity.p)
     << " q=" << fmt(c.velocity.q) << '\n';
  if (needs_constants(c.config.experiment.kind)) {
    os << "K: " << fmt(c.constants.K) << (c.constants.K_measured ? " (measured)" : " (configured)") << '\n';
    os << "epsilon: " << fmt(c.constants.epsilon) << '\n';
    if (c.constants.forcing_C) os << "forcing C: " << fmt(*c.constants.forcing_C) << '\n';
  }
  for (const auto& l : c.summary) os << l << '\n';
  return os.str();
}

}  // namespace

std::string run_id(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : render_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

MeasuredConstants resolve_constants(const RunConfig& config, bool need_forcing) {
  const auto t0 = Clock::now();
  const auto grid = config.grid();
  const auto& s = config.solver;
  MeasuredConstants m;
  if (config.K) {
    m.K = *config.K;
  } else {
    m.K = measure_product_constant(grid, config.constant_seed, s.params, s.velocity_index()).constant;
    m.K_measured = true;
  }
  m.epsilon = config.epsilon ? *config.epsilon : config.epsilon_fraction / (4.0 * m.K);
  ProductCorpus fields_only;
  fields_only.plane_wave_band = 0;
  m.semigroup_C =
      measure_semigroup_constant(grid, config.constant_seed, s.params, s.velocity_index(), fields_only).constant;
  if (need_forcing) {
    SolverConfig sc = s;
    m.forcing_C = measured_forcing_constant(grid, sc, config.constant_seed);
  }
  m.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return m;
}

RunOutcome run_experiment(const RunConfig& config, std::ostream* log) {
  const auto t0 = Clock::now();
  RunOutcome out;
  // Nothing can be written for a config that does not describe a grid.
  try {
    config.validate();
  } catch (const ConfigError& e) {
    out.exit_code = kExitUsage;
    out.message = e.what();
    return out;
  }
  Context c(config, log);
  auto& m = c.manifest;
  m["schema_version"] = kManifestSchemaVersion;
  m["run_id"] = c.id;
  m["experiment"] = to_string(config.experiment.kind);
  m["status"] = "running";
  m["config"] = config_json(config);
  m["grid"] = {{"n", c.grid.n()},
               {"period", c.grid.period()},
               {"dealias_fraction", c.grid.dealias_fraction()},
               {"quadrature_weight", c.grid.quadrature_weight()},
               {"j_min", c.frame.j_min()},
               {"j_max", c.frame.j_max()}};
  m["indices"] = {{"velocity", index_json(c.velocity)}, {"force", index_json(c.force)}};
  m["gates"] = json::object();
  m["outputs"] = json::object();
  m["constants"] = nullptr;
  m["results"] = nullptr;
  out.manifest_path = c.at("manifest.json");

  std::string status = "ok";
  double constants_seconds = 0.0;
  try {
    std::error_code ec;
    std::filesystem::create_directories(c.dir, ec);
    if (ec) throw IoError("cannot create " + c.dir.string() + ": " + ec.message());
    write_text(out.manifest_path, m.dump(2) + "\n");

    const auto kind = config.experiment.kind;
    if (needs_constants(kind)) {
      c.note("measuring constants");
      c.constants = resolve_constants(config, needs_forcing(kind));
      constants_seconds = c.constants.seconds;
      c.solver.K = c.constants.K;
      c.solver.epsilon = c.constants.epsilon;
      m["constants"] = {{"K", c.constants.K},
                        {"K_source", c.constants.K_measured ? "measured" : "configured"},
                        {"epsilon", c.constants.epsilon},
                        {"forcing_C", c.constants.forcing_C ? json(*c.constants.forcing_C) : json(nullptr)},
                        {"semigroup_C", c.constants.semigroup_C},
                        {"constant_seed", config.constant_seed}};
      try {
        c.solver.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    switch (kind) {
      case ExperimentKind::wellposed: m["results"] = run_wellposed(c); break;
      case ExperimentKind::stability: m["results"] = run_stability(c); break;
      case ExperimentKind::stationary: m["results"] = run_stationary(c); break;
      case ExperimentKind::converge_to_stationary: m["results"] = run_converge(c); break;
      case ExperimentKind::omega_scan: m["results"] = run_omega_scan(c); break;
      case ExperimentKind::verify_suite:
        m["results"] = run_verify(c);
        if (!m["results"]["all_passed"].get<bool>()) {
          status = "checks_failed";
          out.exit_code = kExitCheckFailed;
          out.message = "verify battery reported failures";
        }
        break;
    }
  } catch (const GateRefusal& e) {
    status = "gate_refused";
    out.exit_code = kExitGateFailed;
    out.message = e.what();
  } catch (const NumericalDivergence& e) {
    status = "diverged";
    out.exit_code = kExitDivergence;
    out.message = e.what();
  } catch (const IoError& e) {
    status = "io_error";
    out.exit_code = kExitIo;
    out.message = e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    status = "io_error";
    out.exit_code = kExitIo;
    out.message = e.what();
  } catch (const ConfigError& e) {
    status = "invalid_config";
    out.exit_code = kExitUsage;
    out.message = e.what();
  } catch (const std::invalid_argument& e) {
    status = "invalid_input";
    out.exit_code = kExitUsage;
    out.message = e.what();
  }

  const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
  m["status"] = status;
  m["exit_code"] = out.exit_code;
  m["message"] = out.message;
  if (!out.message.empty()) c.line("message", out.message);
  m["timings"] = {{"wall_seconds", wall},
                  {"constants_seconds", constants_seconds},
                  {"steps", c.steps},
                  {"seconds_per_step", c.steps ? (wall - constants_seconds) / static_cast<double>(c.steps) : 0.0}};
  if (out.exit_code != kExitIo || std::filesystem::is_directory(c.dir)) {
    try {
      write_text(c.at("summary.txt"), summary_text(c, status));
      m["outputs"]["summary"] = "summary.txt";
      m["outputs"]["manifest"] = "manifest.json";
      write_text(out.manifest_path, m.dump(2) + "\n");
    } catch (const IoError& e) {
      out.exit_code = kExitIo;
      out.message = e.what();
    }
  }
  out.manifest = m;
  return out;
}

RunOutcome run_experiment(const std::filesystem::path& config_file, std::ostream* log) {
  if (!std::filesystem::exists(config_file)) {
    RunOutcome out;
    out.exit_code = kExitIo;
    out.message = "config " + config_file.string() + " not found";
    return out;
  }
  RunConfig config;
  try {
    config = load_config(config_file);
  } catch (const ConfigError& e) {
    RunOutcome out;
    out.exit_code = kExitUsage;
    out.message = e.what();
    return out;
  }
  return run_experiment(config, log);
}

nlohmann::json read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed manifest " + path.string() + ": " + e.what());
  }
}

nlohmann::json without_timings(const nlohmann::json& manifest) {
  auto out = manifest;
  out.erase("timings");
  return out;
}

}  // namespace fnsc
