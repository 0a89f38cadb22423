#include "fnsc/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

namespace fnsc {
namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double to_double(const std::string& key, const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + text + "'");
}

long long to_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected an integer, got '" + text + "'");
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
  const long long v = to_int(key, text);
  if (v < 0) throw ConfigError(key + ": must be non-negative");
  return static_cast<std::uint64_t>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::optional<double> to_auto_double(const std::string& key, const std::string& text) {
  if (text == "auto") return std::nullopt;
  return to_double(key, text);
}

struct Key {
  std::string section;
  std::string name;
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::vector<Key> build_keys() {
  std::vector<Key> k;
  auto add = [&](std::string s, std::string n, std::string h, auto set, auto get) {
    k.push_back({std::move(s), std::move(n), std::move(h), set, get});
  };
  using C = RunConfig;
  using S = const std::string&;

  add("grid", "n", "points per side (even, >= 8)",
      [](C& c, S v) { c.n = to_uint("grid.n", v); }, [](const C& c) { return std::to_string(c.n); });
  add("grid", "period", "box side L",
      [](C& c, S v) { c.period = to_double("grid.period", v); }, [](const C& c) { return fmt(c.period); });
  add("grid", "dealias_fraction", "kept fraction of n/2 per axis after products",
      [](C& c, S v) { c.dealias_fraction = to_double("grid.dealias_fraction", v); },
      [](const C& c) { return fmt(c.dealias_fraction); });

  add("physics", "nu", "viscosity",
      [](C& c, S v) { c.solver.params.nu = to_double("physics.nu", v); },
      [](const C& c) { return fmt(c.solver.params.nu); });
  add("physics", "alpha", "dissipation order, in (1/2, alpha_upper(p))",
      [](C& c, S v) { c.solver.params.alpha = to_double("physics.alpha", v); },
      [](const C& c) { return fmt(c.solver.params.alpha); });
  add("physics", "omega", "rotation rate",
      [](C& c, S v) { c.solver.params.omega = to_double("physics.omega", v); },
      [](const C& c) { return fmt(c.solver.params.omega); });

  add("norm", "p", "Lebesgue exponent in frequency (inf allowed)",
      [](C& c, S v) { c.solver.p = to_double("norm.p", v); }, [](const C& c) { return fmt(c.solver.p); });
  add("norm", "q", "shell summation exponent (inf allowed)",
      [](C& c, S v) { c.solver.q = to_double("norm.q", v); }, [](const C& c) { return fmt(c.solver.q); });

  add("solver", "dt", "ETD1 step",
      [](C& c, S v) { c.solver.dt = to_double("solver.dt", v); }, [](const C& c) { return fmt(c.solver.dt); });
  add("solver", "T", "horizon",
      [](C& c, S v) { c.solver.T = to_double("solver.T", v); }, [](const C& c) { return fmt(c.solver.T); });
  add("solver", "picard_tol", "relative Picard stopping tolerance",
      [](C& c, S v) { c.solver.picard_tol = to_double("solver.picard_tol", v); },
      [](const C& c) { return fmt(c.solver.picard_tol); });
  add("solver", "picard_max_iter", "Picard iteration cap",
      [](C& c, S v) { c.solver.picard_max_iter = static_cast<int>(to_int("solver.picard_max_iter", v)); },
      [](const C& c) { return std::to_string(c.solver.picard_max_iter); });
  add("solver", "record_every", "steps between recorded states",
      [](C& c, S v) { c.solver.record_every = static_cast<int>(to_int("solver.record_every", v)); },
      [](const C& c) { return std::to_string(c.solver.record_every); });
  add("solver", "reproject_every", "steps between Leray re-projections (0 = never)",
      [](C& c, S v) { c.solver.reproject_every = static_cast<int>(to_int("solver.reproject_every", v)); },
      [](const C& c) { return std::to_string(c.solver.reproject_every); });
  add("solver", "nonlinear", "keep the quadratic term",
      [](C& c, S v) { c.solver.nonlinear = to_bool("solver.nonlinear", v); },
      [](const C& c) { return std::string(c.solver.nonlinear ? "true" : "false"); });
  add("solver", "gate", "refuse data that fail the smallness gate",
      [](C& c, S v) { c.solver.gate = to_bool("solver.gate", v); },
      [](const C& c) { return std::string(c.solver.gate ? "true" : "false"); });
  add("solver", "K", "bilinear constant, or auto to measure it",
      [](C& c, S v) { c.K = to_auto_double("solver.K", v); },
      [](const C& c) { return c.K ? fmt(*c.K) : std::string("auto"); });
  add("solver", "epsilon", "smallness threshold, or auto for epsilon_fraction/(4K)",
      [](C& c, S v) { c.epsilon = to_auto_double("solver.epsilon", v); },
      [](const C& c) { return c.epsilon ? fmt(*c.epsilon) : std::string("auto"); });
  add("solver", "epsilon_fraction", "epsilon = fraction/(4K) when epsilon is auto",
      [](C& c, S v) { c.epsilon_fraction = to_double("solver.epsilon_fraction", v); },
      [](const C& c) { return fmt(c.epsilon_fraction); });
  add("solver", "constant_seed", "seed of the corpus that measures K and C",
      [](C& c, S v) { c.constant_seed = to_uint("solver.constant_seed", v); },
      [](const C& c) { return std::to_string(c.constant_seed); });

  using E = ExperimentConfig;
  auto ex = [&](std::string n, std::string h, std::function<void(E&, S)> set,
                std::function<std::string(const E&)> get) {
    add("experiment", n, h, [set](C& c, S v) { set(c.experiment, v); },
        [get](const C& c) { return get(c.experiment); });
  };
  ex("kind", "wellposed | stability | stationary | converge_to_stationary | omega_scan | verify_suite",
     [](E& e, S v) { e.kind = parse_experiment_kind(v); }, [](const E& e) { return to_string(e.kind); });
  ex("seed", "data seed", [](E& e, S v) { e.seed = to_uint("experiment.seed", v); },
     [](const E& e) { return std::to_string(e.seed); });
  ex("output_dir", "artifact directory", [](E& e, S v) { e.output_dir = v; },
     [](const E& e) { return e.output_dir.string(); });
  ex("u0", "zero | <data kind> | snapshot:<path>", [](E& e, S v) { e.u0 = FieldSource::parse(v); },
     [](const E& e) { return e.u0.to_string(); });
  ex("force", "zero | <data kind> | snapshot:<path>", [](E& e, S v) { e.force = FieldSource::parse(v); },
     [](const E& e) { return e.force.to_string(); });
  ex("u0_scale", "critical norm of u0 over the reference amplitude",
     [](E& e, S v) { e.u0_scale = to_double("experiment.u0_scale", v); },
     [](const E& e) { return fmt(e.u0_scale); });
  ex("force_scale", "critical norm of F over the reference amplitude",
     [](E& e, S v) { e.force_scale = to_double("experiment.force_scale", v); },
     [](const E& e) { return fmt(e.force_scale); });
  ex("band_min", "smallest max_i |k_i| of random_band data",
     [](E& e, S v) { e.band.min_mode = static_cast<int>(to_int("experiment.band_min", v)); },
     [](const E& e) { return std::to_string(e.band.min_mode); });
  ex("band_max", "largest max_i |k_i| of random_band data",
     [](E& e, S v) { e.band.max_mode = static_cast<int>(to_int("experiment.band_max", v)); },
     [](const E& e) { return std::to_string(e.band.max_mode); });
  ex("band_slope", "random_band amplitude profile |xi|^-slope",
     [](E& e, S v) { e.band.slope = to_double("experiment.band_slope", v); },
     [](const E& e) { return fmt(e.band.slope); });
  ex("mode", "single_mode lattice mode as k1,k2,k3",
     [](E& e, S v) {
       std::array<int, 3> m{};
       std::istringstream is(v);
       std::string part;
       for (int c = 0; c < 3; ++c) {
         if (!std::getline(is, part, ',')) throw ConfigError("experiment.mode: expected k1,k2,k3");
         m[static_cast<std::size_t>(c)] = static_cast<int>(to_int("experiment.mode", part));
       }
       if (std::getline(is, part)) throw ConfigError("experiment.mode: expected k1,k2,k3");
       e.mode = m;
     },
     [](const E& e) {
       return std::to_string(e.mode[0]) + "," + std::to_string(e.mode[1]) + "," + std::to_string(e.mode[2]);
     });
  ex("degree", "homogeneous_like decay degree",
     [](E& e, S v) { e.degree = to_double("experiment.degree", v); }, [](const E& e) { return fmt(e.degree); });
  ex("perturbation", "stability: |v0 - u0| over epsilon",
     [](E& e, S v) { e.perturbation = to_double("experiment.perturbation", v); },
     [](const E& e) { return fmt(e.perturbation); });
  ex("force_mismatch", "stability: persistent |G - F| over epsilon",
     [](E& e, S v) { e.force_mismatch = to_double("experiment.force_mismatch", v); },
     [](const E& e) { return fmt(e.force_mismatch); });
  ex("pulse", "converge_to_stationary: |G - F| before pulse_end, over epsilon",
     [](E& e, S v) { e.pulse = to_double("experiment.pulse", v); }, [](const E& e) { return fmt(e.pulse); });
  ex("pulse_end", "converge_to_stationary: time after which G = F",
     [](E& e, S v) { e.pulse_end = to_double("experiment.pulse_end", v); },
     [](const E& e) { return fmt(e.pulse_end); });
  ex("n_starts", "stationary: uniqueness probe starts",
     [](E& e, S v) { e.n_starts = to_uint("experiment.n_starts", v); },
     [](const E& e) { return std::to_string(e.n_starts); });
  ex("force_support", "omega_scan: off_axis | planar | full",
     [](E& e, S v) {
       if (v != "off_axis" && v != "planar" && v != "full")
         throw ConfigError("experiment.force_support: expected off_axis, planar or full");
       e.force_support = v;
     },
     [](const E& e) { return e.force_support; });
  ex("omega_min", "omega_scan: first rotation rate",
     [](E& e, S v) { e.omega_min = to_double("experiment.omega_min", v); },
     [](const E& e) { return fmt(e.omega_min); });
  ex("omega_max", "omega_scan: last rotation rate",
     [](E& e, S v) { e.omega_max = to_double("experiment.omega_max", v); },
     [](const E& e) { return fmt(e.omega_max); });
  ex("omega_factor", "omega_scan: geometric ratio",
     [](E& e, S v) { e.omega_factor = to_double("experiment.omega_factor", v); },
     [](const E& e) { return fmt(e.omega_factor); });
  ex("tail_shells", "omega_scan: J of the q = inf tail check",
     [](E& e, S v) { e.tail_shells = static_cast<int>(to_int("experiment.tail_shells", v)); },
     [](const E& e) { return std::to_string(e.tail_shells); });
  ex("micro", "verify_suite: n = 8 brute-force oracles",
     [](E& e, S v) { e.micro = to_bool("experiment.micro", v); },
     [](const E& e) { return std::string(e.micro ? "true" : "false"); });
  return k;
}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = build_keys();
  return k;
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  static const std::map<std::string, ExperimentKind> m{
      {"wellposed", ExperimentKind::wellposed},
      {"stability", ExperimentKind::stability},
      {"stationary", ExperimentKind::stationary},
      {"converge_to_stationary", ExperimentKind::converge_to_stationary},
      {"omega_scan", ExperimentKind::omega_scan},
      {"verify_suite", ExperimentKind::verify_suite}};
  const auto it = m.find(name);
  if (it == m.end()) throw ConfigError("unknown experiment kind '" + name + "'");
  return it->second;
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::wellposed: return "wellposed";
    case ExperimentKind::stability: return "stability";
    case ExperimentKind::stationary: return "stationary";
    case ExperimentKind::converge_to_stationary: return "converge_to_stationary";
    case ExperimentKind::omega_scan: return "omega_scan";
    case ExperimentKind::verify_suite: return "verify_suite";
  }
  return "unknown";
}

FieldSource FieldSource::parse(const std::string& text) {
  FieldSource s;
  if (text == "zero") return s;
  const std::string prefix = "snapshot:";
  if (text.rfind(prefix, 0) == 0) {
    s.kind = Kind::snapshot;
    s.path = text.substr(prefix.size());
    if (s.path.empty()) throw ConfigError("snapshot source needs a path");
    return s;
  }
  s.kind = Kind::generated;
  try {
    s.data = parse_data_kind(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

std::string FieldSource::to_string() const {
  switch (kind) {
    case Kind::zero: return "zero";
    case Kind::generated: return fnsc::to_string(data);
    case Kind::snapshot: return "snapshot:" + path.string();
  }
  return "zero";
}

void RunConfig::validate() const {
  if (n < 8 || n % 2 != 0) throw ConfigError("grid.n must be even and at least 8");
  if (!(period > 0.0)) throw ConfigError("grid.period must be positive");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw ConfigError("grid.dealias_fraction must lie in (0, 1]");
  if (K && !(*K > 0.0)) throw ConfigError("solver.K must be positive");
  if (epsilon && !(*epsilon > 0.0)) throw ConfigError("solver.epsilon must be positive");
  if (!(epsilon_fraction > 0.0 && epsilon_fraction < 1.0))
    throw ConfigError("solver.epsilon_fraction must lie in (0, 1)");
  const auto& e = experiment;
  if (e.u0_scale < 0.0 || e.force_scale < 0.0 || e.perturbation < 0.0 || e.force_mismatch < 0.0 ||
      e.pulse < 0.0)
    throw ConfigError("experiment amplitudes must be non-negative");
  if (e.kind == ExperimentKind::stationary && e.n_starts < 1)
    throw ConfigError("experiment.n_starts must be at least 1");
  if (!(e.omega_min > 0.0) || e.omega_max < e.omega_min || !(e.omega_factor > 1.0))
    throw ConfigError("experiment omega range must satisfy 0 < omega_min <= omega_max, factor > 1");
  // Everything the solver checks except the gate, which needs K first.
  SolverConfig s = solver;
  s.gate = false;
  try {
    s.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
}

RunConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' outside any section");
    for (const auto& [name, value] : body) {
      const auto it = std::find_if(keys().begin(), keys().end(),
                                   [&](const Key& k) { return k.section == section && k.name == name; });
      if (it == keys().end()) throw ConfigError("unknown key " + section + "." + name);
      std::string v = value.data();
      v.erase(0, v.find_first_not_of(" \t\""));
      v.erase(v.find_last_not_of(" \t\"") + 1);
      it->set(c, v);
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string render_config(const RunConfig& config) {
  std::ostringstream os;
  std::string current;
  for (const auto& k : keys()) {
    if (k.section != current) {
      if (!current.empty()) os << '\n';
      os << '[' << k.section << "]\n";
      current = k.section;
    }
    os << k.name << " = " << k.get(config) << '\n';
  }
  return os.str();
}

std::vector<ConfigEntry> config_entries(const RunConfig& config) {
  std::vector<ConfigEntry> out;
  for (const auto& k : keys()) out.push_back({k.section, k.name, k.get(config)});
  return out;
}

std::string config_reference() {
  const RunConfig defaults;
  std::ostringstream os;
  std::string current;
  for (const auto& k : keys()) {
    if (k.section != current) {
      if (!current.empty()) os << '\n';
      os << '[' << k.section << "]\n";
      current = k.section;
    }
    os << "; " << k.help << '\n' << k.name << " = " << k.get(defaults) << '\n';
  }
  return os.str();
}

}  // namespace fnsc
