#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fnsc/data_gen.hpp"
#include "fnsc/frequency_grid.hpp"
#include "fnsc/mild_solver.hpp"

namespace fnsc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { wellposed, stability, stationary, converge_to_stationary, omega_scan, verify_suite };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

/// Where an initial velocity or a force comes from.
struct FieldSource {
  enum class Kind { zero, generated, snapshot };
  Kind kind = Kind::zero;
  DataKind data = DataKind::random_band;
  std::filesystem::path path;  ///< snapshot only

  /// "zero", a DataKind name, or "snapshot:<path>".
  static FieldSource parse(const std::string& text);
  std::string to_string() const;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::wellposed;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";

  FieldSource u0{FieldSource::Kind::generated, DataKind::random_band, {}};
  FieldSource force{FieldSource::Kind::generated, DataKind::random_band, {}};
  /// Multiples of the reference amplitude: ε for the evolution experiments,
  /// the stationary gate εν/C for stationary and omega_scan.
  double u0_scale = 0.6;
  double force_scale = 0.3;
  BandSpec band{};
  std::array<int, 3> mode{1, 0, 0};
  double degree = 2.0;

  double perturbation = 0.1;    ///< stability: ‖v0 - u0‖ as a multiple of ε
  double force_mismatch = 0.0;  ///< stability: persistent ‖G - F‖ as a multiple of ε
  double pulse = 0.05;          ///< converge_to_stationary: ‖G - F‖ on [0, pulse_end) over ε
  double pulse_end = 1.0;
  std::size_t n_starts = 8;     ///< stationary uniqueness probe
  std::string force_support = "off_axis";  ///< omega_scan: off_axis | planar | full
  double omega_min = 1.0;
  double omega_max = 1048576.0;
  double omega_factor = 2.0;
  int tail_shells = 2;
  bool micro = false;           ///< verify_suite: n = 8 brute-force oracles
};

/// Everything a run needs. K and ε default to measured values: K from the
/// product corpus at `constant_seed`, ε = epsilon_fraction / (4K).
struct RunConfig {
  std::size_t n = 32;
  double period = kTwoPi;
  double dealias_fraction = 2.0 / 3.0;
  SolverConfig solver{};
  std::optional<double> K;
  std::optional<double> epsilon;
  double epsilon_fraction = 0.9;
  std::uint64_t constant_seed = 7;
  ExperimentConfig experiment{};

  FrequencyGrid grid() const { return FrequencyGrid(n, period, dealias_fraction); }
  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Parses an INI file with sections [grid], [physics], [solver], [norm] and
/// [experiment]. Unknown keys are rejected. Throws ConfigError on syntax or
/// value errors and when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

/// Canonical INI rendering of every field; parse_config(render_config(c))
/// reproduces c.
std::string render_config(const RunConfig& config);

struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
};

/// Every key of `config` in canonical order, values rendered as in the INI.
std::vector<ConfigEntry> config_entries(const RunConfig& config);

/// Reference listing of every key with its default and meaning.
std::string config_reference();

}  // namespace fnsc
