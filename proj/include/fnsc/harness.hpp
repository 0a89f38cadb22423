#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "fnsc/config.hpp"
#include "json.hpp"

namespace fnsc {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,        ///< bad command line or config
  kExitGateFailed = 2,   ///< data fail the smallness gate of the experiment
  kExitDivergence = 3,   ///< non-finite values or a fixed point that did not converge
  kExitIo = 4,
  kExitCheckFailed = 5,  ///< verify battery reported a failure
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kManifestSchemaVersion = 1;

/// 16 hex digits of FNV-1a over the canonical config rendering.
std::string run_id(const RunConfig& config);

struct MeasuredConstants {
  double K = 0.0;
  bool K_measured = false;
  double epsilon = 0.0;
  std::optional<double> forcing_C;  ///< stationary experiments only
  double semigroup_C = 0.0;
  double seconds = 0.0;
};

/// K (measured unless configured), ε = epsilon_fraction/(4K) unless
/// configured, the semigroup constant, and C when `need_forcing`.
MeasuredConstants resolve_constants(const RunConfig& config, bool need_forcing);

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  nlohmann::json manifest;
  std::filesystem::path manifest_path;
};

/// Runs the configured experiment and writes manifest.json, CSV series,
/// FNSC snapshots and summary.txt under the output directory. The manifest
/// is written with status "running" before any computation and finalized
/// afterwards. Progress lines go to `log` when given.
RunOutcome run_experiment(const RunConfig& config, std::ostream* log = nullptr);

/// Loads the config first; parse failures give kExitUsage and an unreadable
/// file kExitIo.
RunOutcome run_experiment(const std::filesystem::path& config_file, std::ostream* log = nullptr);

/// Parses a manifest back. Throws IoError when unreadable or malformed.
nlohmann::json read_manifest(const std::filesystem::path& path);

/// Copy of a manifest without its "timings" block, the part that is allowed
/// to differ between identical runs.
nlohmann::json without_timings(const nlohmann::json& manifest);

}  // namespace fnsc
