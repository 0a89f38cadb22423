#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fnsc {

struct CheckResult {
  std::string name;
  double value = 0.0;      ///< measured defect or ratio
  double tolerance = 0.0;  ///< pass when value <= tolerance
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct VerifyOptions {
  bool micro = false;         ///< n = 8 grid plus brute-force oracles
  bool inject_fault = false;  ///< perturb one shell of the frame before the partition check
  std::size_t n = 32;         ///< grid size outside micro mode
  std::uint64_t seed = 2024;
  std::size_t kernel_samples = 2000;
  std::size_t calibration_fields = 100;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  /// Human-readable table including timings.
  std::string table() const;
  /// name,value,tolerance,passed,detail with 17 significant digits; no
  /// timings, so reruns compare byte for byte.
  std::string to_csv() const;
};

/// Invariant battery: partition of unity, shell overlap, paraproduct
/// identity, semigroup laws, stationary-kernel quadrature, scalar Picard
/// model, Bernstein and embedding calibration; in micro mode also the
/// brute-force convolution, FB-norm and Leray oracles.
VerifyReport run_verify_suite(const VerifyOptions& options = {});

}  // namespace fnsc
