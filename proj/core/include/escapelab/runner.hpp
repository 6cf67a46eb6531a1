#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "escapelab/config.hpp"
#include "escapelab/stats.hpp"

namespace escapelab {

// One regression result, ready for JSON.
struct FitRecord {
  std::string name;    // e.g. "survival_power_law"
  std::string kind;    // "power_law" | "exponential"
  double exponent = 0.0;  // power-law exponent, or -rate for exponential fits
  double intercept = 0.0;
  double stderr_ = 0.0;
  double r_squared = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::int64_t n_points = 0;
};

// Everything run_experiment produces: the config echo, paths of emitted
// curves, fits, the theory exponent when the system has one, and scalar
// diagnostics (lambda, base mass, ...). Wall-clock goes to the console, not
// into the report, so identical configs yield byte-identical files.
struct RunReport {
  ExperimentConfig config;
  std::map<std::string, std::string> curves;   // name -> csv filename
  std::map<std::string, std::string> curve_data;  // name -> csv content
  std::vector<FitRecord> fits;
  std::optional<double> predicted_exponent;
  std::optional<bool> pass;  // |fitted - predicted| <= tolerance
  double tolerance = 0.15;
  std::map<std::string, double> scalars;
};

// Dispatches the config to its pipeline and gathers curves and fits. Pure
// computation: nothing is written to disk. Scientific misses show up in the
// report, not as errors; only invalid configs throw.
RunReport run_experiment(const ExperimentConfig& config);

// Writes every curve CSV plus the JSON report (sorted keys, newline
// terminated, 17-significant-digit numbers) atomically under out_dir.
// Returns the JSON path.
std::string emit_report(const RunReport& report);

// JSON text of the report (exact bytes that emit_report writes).
std::string report_to_json(const RunReport& report);

}  // namespace escapelab
