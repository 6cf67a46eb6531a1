#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace escapelab {

// Flat key = value experiment description. One experiment per file, `#`
// comments, holes written as unions of open intervals: (0.5,0.6)+(0.8,0.85).
// Environment variables with the ESCAPELAB_ prefix override file values, and
// command-line flags override both.
struct ExperimentConfig {
  std::string mode = "survival";  // survival | tower | ulam | mld | norms | fit
  std::string system = "lsv";     // lsv | farey | solenoid | rotation | synthetic_tower

  // map parameters
  double alpha = 0.5;
  double theta = 2.0;
  double theta_c = 0.2;
  double gamma = 0.6180339887498949;  // golden mean
  double beta = 2.0;

  // hole specification
  std::vector<std::pair<double, double>> hole;  // empty = no hole
  bool disk_present = false;                    // solenoid: cylinder z-part
  double disk_re = 0.0, disk_im = 0.0, disk_radius = 0.0;
  double hole_mass = 0.1;  // synthetic tower

  // sampling
  std::int64_t samples = 100000;
  std::int64_t horizon = 10000;
  std::int64_t burn_in = 1000;
  std::optional<std::uint64_t> seed;  // mandatory
  int workers = 0;                    // 0 = hardware concurrency

  // fit window; fit_hi = 0 means horizon / 10
  double fit_lo = 100.0;
  double fit_hi = 0.0;

  // tower
  std::int64_t base_index = 0;  // 0 = minimal m containing the hole
  std::int64_t sequence_length = 200000;

  // ulam
  std::int64_t n_cells = 1024;
  std::int64_t samples_per_cell = 100;

  // mld / norms
  std::int64_t n_orbit = 1000000;
  std::int64_t p = 1;
  std::string observable = "cos2pix";  // cos2pix | halves
  double dev_threshold_frac = 0.5;     // threshold = frac * K

  // fit mode
  std::string input;            // CSV to re-fit
  std::string fit_kind = "power";  // power | exponential
  std::string value_column;     // defaults to the second column

  std::string out_dir = ".";
  std::string label;  // output file stem; defaults to mode_system

  // Parse one file; unknown keys are errors with the offending line.
  static ExperimentConfig load(const std::filesystem::path& path);
  static ExperimentConfig from_text(const std::string& text, const std::string& origin);

  // Set a single key; throws ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value, const std::string& origin);

  // ESCAPELAB_<KEY> environment overrides.
  void apply_env_overrides();

  // Re-validates every module invariant the referenced systems impose.
  void validate() const;

  double effective_fit_hi() const { return fit_hi > 0.0 ? fit_hi : static_cast<double>(horizon) / 10.0; }
  std::string stem() const { return label.empty() ? mode + "_" + system : label; }
};

std::vector<std::pair<double, double>> parse_hole_spec(const std::string& text);
std::string hole_spec_to_string(const std::vector<std::pair<double, double>>& hole);

}  // namespace escapelab
