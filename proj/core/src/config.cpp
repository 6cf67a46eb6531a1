#include "escapelab/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "escapelab/errors.hpp"
#include "escapelab/hole.hpp"
#include "escapelab/io.hpp"
#include "escapelab/maps.hpp"
#include "escapelab/synthetic_tower.hpp"

namespace escapelab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key, const std::string& origin) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(origin + ": key '" + key + "': cannot parse '" + v + "' as a number");
  }
}

std::int64_t to_int(const std::string& v, const std::string& key, const std::string& origin) {
  try {
    std::size_t used = 0;
    const std::int64_t i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError(origin + ": key '" + key + "': cannot parse '" + v + "' as an integer");
  }
}

}  // namespace

std::vector<std::pair<double, double>> parse_hole_spec(const std::string& text) {
  std::vector<std::pair<double, double>> intervals;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] == '+' || text[pos] == ' ') {
      ++pos;
      continue;
    }
    if (text[pos] != '(') throw ConfigError("hole spec: expected '(' at '" + text.substr(pos) + "'");
    const auto comma = text.find(',', pos);
    const auto close = text.find(')', pos);
    if (comma == std::string::npos || close == std::string::npos || comma > close)
      throw ConfigError("hole spec: malformed interval in '" + text + "'");
    const double lo = std::stod(text.substr(pos + 1, comma - pos - 1));
    const double hi = std::stod(text.substr(comma + 1, close - comma - 1));
    intervals.emplace_back(lo, hi);
    pos = close + 1;
  }
  if (intervals.empty()) throw ConfigError("hole spec: no intervals in '" + text + "'");
  return intervals;
}

std::string hole_spec_to_string(const std::vector<std::pair<double, double>>& hole) {
  std::string out;
  for (std::size_t i = 0; i < hole.size(); ++i) {
    if (i) out += "+";
    out += "(" + format_double(hole[i].first) + "," + format_double(hole[i].second) + ")";
  }
  return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& value,
                           const std::string& origin) {
  if (key == "mode") mode = value;
  else if (key == "system") system = value;
  else if (key == "alpha") alpha = to_double(value, key, origin);
  else if (key == "theta") theta = to_double(value, key, origin);
  else if (key == "theta_c") theta_c = to_double(value, key, origin);
  else if (key == "gamma") gamma = to_double(value, key, origin);
  else if (key == "beta") beta = to_double(value, key, origin);
  else if (key == "hole") hole = parse_hole_spec(value);
  else if (key == "disk_center_re") { disk_re = to_double(value, key, origin); disk_present = true; }
  else if (key == "disk_center_im") { disk_im = to_double(value, key, origin); disk_present = true; }
  else if (key == "disk_radius") { disk_radius = to_double(value, key, origin); disk_present = true; }
  else if (key == "hole_mass") hole_mass = to_double(value, key, origin);
  else if (key == "samples") samples = to_int(value, key, origin);
  else if (key == "horizon") horizon = to_int(value, key, origin);
  else if (key == "burn_in") burn_in = to_int(value, key, origin);
  else if (key == "seed") seed = static_cast<std::uint64_t>(to_int(value, key, origin));
  else if (key == "workers") workers = static_cast<int>(to_int(value, key, origin));
  else if (key == "fit_lo") fit_lo = to_double(value, key, origin);
  else if (key == "fit_hi") fit_hi = to_double(value, key, origin);
  else if (key == "base_index") base_index = to_int(value, key, origin);
  else if (key == "sequence_length") sequence_length = to_int(value, key, origin);
  else if (key == "n_cells") n_cells = to_int(value, key, origin);
  else if (key == "samples_per_cell") samples_per_cell = to_int(value, key, origin);
  else if (key == "n_orbit") n_orbit = to_int(value, key, origin);
  else if (key == "p") p = to_int(value, key, origin);
  else if (key == "observable") observable = value;
  else if (key == "dev_threshold_frac") dev_threshold_frac = to_double(value, key, origin);
  else if (key == "input") input = value;
  else if (key == "fit_kind") fit_kind = value;
  else if (key == "value_column") value_column = value;
  else if (key == "out_dir") out_dir = value;
  else if (key == "label") label = value;
  else throw ConfigError(origin + ": unknown key '" + key + "'");
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
            origin + ":" + std::to_string(line_no));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str(), path.string());
}

void ExperimentConfig::apply_env_overrides() {
  static const char* keys[] = {
      "mode",       "system",        "alpha",          "theta",     "theta_c",
      "gamma",      "beta",          "hole",           "disk_center_re", "disk_center_im",
      "disk_radius", "hole_mass",    "samples",        "horizon",   "burn_in",
      "seed",       "workers",       "fit_lo",         "fit_hi",    "base_index",
      "sequence_length", "n_cells",  "samples_per_cell", "n_orbit", "p",
      "observable", "dev_threshold_frac", "input",     "fit_kind",  "value_column",
      "out_dir",    "label"};
  for (const char* key : keys) {
    std::string env_name = "ESCAPELAB_";
    for (const char* c = key; *c; ++c) env_name += static_cast<char>(std::toupper(*c));
    if (const char* v = std::getenv(env_name.c_str())) set(key, v, "env " + env_name);
  }
}

void ExperimentConfig::validate() const {
  const std::string where = "config";
  auto fail = [&](const std::string& msg) { throw ConfigError(where + ": " + msg); };

  if (mode != "survival" && mode != "tower" && mode != "ulam" && mode != "mld" &&
      mode != "norms" && mode != "fit")
    fail("mode '" + mode + "' is not one of survival|tower|ulam|mld|norms|fit");
  if (system != "lsv" && system != "farey" && system != "solenoid" && system != "rotation" &&
      system != "synthetic_tower")
    fail("system '" + system + "' is not one of lsv|farey|solenoid|rotation|synthetic_tower");
  if (!seed) fail("seed is mandatory");
  if (samples < 1) fail("samples must be positive");
  if (horizon < 1) fail("horizon must be positive");
  if (burn_in < 0) fail("burn_in must be nonnegative");
  if (base_index < 0) fail("base_index must be nonnegative");
  if (p < 1) fail("p must be a positive integer");
  if (observable != "cos2pix" && observable != "halves")
    fail("observable '" + observable + "' is not one of cos2pix|halves");
  if (fit_kind != "power" && fit_kind != "exponential")
    fail("fit_kind '" + fit_kind + "' is not one of power|exponential");

  // Re-run the module validations so errors surface at load time with the
  // config context attached.
  try {
    if (system == "lsv") LsvMap{alpha};
    if (system == "farey") FareyMap{theta};
    if (system == "rotation") RotationMap{gamma};
    if (system == "solenoid") {
      SolenoidMap map{alpha, theta_c};
      if (disk_present) {
        if (!(disk_radius > 0.0)) fail("disk_radius must be positive when a disk is given");
        HoleCylinder{Hole1D{hole.empty() ? std::vector<std::pair<double, double>>{{0.5, 0.6}} : hole},
                     Disk{{disk_re, disk_im}, disk_radius}};
      }
    }
    if (system == "synthetic_tower") {
      SyntheticTower tower{beta};
      if (!(hole_mass > 0.0 && hole_mass <= 1.0)) fail("hole_mass must lie in (0,1]");
    }
    if (!hole.empty()) Hole1D{hole};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }

  if (mode == "survival" && system != "synthetic_tower" && hole.empty())
    fail("survival mode needs a hole");
  if (mode == "fit" && input.empty()) fail("fit mode needs input = <csv path>");
}

}  // namespace escapelab
