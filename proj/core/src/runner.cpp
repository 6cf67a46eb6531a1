#include "escapelab/runner.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "escapelab/errors.hpp"
#include "escapelab/hole.hpp"
#include "escapelab/io.hpp"
#include "escapelab/maps.hpp"
#include "escapelab/measure.hpp"
#include "escapelab/open_systems.hpp"
#include "escapelab/synthetic_tower.hpp"
#include "escapelab/tower.hpp"

namespace escapelab {

namespace {

FitRecord to_record(const std::string& name, const PowerLawFit& fit) {
  return FitRecord{name,       "power_law",   fit.exponent,  fit.intercept, fit.stderr_,
                   fit.r_squared, fit.window.lo, fit.window.hi, fit.n_points};
}

FitRecord to_record(const std::string& name, const ExponentialFit& fit) {
  return FitRecord{name,       "exponential", -fit.rate,     fit.intercept, fit.stderr_,
                   fit.r_squared, fit.window.lo, fit.window.hi, fit.n_points};
}

// Fit the survival tail, shrinking the window to its positive part first.
std::optional<PowerLawFit> fit_survival(const SurvivalCurve& curve, FitWindow window,
                                        RunReport& report, const std::string& name) {
  try {
    const FitWindow clipped = clip_window_to_positive(curve, window);
    const PowerLawFit fit = fit_power_law(curve, clipped);
    report.fits.push_back(to_record(name, fit));
    return fit;
  } catch (const InsufficientDataError&) {
    return std::nullopt;
  } catch (const NonPositiveValueError&) {
    return std::nullopt;
  }
}

std::int64_t resolve_base_index(const ExperimentConfig& cfg, const LsvMap& map) {
  if (cfg.base_index > 0) return cfg.base_index;
  if (!cfg.hole.empty()) return choose_base_index(Hole1D{cfg.hole}, map);
  return 2;
}

void finish_against_prediction(RunReport& report, const std::optional<PowerLawFit>& fit,
                               double predicted) {
  report.predicted_exponent = predicted;
  if (fit) report.pass = std::abs(fit->exponent - predicted) <= report.tolerance;
}

void run_survival(const ExperimentConfig& cfg, RunReport& report) {
  SurvivalConfig sim{cfg.samples, cfg.horizon, cfg.burn_in, *cfg.seed, cfg.workers};
  const FitWindow window{cfg.fit_lo, cfg.effective_fit_hi()};

  if (cfg.system == "synthetic_tower") {
    const SyntheticTower tower{cfg.beta};
    const SurvivalCurve curve =
        synthetic_tower_survival(tower, cfg.hole_mass, sim.n_samples, sim.n_max, sim.seed, sim.workers);
    report.curve_data["survival"] = survival_to_csv(curve);
    const auto fit = fit_survival(curve, window, report, "survival_power_law");
    finish_against_prediction(report, fit, 1.0 - cfg.beta);
    return;
  }

  if (cfg.system == "lsv") {
    const LsvMap map{cfg.alpha};
    const Hole1D hole{cfg.hole};
    const std::int64_t m = resolve_base_index(cfg, map);
    const TowerModel tower = make_tower(map, m, cfg.horizon);
    const SurvivalCurve curve = survival_curve_towered(tower, hole, sim);
    report.curve_data["survival"] = survival_to_csv(curve);
    report.scalars["base_index"] = static_cast<double>(m);
    report.scalars["base_low"] = tower.base_low;
    const auto fit = fit_survival(curve, window, report, "survival_power_law");
    finish_against_prediction(report, fit, 1.0 - 1.0 / cfg.alpha);
    return;
  }

  if (cfg.system == "farey") {
    const FareyMap map{cfg.theta};
    const SurvivalCurve curve = survival_curve(map, Hole1D{cfg.hole}, sim);
    report.curve_data["survival"] = survival_to_csv(curve);
    const auto fit = fit_survival(curve, window, report, "survival_power_law");
    finish_against_prediction(report, fit, 1.0 - cfg.theta);
    return;
  }

  if (cfg.system == "rotation") {
    const RotationMap map{cfg.gamma};
    const SurvivalCurve curve = survival_curve(map, Hole1D{cfg.hole}, sim);
    report.curve_data["survival"] = survival_to_csv(curve);
    fit_survival(curve, window, report, "survival_power_law");
    return;  // no predicted exponent for rotations
  }

  if (cfg.system == "solenoid") {
    const SolenoidMap map{cfg.alpha, cfg.theta_c};
    std::optional<Disk> disk;
    if (cfg.disk_present) disk = Disk{{cfg.disk_re, cfg.disk_im}, cfg.disk_radius};
    const HoleCylinder hole{Hole1D{cfg.hole}, disk};
    const SurvivalCurve curve = solenoid_survival(map, hole, sim);
    report.curve_data["survival"] = survival_to_csv(curve);
    const auto fit = fit_survival(curve, window, report, "survival_power_law");
    finish_against_prediction(report, fit, 1.0 - 1.0 / cfg.alpha);
    return;
  }

  throw ConfigError("survival mode does not support system '" + cfg.system + "'");
}

void run_tower(const ExperimentConfig& cfg, RunReport& report) {
  if (cfg.system != "lsv") throw ConfigError("tower mode supports system = lsv only");
  const LsvMap map{cfg.alpha};
  const std::int64_t m = resolve_base_index(cfg, map);
  const std::int64_t len = std::max<std::int64_t>(cfg.sequence_length, 1000);

  TowerModel tower{map, m, 0.0, compute_a_sequence(len + m, map)};
  tower.base_low = tower.a_seq[m];
  report.scalars["base_index"] = static_cast<double>(m);
  report.scalars["base_low"] = tower.base_low;

  // a-sequence on a geometric index grid.
  const auto k_grid = SurvivalCurve::geometric_grid(len);
  std::vector<double> a_values;
  a_values.reserve(k_grid.size());
  for (const auto k : k_grid) a_values.push_back(tower.a_seq[k]);
  report.curve_data["a_sequence"] = columns_to_csv({"n", "a_n"}, k_grid, {a_values});

  const FitWindow window{cfg.fit_lo,
                         cfg.fit_hi > 0.0 ? cfg.fit_hi : static_cast<double>(len) / 10.0};
  report.fits.push_back(
      to_record("a_sequence_power_law", fit_power_law(k_grid, a_values, window)));

  // Exact return tail and its partial sums.
  const auto n_grid = SurvivalCurve::geometric_grid(len - m);
  const ReturnTailCurve tail = return_tail(tower, n_grid);
  report.curve_data["return_tail"] =
      columns_to_csv({"n", "tail", "tail_sum"}, tail.n, {tail.tail, tail.tail_sum});
  report.fits.push_back(to_record("return_tail_power_law", fit_power_law(tail.n, tail.tail, window)));
  report.fits.push_back(
      to_record("return_tail_sum_power_law", fit_power_law(tail.n, tail.tail_sum, window)));

  report.predicted_exponent = 1.0 - 1.0 / cfg.alpha;  // for the partial-sum series
  report.pass = std::abs(report.fits.back().exponent - *report.predicted_exponent) <=
                report.tolerance;
}

void run_ulam(const ExperimentConfig& cfg, RunReport& report) {
  if (cfg.system != "lsv") throw ConfigError("ulam mode supports system = lsv only");
  const LsvMap map{cfg.alpha};
  const std::int64_t m = resolve_base_index(cfg, map);
  const TowerModel tower = make_tower(map, m, std::max<std::int64_t>(cfg.sequence_length, 2000000));
  report.scalars["base_index"] = static_cast<double>(m);
  report.scalars["base_low"] = tower.base_low;

  const double lo = tower.base_low;
  auto induced = [&tower, lo](double x) {
    if (x <= lo) x = std::nextafter(lo, 1.0);  // stratum edge guard
    return induced_step(x, tower).first;
  };
  const UlamOperator closed =
      ulam_matrix(induced, lo, 1.0, cfg.n_cells, cfg.samples_per_cell, *cfg.seed, cfg.workers);
  double worst = 0.0;
  for (std::int64_t i = 0; i < closed.n_cells; ++i)
    worst = std::max(worst, std::abs(closed.row_sum(i) - 1.0));
  report.scalars["max_row_sum_error"] = worst;

  const GridDensity density = stationary_density(closed);
  report.curve_data["stationary_density"] = density_to_csv(density);
  report.curve_data["ulam_matrix"] = ulam_to_csv(closed);

  if (!cfg.hole.empty()) {
    const Hole1D hole{cfg.hole};
    const OpenUlamOperator open = open_ulam(closed, hole);
    const EigenResult eig = leading_eigenvalue(open);
    report.scalars["lambda"] = eig.lambda;
    report.scalars["minus_log_lambda"] = eig.lambda > 0.0 ? -std::log(eig.lambda) : 0.0;
    report.scalars["hole_cells"] = static_cast<double>(open.n_hole_cells);
    report.curve_data["quasi_stationary_density"] = density_to_csv(eig.density);

    // Monte Carlo induced hitting survival alongside the spectral rate.
    SurvivalConfig sim{cfg.samples, cfg.horizon, cfg.burn_in, *cfg.seed, cfg.workers};
    const SurvivalCurve induced_curve = induced_hitting_survival(tower, hole, sim);
    report.curve_data["induced_survival"] = survival_to_csv(induced_curve);
    try {
      const FitWindow window{std::min(cfg.fit_lo, 3.0),
                             clip_window_to_positive(induced_curve, {1.0, cfg.effective_fit_hi()}).hi};
      const ExponentialFit fit = fit_exponential_rate(induced_curve, window);
      report.fits.push_back(to_record("induced_exponential", fit));
      report.scalars["mc_rate"] = fit.rate;
      if (eig.lambda > 0.0 && fit.rate > 0.0)
        report.scalars["rate_rel_diff"] =
            std::abs(fit.rate - (-std::log(eig.lambda))) / (-std::log(eig.lambda));
    } catch (const InsufficientDataError&) {
    } catch (const NonPositiveValueError&) {
    }
  }
}

void run_mld(const ExperimentConfig& cfg, RunReport& report) {
  if (cfg.system != "lsv") throw ConfigError("mld mode supports system = lsv only");
  const LsvMap map{cfg.alpha};
  const std::int64_t m = cfg.base_index > 0 ? cfg.base_index : 2;
  const double base_low = compute_a_sequence(m, map).values.back();
  report.scalars["base_index"] = static_cast<double>(m);
  report.scalars["base_low"] = base_low;

  Rng k_rng(*cfg.seed, 0, stream_tag::base_mass);
  const BaseMass k = base_mass(map, base_low, 1.0, cfg.n_orbit, cfg.burn_in, k_rng);
  report.scalars["k_value"] = k.value;
  report.scalars["k_stderr"] = k.stderr_;

  const double threshold = cfg.dev_threshold_frac * k.value;
  const MapOrbit<LsvMap> orbit{&map, cfg.burn_in};
  const auto in_base = [base_low](double x) { return x > base_low && x <= 1.0; };
  const MaxDevCurve curve =
      max_deviation_curve(orbit, in_base, k.value, threshold, SurvivalCurve::geometric_grid(cfg.horizon),
                          cfg.horizon, cfg.samples, *cfg.seed, cfg.workers);
  report.curve_data["max_deviation"] =
      columns_to_csv({"n", "probability"}, curve.n_grid, {curve.probabilities});

  try {
    const FitWindow window{cfg.fit_lo, cfg.effective_fit_hi()};
    const PowerLawFit fit = fit_power_law(curve.n_grid, curve.probabilities, window);
    report.fits.push_back(to_record("max_deviation_power_law", fit));
    finish_against_prediction(report,
                              std::optional<PowerLawFit>{fit}, 1.0 - 1.0 / cfg.alpha);
    report.tolerance = 0.3;
    report.pass = std::abs(fit.exponent - *report.predicted_exponent) <= report.tolerance;
  } catch (const InsufficientDataError&) {
  } catch (const NonPositiveValueError&) {
  }
}

void run_norms(const ExperimentConfig& cfg, RunReport& report) {
  std::function<double(double)> phi;
  if (cfg.observable == "cos2pix")
    phi = [](double x) { return std::cos(2.0 * std::numbers::pi * x); };
  else
    phi = [](double x) { return x < 0.5 ? 1.0 : -1.0; };

  const auto grid = SurvivalCurve::geometric_grid(cfg.horizon);
  NormCurve curve;
  if (cfg.system == "rotation") {
    const RotationMap map{cfg.gamma};
    const MapOrbit<RotationMap> orbit{&map, cfg.burn_in};
    curve = birkhoff_norm_curves(orbit, phi, grid, cfg.horizon, cfg.p, cfg.samples, *cfg.seed,
                                 cfg.workers);
  } else if (cfg.system == "lsv") {
    const LsvMap map{cfg.alpha};
    const MapOrbit<LsvMap> orbit{&map, cfg.burn_in};
    curve = birkhoff_norm_curves(orbit, phi, grid, cfg.horizon, cfg.p, cfg.samples, *cfg.seed,
                                 cfg.workers);
  } else {
    throw ConfigError("norms mode supports system = rotation or lsv");
  }

  report.curve_data["norms"] =
      columns_to_csv({"n", "plain_norm", "sup_norm"}, curve.n_grid,
                     {curve.plain_norms, curve.sup_norms});
  report.scalars["observable_mean"] = curve.observable_mean;

  // The decay statements are about the 2p-th powers of the norms.
  const std::int64_t two_p = 2 * cfg.p;
  std::vector<double> plain_pow, sup_pow;
  for (std::size_t g = 0; g < curve.n_grid.size(); ++g) {
    plain_pow.push_back(detail::int_pow(curve.plain_norms[g], two_p));
    sup_pow.push_back(detail::int_pow(curve.sup_norms[g], two_p));
  }
  try {
    const FitWindow window{cfg.fit_lo, cfg.effective_fit_hi()};
    const PowerLawFit plain_fit = fit_power_law(curve.n_grid, plain_pow, window);
    const PowerLawFit sup_fit = fit_power_law(curve.n_grid, sup_pow, window);
    report.fits.push_back(to_record("plain_norm_power_law", plain_fit));
    report.fits.push_back(to_record("sup_norm_power_law", sup_fit));
    report.scalars["exponent_gap"] = std::abs(plain_fit.exponent - sup_fit.exponent);
  } catch (const InsufficientDataError&) {
  } catch (const NonPositiveValueError&) {
  }
}

void run_fit(const ExperimentConfig& cfg, RunReport& report) {
  const std::string text = read_file(cfg.input);
  Series series;
  if (text.rfind("n,survivors,total,p_hat", 0) == 0) {
    series = series_from_csv(text, "p_hat");
  } else {
    series = series_from_csv(text, cfg.value_column);
  }
  double hi = cfg.fit_hi;
  if (hi <= 0.0) {
    for (const auto n : series.n) hi = std::max(hi, static_cast<double>(n));
  }
  const FitWindow window{cfg.fit_lo, hi};
  if (cfg.fit_kind == "power")
    report.fits.push_back(to_record("refit_power_law", fit_power_law(series.n, series.value, window)));
  else
    report.fits.push_back(
        to_record("refit_exponential", fit_exponential_rate(series.n, series.value, window)));
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["mode"] = cfg.mode;
  j["system"] = cfg.system;
  j["alpha"] = cfg.alpha;
  j["theta"] = cfg.theta;
  j["theta_c"] = cfg.theta_c;
  j["gamma"] = cfg.gamma;
  j["beta"] = cfg.beta;
  j["hole"] = cfg.hole.empty() ? "" : hole_spec_to_string(cfg.hole);
  if (cfg.disk_present) {
    j["disk_center_re"] = cfg.disk_re;
    j["disk_center_im"] = cfg.disk_im;
    j["disk_radius"] = cfg.disk_radius;
  }
  j["hole_mass"] = cfg.hole_mass;
  j["samples"] = cfg.samples;
  j["horizon"] = cfg.horizon;
  j["burn_in"] = cfg.burn_in;
  j["seed"] = *cfg.seed;
  j["workers"] = cfg.workers;
  j["fit_lo"] = cfg.fit_lo;
  j["fit_hi"] = cfg.fit_hi;
  j["base_index"] = cfg.base_index;
  j["sequence_length"] = cfg.sequence_length;
  j["n_cells"] = cfg.n_cells;
  j["samples_per_cell"] = cfg.samples_per_cell;
  j["n_orbit"] = cfg.n_orbit;
  j["p"] = cfg.p;
  j["observable"] = cfg.observable;
  j["dev_threshold_frac"] = cfg.dev_threshold_frac;
  if (!cfg.input.empty()) j["input"] = cfg.input;
  j["fit_kind"] = cfg.fit_kind;
  j["out_dir"] = cfg.out_dir;
  j["label"] = cfg.stem();
  return j;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  RunReport report;
  report.config = config;

  if (config.mode == "survival") run_survival(config, report);
  else if (config.mode == "tower") run_tower(config, report);
  else if (config.mode == "ulam") run_ulam(config, report);
  else if (config.mode == "mld") run_mld(config, report);
  else if (config.mode == "norms") run_norms(config, report);
  else if (config.mode == "fit") run_fit(config, report);
  else throw ConfigError("unknown mode '" + config.mode + "'");

  for (const auto& [name, data] : report.curve_data)
    report.curves[name] = report.config.stem() + "_" + name + ".csv";
  return report;
}

std::string report_to_json(const RunReport& report) {
  nlohmann::json j;
  j["config"] = config_to_json(report.config);
  j["curves"] = nlohmann::json::object();
  for (const auto& [name, file] : report.curves) j["curves"][name] = file;
  j["fits"] = nlohmann::json::array();
  for (const auto& fit : report.fits) {
    nlohmann::json f;
    f["name"] = fit.name;
    f["kind"] = fit.kind;
    f["exponent"] = fit.exponent;
    f["intercept"] = fit.intercept;
    f["stderr"] = fit.stderr_;
    f["r_squared"] = fit.r_squared;
    f["window"] = {fit.window_lo, fit.window_hi};
    f["n_points"] = fit.n_points;
    j["fits"].push_back(f);
  }
  j["predicted_exponent"] =
      report.predicted_exponent ? nlohmann::json(*report.predicted_exponent) : nlohmann::json();
  j["pass"] = report.pass ? nlohmann::json(*report.pass) : nlohmann::json();
  j["tolerance"] = report.tolerance;
  j["scalars"] = nlohmann::json::object();
  for (const auto& [name, v] : report.scalars) j["scalars"][name] = v;
  return j.dump(2) + "\n";
}

std::string emit_report(const RunReport& report) {
  namespace fs = std::filesystem;
  const fs::path dir{report.config.out_dir};
  fs::create_directories(dir);
  for (const auto& [name, file] : report.curves)
    write_file_atomic(dir / file, report.curve_data.at(name));
  const fs::path json_path = dir / (report.config.stem() + "_report.json");
  write_file_atomic(json_path, report_to_json(report));
  return json_path.string();
}

}  // namespace escapelab
