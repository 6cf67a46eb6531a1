// Command-line front end: one subcommand per pipeline, flat config files,
// flag > environment > file precedence, deterministic outputs.

#include <chrono>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "escapelab/config.hpp"
#include "escapelab/errors.hpp"
#include "escapelab/io.hpp"
#include "escapelab/runner.hpp"

namespace {

struct FlagValues {
  std::string config_path;
  std::string seed, samples, horizon, workers, out_dir;
  std::string alpha, theta, theta_c, gamma, beta;
  std::string hole, hole_mass, burn_in, base_index, sequence_length;
  std::string n_cells, samples_per_cell, n_orbit, p, observable;
  std::string fit_lo, fit_hi, fit_kind, input, value_column, label;
  std::string disk_center_re, disk_center_im, disk_radius, dev_threshold_frac;
};

void add_common_flags(CLI::App* cmd, FlagValues& f) {
  cmd->add_option("--config", f.config_path, "experiment config file (key = value lines)");
  cmd->add_option("--seed", f.seed, "RNG seed (mandatory here or in the config)");
  cmd->add_option("--samples", f.samples, "number of Monte Carlo trajectories");
  cmd->add_option("--horizon", f.horizon, "time horizon n_max");
  cmd->add_option("--workers", f.workers, "worker threads (0 = all cores; never changes results)");
  cmd->add_option("--out-dir", f.out_dir, "output directory");
  cmd->add_option("--burn-in", f.burn_in, "burn-in iterations per trajectory");
  cmd->add_option("--fit-lo", f.fit_lo, "fit window lower edge");
  cmd->add_option("--fit-hi", f.fit_hi, "fit window upper edge (0 = horizon/10)");
  cmd->add_option("--label", f.label, "output file stem");
}

void apply_flag(escapelab::ExperimentConfig& cfg, const std::string& key, const std::string& v) {
  if (!v.empty()) cfg.set(key, v, "flag --" + key);
}

escapelab::ExperimentConfig build_config(const FlagValues& f, const std::string& mode,
                                         const std::string& system_flag) {
  escapelab::ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = escapelab::ExperimentConfig::load(f.config_path);
  cfg.apply_env_overrides();
  cfg.mode = mode;
  if (!system_flag.empty()) cfg.system = system_flag;
  apply_flag(cfg, "seed", f.seed);
  apply_flag(cfg, "samples", f.samples);
  apply_flag(cfg, "horizon", f.horizon);
  apply_flag(cfg, "workers", f.workers);
  apply_flag(cfg, "out_dir", f.out_dir);
  apply_flag(cfg, "burn_in", f.burn_in);
  apply_flag(cfg, "alpha", f.alpha);
  apply_flag(cfg, "theta", f.theta);
  apply_flag(cfg, "theta_c", f.theta_c);
  apply_flag(cfg, "gamma", f.gamma);
  apply_flag(cfg, "beta", f.beta);
  apply_flag(cfg, "hole", f.hole);
  apply_flag(cfg, "hole_mass", f.hole_mass);
  apply_flag(cfg, "base_index", f.base_index);
  apply_flag(cfg, "sequence_length", f.sequence_length);
  apply_flag(cfg, "n_cells", f.n_cells);
  apply_flag(cfg, "samples_per_cell", f.samples_per_cell);
  apply_flag(cfg, "n_orbit", f.n_orbit);
  apply_flag(cfg, "p", f.p);
  apply_flag(cfg, "observable", f.observable);
  apply_flag(cfg, "fit_lo", f.fit_lo);
  apply_flag(cfg, "fit_hi", f.fit_hi);
  apply_flag(cfg, "fit_kind", f.fit_kind);
  apply_flag(cfg, "input", f.input);
  apply_flag(cfg, "value_column", f.value_column);
  apply_flag(cfg, "label", f.label);
  apply_flag(cfg, "disk_center_re", f.disk_center_re);
  apply_flag(cfg, "disk_center_im", f.disk_center_im);
  apply_flag(cfg, "disk_radius", f.disk_radius);
  apply_flag(cfg, "dev_threshold_frac", f.dev_threshold_frac);
  return cfg;
}

int run(const escapelab::ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const escapelab::RunReport report = escapelab::run_experiment(cfg);
  const std::string json_path = escapelab::emit_report(report);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::printf("report: %s\n", json_path.c_str());
  for (const auto& fit : report.fits)
    std::printf("fit %-28s exponent %+0.4f  stderr %.4f  r2 %.5f\n", fit.name.c_str(),
                fit.exponent, fit.stderr_, fit.r_squared);
  if (report.predicted_exponent)
    std::printf("predicted exponent %+0.4f  %s\n", *report.predicted_exponent,
                report.pass ? (*report.pass ? "[within tolerance]" : "[OUTSIDE tolerance]")
                            : "[no fit]");
  for (const auto& [name, v] : report.scalars)
    std::printf("scalar %-24s %s\n", name.c_str(), escapelab::format_double(v).c_str());
  std::printf("wall-clock %.2fs\n", secs);
  // Scientific misses are data, not process failures.
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"escapelab: escape-time experiments for intermittent open systems"};
  app.require_subcommand(1);

  FlagValues f;
  std::string system_flag;

  auto* survival = app.add_subcommand("survival", "Monte Carlo survival curve of a hole");
  survival->add_option("--map", system_flag, "lsv | farey | solenoid | rotation | synthetic_tower");
  add_common_flags(survival, f);
  survival->add_option("--alpha", f.alpha, "LSV / solenoid exponent in (0,1)");
  survival->add_option("--theta", f.theta, "Farey exponent > 1");
  survival->add_option("--theta-c", f.theta_c, "solenoid fiber contraction");
  survival->add_option("--gamma", f.gamma, "rotation number");
  survival->add_option("--beta", f.beta, "synthetic tower tail exponent > 1");
  survival->add_option("--hole", f.hole, "union of open intervals, e.g. (0.5,0.6)+(0.8,0.85)");
  survival->add_option("--hole-mass", f.hole_mass, "synthetic tower hole mass in (0,1]");
  survival->add_option("--base-index", f.base_index, "force tower base index m (0 = minimal)");
  survival->add_option("--disk-center-re", f.disk_center_re, "cylinder disk center, real part");
  survival->add_option("--disk-center-im", f.disk_center_im, "cylinder disk center, imag part");
  survival->add_option("--disk-radius", f.disk_radius, "cylinder disk radius");

  auto* tower = app.add_subcommand("tower", "a-sequence and exact return-time tails");
  add_common_flags(tower, f);
  tower->add_option("--alpha", f.alpha, "LSV exponent in (0,1)");
  tower->add_option("--hole", f.hole, "hole used to pick the minimal base index");
  tower->add_option("--base-index", f.base_index, "force base index m");
  tower->add_option("--sequence-length", f.sequence_length, "a-sequence length");

  auto* ulam = app.add_subcommand("ulam", "closed/open spectra of the induced transfer operator");
  add_common_flags(ulam, f);
  ulam->add_option("--alpha", f.alpha, "LSV exponent in (0,1)");
  ulam->add_option("--hole", f.hole, "hole (enables the open operator)");
  ulam->add_option("--base-index", f.base_index, "force base index m");
  ulam->add_option("--n-cells", f.n_cells, "grid cells");
  ulam->add_option("--samples-per-cell", f.samples_per_cell, "stratified samples per cell");

  auto* mld = app.add_subcommand("mld", "maximal large-deviation probability curve");
  add_common_flags(mld, f);
  mld->add_option("--alpha", f.alpha, "LSV exponent in (0,1)");
  mld->add_option("--base-index", f.base_index, "base index m (default 2)");
  mld->add_option("--n-orbit", f.n_orbit, "orbit length for the base-mass estimate");
  mld->add_option("--dev-threshold-frac", f.dev_threshold_frac, "threshold as a fraction of K");

  auto* norms = app.add_subcommand("norms", "Birkhoff-average 2p-norm curves");
  norms->add_option("--map", system_flag, "rotation | lsv");
  add_common_flags(norms, f);
  norms->add_option("--gamma", f.gamma, "rotation number");
  norms->add_option("--alpha", f.alpha, "LSV exponent");
  norms->add_option("--observable", f.observable, "cos2pix | halves");
  norms->add_option("--p", f.p, "positive integer p of the 2p-norm");

  auto* fit = app.add_subcommand("fit", "re-fit an existing CSV");
  add_common_flags(fit, f);
  fit->add_option("--input", f.input, "CSV file to fit");
  fit->add_option("--kind", f.fit_kind, "power | exponential");
  fit->add_option("--value-column", f.value_column, "column to fit (default: second)");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string mode = app.get_subcommands().front()->get_name();
    if (mode == "norms" && system_flag.empty()) system_flag = "rotation";
    return run(build_config(f, mode, system_flag));
  } catch (const escapelab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
