#include "mrfanom/cli/cli.hpp"

#include <algorithm>
#include <exception>
#include <ostream>

#include <CLI11.hpp>

#include <mrfanom/error.hpp>

#include "commands.hpp"

#ifndef MRFANOM_VERSION
#define MRFANOM_VERSION "unknown"
#endif

namespace mrfanom::cli {

namespace {

template <class T>
void optional_option(CLI::App* cmd, const std::string& name, std::optional<T>& target,
                     const std::string& help) {
  cmd->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spatio-temporal rainfall anomaly detection with Markov random fields", "mrfanom"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", MRFANOM_VERSION);

  GlobalOptions global;
  app.add_option("--out-dir", global.out_dir, "Output directory")->capture_default_str();
  optional_option(&app, "--seed", global.seed, "RNG seed (overrides config files)");
  app.add_flag("-q,--quiet", global.quiet, "Suppress progress and warnings");

  SynthOptions synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic dataset with planted anomalies");
  c_synth->add_option("SPEC", synth.spec, "Synthetic spec file")->required();

  LwaOptions lwa;
  auto* c_lwa = app.add_subcommand("lwa", "Location-wise threshold assignment and year sets");
  c_lwa->add_option("DATA", lwa.data, "Rainfall CSV")->required();
  c_lwa->add_option("--spacing", lwa.spacing, "Grid spacing in degrees")->capture_default_str();
  c_lwa->add_option("--k", lwa.k, "Threshold in standard deviations")->capture_default_str();

  FitOptions fit;
  auto* c_fit = app.add_subcommand("fit", "Fit the MRF by Gibbs sampling and write the MAP field");
  c_fit->add_option("DATA", fit.data, "Rainfall CSV")->required();
  optional_option(c_fit, "--config", fit.config, "key = value run config");
  optional_option(c_fit, "--sweeps", fit.sweeps, "Gibbs sweeps");
  optional_option(c_fit, "--burn-in", fit.burn_in, "Burn-in sweeps");
  optional_option(c_fit, "--thin", fit.thin, "Keep every n-th sweep");
  optional_option(c_fit, "--scan", fit.scan, "raster, random or colored");
  optional_option(c_fit, "--threads", fit.threads, "Worker threads for the colored scan");
  c_fit->add_option("--spacing", fit.spacing, "Grid spacing in degrees")->capture_default_str();

  DetectOptions detect;
  auto* c_detect = app.add_subcommand("detect", "Extract anomalies from a state field");
  c_detect->add_option("FIELD", detect.field, "State CSV (e.g. map.csv)")->required();
  c_detect->add_option("DATA", detect.data, "Rainfall CSV")->required();
  c_detect->add_option("--min-size", detect.min_size, "Minimum st_size")->capture_default_str();
  optional_option(c_detect, "--ref", detect.ref, "Reference state CSV for gains and losses");
  c_detect->add_option("--top", detect.top, "Case reports for the K largest anomalies")
      ->capture_default_str();
  c_detect->add_option("--spacing", detect.spacing, "Grid spacing in degrees")
      ->capture_default_str();

  SweepOptions sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Run a list of settings and tabulate statistics");
  c_sweep->add_option("DATA", sweep.data, "Rainfall CSV")->required();
  c_sweep->add_option("SPEC", sweep.spec, "Sweep config with a settings list")->required();
  c_sweep->add_option("--spacing", sweep.spacing, "Grid spacing in degrees")
      ->capture_default_str();

  RenderOptions render;
  auto* c_render = app.add_subcommand("render", "Draw yearly state maps");
  c_render->add_option("FIELD", render.field, "State CSV, or membership CSV with --anomalies")
      ->required();
  c_render->add_option("DATA", render.data, "Rainfall CSV")->required();
  c_render->add_option("--year", render.years, "Year to draw (repeatable)")->required();
  optional_option(c_render, "--anomalies", render.anomalies, "Anomaly CSV");
  c_render->add_option("--format", render.format, "svg or pgm")
      ->check(CLI::IsMember({"svg", "pgm"}))
      ->capture_default_str();
  c_render->add_option("--cell", render.cell, "Pixels per cell")->capture_default_str();
  c_render->add_option("--spacing", render.spacing, "Grid spacing in degrees")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const Context ctx{global, &out, &err};
  try {
    if (*c_synth) cmd_synth(ctx, synth);
    else if (*c_lwa) cmd_lwa(ctx, lwa);
    else if (*c_fit) cmd_fit(ctx, fit);
    else if (*c_detect) cmd_detect(ctx, detect);
    else if (*c_sweep) cmd_sweep(ctx, sweep);
    else if (*c_render) cmd_render(ctx, render);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? kExitRuntime : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace mrfanom::cli
