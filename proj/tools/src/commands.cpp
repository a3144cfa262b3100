#include "commands.hpp"

#include <algorithm>
#include <ostream>

#include <mrfanom/anomaly.hpp>
#include <mrfanom/csv.hpp>
#include <mrfanom/error.hpp>
#include <mrfanom/inference.hpp>
#include <mrfanom/lwa.hpp>
#include <mrfanom/report_json.hpp>
#include <mrfanom/synthetic.hpp>

#include "mrfanom/cli/config.hpp"
#include "mrfanom/cli/render.hpp"
#include "mrfanom/cli/sweep.hpp"

#ifndef MRFANOM_VERSION
#define MRFANOM_VERSION "unknown"
#endif

namespace mrfanom::cli {

namespace fs = std::filesystem;
using Pairs = std::vector<std::pair<std::string, std::string>>;

void Context::info(const std::string& message) const {
  if (!global.quiet) *out << message << '\n';
}

void Context::warn(const std::string& message) const {
  if (!global.quiet) *err << "warning: " << message << '\n';
}

namespace {

void write_manifest(const Context& ctx, const std::string& command, Pairs inputs, Pairs config,
                    std::optional<std::uint64_t> seed) {
  RunManifest m;
  m.command = command;
  m.tool_version = MRFANOM_VERSION;
  m.inputs = std::move(inputs);
  m.config = std::move(config);
  m.seed = seed;
  m.out_dir = ctx.global.out_dir.string();
  write_text(ctx.global.out_dir / "manifest.json", to_json(m));
}

std::string fmt(double v) { return csv::format(v); }

void warn_degenerate(const Context& ctx, const LocationStats& stats) {
  const auto flat = stats.degenerate();
  if (!flat.empty()) {
    ctx.warn(std::to_string(flat.size()) +
             " location(s) have zero variance over the years; assigned state 3");
  }
  if (stats.sigma_aimr == 0.0) ctx.warn("AIMR series has zero variance; assigned state 3");
}

void warn_year_sets(const Context& ctx, const YearSets& sets) {
  if (sets.hl_degenerate) ctx.warn("DegenerateThreshold: N1 is constant, HL holds every year");
  if (sets.ll_degenerate) ctx.warn("DegenerateThreshold: N2 is constant, LL holds every year");
}

struct RunConfig {
  MrfConfig mrf;
  GibbsConfig gibbs;
};

std::vector<State> year_slice(const StateField& z, std::size_t t) {
  std::vector<State> out(z.locations());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = z.z(s, t);
  return out;
}

}  // namespace

void cmd_synth(const Context& ctx, const SynthOptions& opt) {
  auto spec = load_synthetic_spec(opt.spec);
  if (ctx.global.seed) spec.seed = *ctx.global.seed;

  Pairs config = {{"rows", std::to_string(spec.rows)},
                  {"cols", std::to_string(spec.cols)},
                  {"years", std::to_string(spec.years)},
                  {"first_year", std::to_string(spec.first_year)},
                  {"lat0", fmt(spec.lat0)},
                  {"lon0", fmt(spec.lon0)},
                  {"spacing", fmt(spec.spacing)},
                  {"background_mu", fmt(spec.background_mu)},
                  {"background_sigma", fmt(spec.background_sigma)},
                  {"seed", std::to_string(spec.seed)}};
  for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
    config.emplace_back("block." + std::to_string(i + 1), format_block(spec.blocks[i]));
  }
  write_manifest(ctx, "synth", {{"spec", opt.spec.string()}}, std::move(config), spec.seed);

  const auto [dataset, truth] = generate_synthetic(spec);
  write_csv(dataset, ctx.global.out_dir / "dataset.csv");
  StateField labels(dataset.locations(), dataset.num_years());
  labels.z = truth.labels;
  write_state_csv(labels, dataset, ctx.global.out_dir / "truth.csv", false);
  ctx.info("wrote " + std::to_string(dataset.locations()) + " locations x " +
           std::to_string(dataset.num_years()) + " years to " + ctx.global.out_dir.string());
}

void cmd_lwa(const Context& ctx, const LwaOptions& opt) {
  if (!(opt.k > 0.0)) throw Error(ErrorCode::InvalidParameter, "--k must be positive");
  write_manifest(ctx, "lwa", {{"data", opt.data.string()}},
                 {{"spacing", fmt(opt.spacing)}, {"k", fmt(opt.k)}}, std::nullopt);
  const auto dataset = load_csv(opt.data, opt.spacing);
  const auto stats = location_stats(dataset);
  warn_degenerate(ctx, stats);
  const auto z0 = lwa_assign(dataset, stats, opt.k);
  const auto sets = widespread_year_sets(z0);
  warn_year_sets(ctx, sets);

  write_state_csv(z0, dataset, ctx.global.out_dir / "z0.csv");
  write_text(ctx.global.out_dir / "year_sets.json", to_json(sets, dataset.years));
  auto out = csv::open_output(ctx.global.out_dir / "location_stats.csv");
  out << "location_id,mu,sigma\n";
  for (std::size_t s = 0; s < dataset.locations(); ++s) {
    out << dataset.labels[s] << ',' << fmt(stats.mu[s]) << ',' << fmt(stats.sigma[s]) << '\n';
  }
  out << "aimr," << fmt(stats.mu_aimr) << ',' << fmt(stats.sigma_aimr) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed: location_stats.csv");
}

namespace {

RunConfig resolve_fit_config(const Context& ctx, const FitOptions& opt) {
  KeyValueConfig kv;
  if (opt.config) kv = KeyValueConfig::load(*opt.config);
  require_run_keys(kv);
  RunConfig rc{parse_mrf_config(kv), parse_gibbs_config(kv)};
  if (opt.sweeps) rc.gibbs.sweeps = *opt.sweeps;
  if (opt.burn_in) rc.gibbs.burn_in = *opt.burn_in;
  if (opt.thin) rc.gibbs.thin = *opt.thin;
  if (opt.scan) rc.gibbs.scan = parse_scan_order(*opt.scan);
  if (opt.threads) rc.gibbs.threads = *opt.threads;
  if (ctx.global.seed) rc.gibbs.seed = *ctx.global.seed;
  validate(rc.gibbs);
  return rc;
}

}  // namespace

void cmd_fit(const Context& ctx, const FitOptions& opt) {
  const auto rc = resolve_fit_config(ctx, opt);
  Pairs inputs = {{"data", opt.data.string()}};
  if (opt.config) inputs.emplace_back("config", opt.config->string());
  auto config = snapshot(rc.mrf, rc.gibbs);
  config.emplace_back("spacing", fmt(opt.spacing));
  write_manifest(ctx, "fit", std::move(inputs), std::move(config), rc.gibbs.seed);

  const auto dataset = load_csv(opt.data, opt.spacing);
  const auto model = build_model(dataset, rc.mrf);
  warn_degenerate(ctx, model.stats);
  if (!rc.mrf.has_coherence()) {
    ctx.warn("no coherence enabled; the model reduces to location-wise Gaussian emissions");
  }
  const auto summary = gibbs_run(model, rc.gibbs, model.lwa);
  if (!means_ordered(summary.params)) {
    ctx.warn("final state means are not ordered mu_1 >= mu_3 >= mu_2 at every location");
  }

  const auto& dir = ctx.global.out_dir;
  write_text(dir / "config.txt", format_mrf_config(rc.mrf));
  write_state_csv(model.lwa, dataset, dir / "z0.csv");
  write_state_csv(map_estimate(summary), dataset, dir / "map.csv");
  write_marginals_csv(summary, dataset, dir / "marginals.csv");
  write_trace_csv(summary, dir / "trace.csv");
  ctx.info("collected " + std::to_string(summary.counts.n_samples) + " samples; MAP written to " +
           (dir / "map.csv").string());
}

void cmd_detect(const Context& ctx, const DetectOptions& opt) {
  if (opt.min_size < 1) throw Error(ErrorCode::InvalidParameter, "--min-size must be >= 1");
  Pairs inputs = {{"field", opt.field.string()}, {"data", opt.data.string()}};
  if (opt.ref) inputs.emplace_back("ref", opt.ref->string());
  write_manifest(ctx, "detect", std::move(inputs),
                 {{"min_size", std::to_string(opt.min_size)},
                  {"top", std::to_string(opt.top)},
                  {"spacing", fmt(opt.spacing)}},
                 std::nullopt);

  const auto dataset = load_csv(opt.data, opt.spacing);
  const auto z = load_state_csv(opt.field, dataset);
  const auto stats = location_stats(dataset);
  const auto sets = widespread_year_sets(lwa_assign(dataset, stats));

  auto anomalies = extract_anomalies(z, dataset.grid);
  annotate_intensity(anomalies, dataset, stats);
  std::erase_if(anomalies, [&](const Anomaly& a) { return a.st_size < opt.min_size; });

  const auto& dir = ctx.global.out_dir;
  write_anomalies_csv(anomalies, dir / "anomalies.csv");
  write_membership_csv(anomalies, dataset, dir / "membership.csv");
  write_text(dir / "stats.json", to_json(aggregate_stats(anomalies, opt.min_size)));
  write_text(dir / "correlations.json", to_json(size_correlations(anomalies)));
  write_text(dir / "year_stats.json", to_json(year_assignment_stats(z, sets)));
  write_text(dir / "overlap.json", to_json(overlap_report(z, sets), dataset.years));
  if (opt.ref) {
    write_text(dir / "gain_loss.json", to_json(gain_loss(z, load_state_csv(*opt.ref, dataset))));
  }

  std::vector<const Anomaly*> order;
  for (const auto& a : anomalies) order.push_back(&a);
  std::stable_sort(order.begin(), order.end(),
                   [](const Anomaly* a, const Anomaly* b) { return a->st_size > b->st_size; });
  order.resize(std::min(order.size(), opt.top));
  for (const Anomaly* a : order) {
    write_text(dir / "cases" / ("anomaly_" + std::to_string(a->id) + ".json"),
               to_json(case_report(*a, dataset, stats)));
  }
  ctx.info(std::to_string(anomalies.size()) + " anomalies written to " +
           (dir / "anomalies.csv").string());
}

void cmd_sweep(const Context& ctx, const SweepOptions& opt) {
  const auto kv = KeyValueConfig::load(opt.spec);
  require_run_keys(kv, {"settings"});
  const auto base = parse_mrf_config(kv);
  auto gibbs = parse_gibbs_config(kv);
  if (ctx.global.seed) gibbs.seed = *ctx.global.seed;
  validate(gibbs);
  std::vector<SweepSetting> settings;
  for (const auto& name : setting_names(kv)) settings.push_back(resolve_setting(name, base));
  if (settings.empty()) throw Error(ErrorCode::InvalidConfig, "settings: no settings listed");

  auto config = snapshot(base, gibbs);
  std::string list;
  for (const auto& s : settings) list += (list.empty() ? "" : ",") + s.name;
  config.emplace_back("settings", list);
  config.emplace_back("spacing", fmt(opt.spacing));
  write_manifest(ctx, "sweep", {{"data", opt.data.string()}, {"spec", opt.spec.string()}},
                 std::move(config), gibbs.seed);

  const auto dataset = load_csv(opt.data, opt.spacing);
  const auto stats = location_stats(dataset);
  const auto z0 = lwa_assign(dataset, stats);
  const auto sets = widespread_year_sets(z0);

  auto out = csv::open_output(ctx.global.out_dir / "sweep.csv");
  out << sweep_header();
  for (const auto& setting : settings) {
    StateField z = z0;
    if (!setting.lwa) {
      const auto model = build_model(dataset, setting.mrf);
      z = map_estimate(gibbs_run(model, gibbs, model.lwa));
    }
    write_state_csv(z, dataset, ctx.global.out_dir / "maps" / (setting.name + ".csv"));
    auto anomalies = extract_anomalies(z, dataset.grid);
    annotate_intensity(anomalies, dataset, stats);
    SweepRow row{setting, gain_loss(z, z0), year_assignment_stats(z, sets),
                 aggregate_stats(anomalies, 1), aggregate_stats(anomalies, 2)};
    out << sweep_line(row) << std::flush;
    ctx.info(setting.name + ": " + std::to_string(row.counts.N1 + row.counts.N2) +
             " anomaly-state nodes, " + std::to_string(anomalies.size()) + " anomalies");
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: sweep.csv");
}

void cmd_render(const Context& ctx, const RenderOptions& opt) {
  if (opt.format != "svg" && opt.format != "pgm") {
    throw Error(ErrorCode::InvalidParameter, "--format must be svg or pgm");
  }
  if (opt.years.empty()) throw Error(ErrorCode::InvalidParameter, "at least one --year is required");
  Pairs inputs = {{"field", opt.field.string()}, {"data", opt.data.string()}};
  if (opt.anomalies) inputs.emplace_back("anomalies", opt.anomalies->string());
  std::string years;
  for (int y : opt.years) years += (years.empty() ? "" : ",") + std::to_string(y);
  write_manifest(ctx, "render", std::move(inputs),
                 {{"years", years},
                  {"format", opt.format},
                  {"cell", std::to_string(opt.cell)},
                  {"spacing", fmt(opt.spacing)}},
                 std::nullopt);

  const auto dataset = load_csv(opt.data, opt.spacing);
  for (int y : opt.years) {
    if (dataset.year_index(y) < 0) {
      throw Error(ErrorCode::InvalidParameter,
                  "year " + std::to_string(y) + " is outside " + std::to_string(dataset.years.front()) +
                      "-" + std::to_string(dataset.years.back()));
    }
  }
  const auto z = opt.anomalies ? load_anomaly_field(*opt.anomalies, opt.field, dataset)
                               : load_state_csv(opt.field, dataset);
  for (int y : opt.years) {
    const auto states = year_slice(z, static_cast<std::size_t>(dataset.year_index(y)));
    const auto path = ctx.global.out_dir / ("map_" + std::to_string(y) + "." + opt.format);
    write_text(path, opt.format == "svg" ? render_svg(dataset.grid, states, opt.cell)
                                         : render_pgm(dataset.grid, states, opt.cell));
    ctx.info("wrote " + path.string());
  }
}

}  // namespace mrfanom::cli
