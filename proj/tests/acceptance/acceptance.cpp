// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <mrfanom/anomaly.hpp>
#include <mrfanom/inference.hpp>
#include <mrfanom/synthetic.hpp>

#include "support/fixtures.hpp"
#include "support/union_find.hpp"

using namespace mrfanom;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// Planted-anomaly fixture: 20x20 grid, 50 years, six 2-sigma blocks.
// ---------------------------------------------------------------------------

constexpr double kLambda = 2.75;

SyntheticSpec planted_spec() {
  SyntheticSpec s;
  s.rows = 20;
  s.cols = 20;
  s.years = 50;
  s.first_year = 1901;
  s.background_mu = 10.0;
  s.background_sigma = 1.0;
  s.seed = 2024;
  auto block = [&](Sign sign, int r0, int c0, int y0, int nr, int nc, int ny) {
    s.blocks.push_back({sign, r0, r0 + nr - 1, c0, c0 + nc - 1, y0, y0 + ny - 1, 2.0});
  };
  block(Sign::Positive, 1, 1, 2, 3, 3, 3);
  block(Sign::Negative, 1, 8, 8, 4, 4, 4);
  block(Sign::Positive, 1, 14, 15, 5, 5, 4);
  block(Sign::Negative, 8, 1, 20, 5, 5, 5);
  block(Sign::Positive, 9, 9, 30, 6, 6, 5);
  block(Sign::Negative, 12, 14, 40, 6, 6, 5);
  return s;
}

double f1_score(const Field<State>& truth, const Field<State>& pred) {
  double tp = 0, fp = 0, fn = 0;
  const auto a = truth.flat(), b = pred.flat();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool hit = b[i] == a[i];
    if (is_anomalous(b[i])) (hit ? tp : fp) += 1;
    if (is_anomalous(a[i]) && !hit) fn += 1;
  }
  return 2 * tp / (2 * tp + fp + fn);
}

MrfConfig stc(SpatialMode mode, double P) {
  MrfConfig c;
  c.spatial.mode = mode;
  c.spatial.lambda = kLambda;
  c.spatial.D = 0.0;
  c.temporal.P = P;
  return c;
}

struct FitResult {
  StateField map;
  GainLossReport counts;
  AnomalyStats stats;
  double seconds = 0;
};

struct Fixture {
  RainfallDataset dataset;
  GroundTruth truth;
  LocationStats stats;
  StateField z0;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    auto [ds, gt] = generate_synthetic(planted_spec());
    Fixture out{std::move(ds), std::move(gt), {}, {}};
    out.stats = location_stats(out.dataset);
    out.z0 = lwa_assign(out.dataset, out.stats);
    return out;
  }();
  return f;
}

FitResult fit(const MrfConfig& cfg, const GibbsHooks& hooks = {}) {
  const auto& fx = fixture();
  const auto start = Clock::now();
  const auto model = build_model(fx.dataset, cfg);
  const auto summary = gibbs_run(model, GibbsConfig{}, model.lwa, std::nullopt, hooks);
  FitResult r;
  r.map = map_estimate(summary);
  r.seconds = seconds_since(start);
  auto anomalies = extract_anomalies(r.map, fx.dataset.grid);
  annotate_intensity(anomalies, fx.dataset, fx.stats);
  r.counts = gain_loss(r.map, fx.z0);
  r.stats = aggregate_stats(anomalies);
  return r;
}

const std::vector<double> kSweepP{0.5, 0.75, 0.9, 0.99};

const std::vector<FitResult>& p_sweep() {
  static const std::vector<FitResult> runs = [] {
    std::vector<FitResult> out;
    for (double P : kSweepP) out.push_back(fit(stc(SpatialMode::Prop, P)));
    return out;
  }();
  return runs;
}

double mean_pair(const std::optional<double>& a, const std::optional<double>& b) {
  return (a.value_or(0.0) + b.value_or(0.0)) / 2.0;
}

/// Monotone in the given direction, with at most one adjacent inversion of at most 5%.
bool trend_holds(const std::vector<double>& v, bool increasing) {
  int inversions = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double step = increasing ? v[i] - v[i - 1] : v[i - 1] - v[i];
    if (step >= 0) continue;
    ++inversions;
    if (-step > 0.05 * std::max(std::abs(v[i - 1]), std::abs(v[i]))) return false;
  }
  return inversions <= 1;
}

std::string series(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : " ") + fmt("%.3f", x);
  return out;
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

Outcome criterion1() {
  const auto start = Clock::now();
  const std::vector<std::pair<int, int>> footprints{{1, 1}, {1, 2}, {1, 3}, {2, 2}};
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  std::size_t nodes = 0, mode_match = 0;
  for (int instance = 0; instance < 50; ++instance) {
    const auto [rows, cols] = footprints[std::size_t(instance) % footprints.size()];
    const std::size_t S = std::size_t(rows * cols);
    const std::size_t T = std::max<std::size_t>(2, 12 / (S + 1) - (instance % 2));
    const auto ds = test::random_dataset(rows, cols, T, rng);

    MrfConfig cfg;
    const SpatialMode modes[] = {SpatialMode::Off, SpatialMode::Unif, SpatialMode::Prop, SpatialMode::Anml,
                                 SpatialMode::Mxd};
    cfg.spatial.mode = modes[instance % 5];
    cfg.spatial.C_uniform = 0.2 + 1.3 * u(rng);
    cfg.spatial.D = cfg.spatial.mode == SpatialMode::Mxd ? 0.5 * u(rng) : 0.0;
    cfg.spatial.lambda = 0.5 + 1.5 * u(rng);
    if (u(rng) < 0.8) cfg.temporal.P = 0.1 + 0.8 * u(rng);
    else cfg.temporal.P.reset();
    cfg.node = {NodeScheme::Custom, 0.5 + 1.5 * u(rng), 0.5 + 1.5 * u(rng), 0.5 + 1.5 * u(rng)};
    cfg.aimr_link = u(rng) < 0.7;

    const auto model = build_model(ds, cfg);
    const auto params = estimate_emissions(ds, model.lwa, EmissionSpread::Pooled);
    GibbsConfig g;
    g.sweeps = 20000;
    g.burn_in = 1000;
    g.thin = 1;
    g.seed = std::uint64_t(instance) + 1;
    g.reestimate_means = false;
    const auto sampled = gibbs_run(model, g, model.lwa, params);
    const auto exact = exact_enumerate(model, params);

    const auto sampled_mode = marginal_mode(sampled.marginal, sampled.aimr_marginal);
    const auto exact_mode = marginal_mode(exact.marginal, exact.aimr_marginal);
    for (std::size_t i = 0; i < exact.marginal.size(); ++i) {
      for (int k = 0; k < 3; ++k)
        worst = std::max(worst, std::abs(sampled.marginal.flat()[i][k] - exact.marginal.flat()[i][k]));
      mode_match += sampled_mode.z.flat()[i] == exact_mode.z.flat()[i];
      ++nodes;
    }
    for (std::size_t t = 0; t < T; ++t) {
      for (int k = 0; k < 3; ++k)
        worst = std::max(worst, std::abs(sampled.aimr_marginal[t][k] - exact.aimr_marginal[t][k]));
      mode_match += sampled_mode.z_aimr[t] == exact_mode.z_aimr[t];
      ++nodes;
    }
  }
  const double secs = seconds_since(start);
  const double match = double(mode_match) / double(nodes);
  return {worst <= 0.03 && match >= 0.95 && secs < 120.0,
          fmt("50 instances, %zu nodes: max |marginal error| %.4f (<= 0.03), mode match %.1f%% (>= 95%%), %.1f s",
              nodes, worst, 100 * match, secs)};
}

Outcome criterion2_and_3(Outcome& c3) {
  double worst = 0.0;
  std::size_t seen = 0;
  GibbsHooks hooks;
  hooks.on_conditional = [&](const Distribution& p) {
    worst = std::max(worst, std::abs(p[0] + p[1] + p[2] - 1.0));
    ++seen;
  };
  const auto r = fit(stc(SpatialMode::Prop, 0.9), hooks);
  const auto& fx = fixture();
  const double f1_mrf = f1_score(fx.truth.labels, r.map.z);
  const double f1_lwa = f1_score(fx.truth.labels, fx.z0.z);
  c3 = {f1_mrf >= 0.80 && f1_mrf > f1_lwa && r.seconds < 60.0,
        fmt("MRF-STC-0.9 prop F1 %.3f (>= 0.80), LWA F1 %.3f, fit %.1f s", f1_mrf, f1_lwa, r.seconds)};
  return {worst <= 1e-12 && seen > 0,
          fmt("%zu conditionals sampled, max |sum - 1| = %.2e", seen, worst)};
}

Outcome criterion4() {
  const auto& runs = p_sweep();
  std::vector<double> n, ts, ss;
  for (const auto& r : runs) {
    n.push_back(double(r.counts.N1 + r.counts.N2));
    ts.push_back(mean_pair(r.stats.TSP, r.stats.TSN));
    ss.push_back(mean_pair(r.stats.SSP, r.stats.SSN));
  }
  const bool a = trend_holds(n, false), b = trend_holds(ts, true), c = trend_holds(ss, false);
  return {a && b && c, fmt("P = 0.5/0.75/0.9/0.99: (a) N1+N2 [%s] %s; (b) mean TS [%s] %s; (c) mean SS [%s] %s",
                           series(n).c_str(), a ? "ok" : "violated", series(ts).c_str(), b ? "ok" : "violated",
                           series(ss).c_str(), c ? "ok" : "violated")};
}

Outcome criterion5() {
  const auto& runs = p_sweep();
  const auto& lo = runs.front().stats;
  const auto& hi = runs.back().stats;
  const bool ok = lo.IP && hi.IP && lo.IN && hi.IN && *hi.IP >= *lo.IP && *hi.IN <= *lo.IN;
  return {ok, fmt("IP %.4f -> %.4f, IN %.4f -> %.4f (P = 0.5 -> 0.99)", lo.IP.value_or(NAN), hi.IP.value_or(NAN),
                  lo.IN.value_or(NAN), hi.IN.value_or(NAN))};
}

Outcome criterion6() {
  const auto& fx = fixture();
  SpatialPotentialSpec prop;
  prop.mode = SpatialMode::Prop;
  prop.lambda = kLambda;
  const auto edges = estimate_spatial_potentials(fx.dataset, fx.z0, prop);
  double mean_c = 0;
  for (double c : edges.C) mean_c += c;
  mean_c /= double(edges.C.size());

  auto unif = stc(SpatialMode::Unif, 0.9);
  unif.spatial.C_uniform = mean_c;
  const auto unif_run = fit(unif);
  const double n_unif = double(unif_run.counts.N1 + unif_run.counts.N2);
  const auto& prop_run = p_sweep()[2];
  const double n_prop = double(prop_run.counts.N1 + prop_run.counts.N2);
  const auto anml_run = fit(stc(SpatialMode::Anml, 0.9));
  const double n_anml = double(anml_run.counts.N1 + anml_run.counts.N2);

  const double v[] = {n_unif, n_prop, n_anml};
  double worst = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) worst = std::max(worst, std::abs(v[i] - v[j]) / std::max(v[i], v[j]));
  return {worst <= 0.15, fmt("anomaly-state nodes unif(C=%.3f) %.0f, prop %.0f, anml %.0f; max pairwise gap %.1f%%",
                             mean_c, n_unif, n_prop, n_anml, 100 * worst)};
}

Outcome criterion7() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 15);
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t S = std::size_t(dim(rng)), T = std::size_t(dim(rng));
    const auto z = test::random_field(S, T, rng, 0.3 + 0.05 * (i % 10));
    const auto ref = test::random_field(S, T, rng, 0.5);
    const auto r = gain_loss(z, ref);
    std::size_t n1_ref = 0, n2_ref = 0;
    for (State v : ref.z.flat()) n1_ref += v == State::Positive, n2_ref += v == State::Negative;
    if (r.N1 + r.NL1 != n1_ref + r.NG1 || r.N2 + r.NL2 != n2_ref + r.NG2) ++failures;
  }
  return {failures == 0, fmt("100 random pairs, %d identity violations", failures)};
}

Outcome criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> dim(1, 20);
  int mismatches = 0;
  std::size_t components = 0;
  for (int i = 0; i < 25; ++i) {
    const int rows = i == 0 ? 20 : dim(rng), cols = i == 0 ? 20 : dim(rng);
    const std::size_t T = i == 0 ? 20 : std::size_t(dim(rng));
    std::vector<Coordinate> coords;
    std::vector<std::int64_t> labels;
    std::bernoulli_distribution keep(i % 3 == 2 ? 0.8 : 1.0);  // some irregular domains
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        if (keep(rng) || coords.empty()) coords.push_back({double(r), double(c)}), labels.push_back(r * cols + c);
    const auto grid = build_grid(coords);
    const auto z = test::random_field(grid.size(), T, rng, 0.35 + 0.02 * i);
    const auto extracted = extract_anomalies(z, grid);
    std::vector<test::RefComponent> mine;
    for (const auto& a : extracted) {
      test::RefComponent c{a.state(), {}};
      for (const auto& n : a.nodes) c.nodes.emplace_back(n.s, n.t);
      std::sort(c.nodes.begin(), c.nodes.end());
      mine.push_back(std::move(c));
    }
    std::sort(mine.begin(), mine.end());
    const auto ref = test::union_find_components(z, grid);
    components += ref.size();
    if (mine != ref) ++mismatches;
  }
  return {mismatches == 0, fmt("25 random fields (up to 20x20x20), %zu components, %d mismatching fields",
                               components, mismatches)};
}

Outcome criterion9() {
  const auto ds = test::grid_dataset(1, 1, {{5.84, 2.52}});  // climatological mean 4.18
  const auto stats = location_stats(ds);
  StateField z(1, 2);
  z.z(0, 0) = State::Positive;
  auto anomalies = extract_anomalies(z, ds.grid);
  annotate_intensity(anomalies, ds, stats);
  const auto report = case_report(anomalies.at(0), ds, stats);
  const double i = report.intensity;
  return {std::abs(i - 1.397) <= 0.005 && std::abs(report.long_term_mean - 4.18) < 1e-9,
          fmt("mu = %.2f, y = %.2f, intensity %.4f (1.397 +/- 0.005)", report.long_term_mean,
              report.years.at(0).observed_mean, i)};
}

Outcome criterion10() {
  const auto& fx = fixture();
  test::TempDir dir;
  auto run_once = [&](const std::string& sub) {
    const auto model = build_model(fx.dataset, stc(SpatialMode::Prop, 0.9));
    GibbsConfig g;
    g.sweeps = 400;
    g.burn_in = 100;
    g.seed = 77;
    const auto summary = gibbs_run(model, g, model.lwa);
    write_state_csv(map_estimate(summary), fx.dataset, dir / (sub + "_map.csv"));
    write_marginals_csv(summary, fx.dataset, dir / (sub + "_marginals.csv"));
    write_trace_csv(summary, dir / (sub + "_trace.csv"));
  };
  run_once("a");
  run_once("b");
  bool identical = true;
  for (const char* f : {"_map.csv", "_marginals.csv", "_trace.csv"})
    identical &= test::read_file(dir / (std::string("a") + f)) == test::read_file(dir / (std::string("b") + f));

  SyntheticSpec big;
  big.rows = 21;
  big.cols = 17;  // 357 locations
  big.years = 111;
  big.background_mu = 4.0;
  big.background_sigma = 0.8;
  big.seed = 357;
  big.blocks.push_back({Sign::Positive, 3, 8, 2, 9, 10, 14, 2.0});
  big.blocks.push_back({Sign::Negative, 12, 18, 5, 12, 60, 66, 2.0});
  const auto [ds, truth] = generate_synthetic(big);
  const auto start = Clock::now();
  const auto model = build_model(ds, stc(SpatialMode::Prop, 0.9));
  GibbsConfig g;
  g.sweeps = 1000;
  g.burn_in = 250;
  const auto summary = gibbs_run(model, g, model.lwa);
  const auto map = map_estimate(summary);
  const double secs = seconds_since(start);
  return {identical && secs < 300.0 && ds.locations() == 357,
          fmt("fixed-seed outputs %s; %zu locations x %zu years, 1000 sweeps in %.1f s (< 300 s)",
              identical ? "byte-identical" : "DIFFER", ds.locations(), ds.num_years(), secs)};
}

}  // namespace

int main() {
  std::vector<std::pair<int, std::function<Outcome()>>> criteria;
  Outcome c3;
  criteria.emplace_back(1, criterion1);
  criteria.emplace_back(2, [&] { return criterion2_and_3(c3); });
  criteria.emplace_back(3, [&] { return c3; });
  criteria.emplace_back(4, criterion4);
  criteria.emplace_back(5, criterion5);
  criteria.emplace_back(6, criterion6);
  criteria.emplace_back(7, criterion7);
  criteria.emplace_back(8, criterion8);
  criteria.emplace_back(9, criterion9);
  criteria.emplace_back(10, criterion10);

  int failed = 0;
  for (const auto& [id, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("CRITERION %d %s: %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
