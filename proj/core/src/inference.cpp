#include "mrfanom/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>

#include "mrfanom/csv.hpp"
#include "mrfanom/error.hpp"

namespace mrfanom {

void validate(const GibbsConfig& config) {
  if (config.sweeps < 0 || config.burn_in < 0) {
    throw Error(ErrorCode::InvalidParameter, "sweeps and burn-in must be non-negative");
  }
  if (config.thin < 1) throw Error(ErrorCode::InvalidParameter, "thin must be at least 1");
  if (config.sweeps <= config.burn_in) {
    throw Error(ErrorCode::InsufficientSamples,
                "sweeps (" + std::to_string(config.sweeps) + ") must exceed burn-in (" +
                    std::to_string(config.burn_in) + ")");
  }
}

std::size_t collected_samples(const GibbsConfig& config) {
  if (config.sweeps <= config.burn_in || config.thin < 1) return 0;
  return static_cast<std::size_t>((config.sweeps - config.burn_in - 1) / config.thin + 1);
}

std::string_view to_string(ScanOrder scan) noexcept {
  switch (scan) {
    case ScanOrder::Raster: return "raster";
    case ScanOrder::Random: return "random";
    case ScanOrder::Colored: return "colored";
  }
  return "raster";
}

ScanOrder parse_scan_order(std::string_view text) {
  for (auto scan : {ScanOrder::Raster, ScanOrder::Random, ScanOrder::Colored}) {
    if (to_string(scan) == text) return scan;
  }
  throw Error(ErrorCode::InvalidConfig, "gibbs.scan: unknown scan order '" + std::string(text) + "'");
}

namespace {

using LogWeights = std::array<double, 3>;

LogWeights local_log_weights(const MrfModel& model, const StateField& z,
                             const EmissionParams& params, std::size_t s, std::size_t t) {
  const auto& data = *model.dataset;
  const auto sid = static_cast<LocationId>(s);
  const std::size_t T = data.num_years();
  LogWeights w{};

  const double y = data.y(s, t);
  const double sigma = params.sigma_loc[s];
  const auto& mu = params.mu_state[s];
  for (std::size_t p = 0; p < 3; ++p) {
    const State state = state_from_slot(p);
    const double d = (y - mu[p]) / sigma;
    w[p] = model.nodes.log_value(sid, t, state) - 0.5 * d * d;
  }
  w[slot(z.z_aimr[t])] += model.aimr_gain;

  if (model.spatial_enabled()) {
    const auto& edges = model.edges;
    const std::size_t begin = edges.offsets[s];
    const std::size_t end = edges.offsets[s + 1];
    const double base = edges.D * static_cast<double>(end - begin);
    std::array<double, 3> extra{};
    for (std::size_t k = begin; k < end; ++k) {
      const State other = z.z(static_cast<std::size_t>(edges.neighbor[k]), t);
      extra[slot(other)] += edges.C[k] - edges.D;
    }
    for (std::size_t p = 0; p < 3; ++p) w[p] += base + extra[p];
  }

  if (model.temporal_enabled()) {
    const auto series = z.z.series(s);
    const auto add_temporal = [&](State other) {
      for (std::size_t p = 0; p < 3; ++p) {
        w[p] += p == slot(other) ? model.log_p_same : model.log_p_diff;
      }
    };
    if (t > 0) add_temporal(series[t - 1]);
    if (t + 1 < T) add_temporal(series[t + 1]);
  }
  return w;
}

LogWeights aimr_log_weights(const MrfModel& model, const StateField& z,
                            const EmissionParams& params, std::size_t t) {
  const auto& data = *model.dataset;
  std::array<std::size_t, 3> n{};
  for (std::size_t s = 0; s < data.locations(); ++s) ++n[slot(z.z(s, t))];

  LogWeights w{};
  const double y = data.aimr[t];
  for (std::size_t q = 0; q < 3; ++q) {
    const double d = (y - params.mu_aimr_state[q]) / params.sigma_aimr;
    w[q] = model.nodes.log_aimr(state_from_slot(q)) +
           static_cast<double>(n[q]) * model.aimr_gain - 0.5 * d * d;
  }
  return w;
}

Distribution normalise(const LogWeights& w) {
  const double m = std::max({w[0], w[1], w[2]});
  if (!std::isfinite(m)) throw Error(ErrorCode::NumericalError, "non-finite conditional weight");
  Distribution p{};
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!std::isfinite(w[i]) && !(w[i] < 0)) {
      throw Error(ErrorCode::NumericalError, "non-finite conditional weight");
    }
    p[i] = std::exp(w[i] - m);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

void check_node(const MrfModel& model, const StateField& z, const EmissionParams& params) {
  const auto& data = *model.dataset;
  if (z.locations() != data.locations() || z.years() != data.num_years() ||
      params.mu_state.size() != data.locations()) {
    throw Error(ErrorCode::ShapeError, "assignment or parameters do not match the model");
  }
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

State draw(const Distribution& p, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  if (u < p[0]) return State::Positive;
  if (u < p[0] + p[1]) return State::Negative;
  return State::Normal;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct NodeRef {
  std::uint32_t s;
  std::uint32_t t;
};

constexpr std::size_t kColorChunk = 512;

class Sampler {
 public:
  Sampler(const MrfModel& model, const GibbsConfig& config, const GibbsHooks& hooks)
      : model_(model), config_(config), hooks_(hooks), rng_(config.seed) {
    if (config.scan == ScanOrder::Colored) build_colors();
  }

  void sweep(StateField& z, const EmissionParams& params, int sweep_index) {
    switch (config_.scan) {
      case ScanOrder::Raster: raster(z, params); break;
      case ScanOrder::Random: random(z, params); break;
      case ScanOrder::Colored: colored(z, params, sweep_index); break;
    }
  }

 private:
  void observe(const Distribution& p) {
    if (!hooks_.on_conditional) return;
    if (config_.scan == ScanOrder::Colored) {
      std::lock_guard lock(hook_mutex_);
      hooks_.on_conditional(p);
    } else {
      hooks_.on_conditional(p);
    }
  }

  void update_local(StateField& z, const EmissionParams& params, std::size_t s, std::size_t t,
                    std::mt19937_64& rng) {
    const auto p = normalise(local_log_weights(model_, z, params, s, t));
    observe(p);
    z.z(s, t) = draw(p, rng);
  }

  void update_aimr(StateField& z, const EmissionParams& params, std::size_t t) {
    const auto p = normalise(aimr_log_weights(model_, z, params, t));
    observe(p);
    z.z_aimr[t] = draw(p, rng_);
  }

  void raster(StateField& z, const EmissionParams& params) {
    for (std::size_t s = 0; s < z.locations(); ++s) {
      for (std::size_t t = 0; t < z.years(); ++t) update_local(z, params, s, t, rng_);
    }
    for (std::size_t t = 0; t < z.years(); ++t) update_aimr(z, params, t);
  }

  void random(StateField& z, const EmissionParams& params) {
    const std::size_t local = z.locations() * z.years();
    const std::size_t total = local + z.years();
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    for (std::size_t i = 0; i < total; ++i) {
      const std::size_t k = pick(rng_);
      if (k < local) {
        update_local(z, params, k / z.years(), k % z.years(), rng_);
      } else {
        update_aimr(z, params, k - local);
      }
    }
  }

  void build_colors() {
    const auto& data = *model_.dataset;
    for (std::size_t s = 0; s < data.locations(); ++s) {
      const auto& loc = data.grid.locations()[s];
      const std::size_t base = static_cast<std::size_t>((loc.row & 1) * 4 + (loc.col & 1) * 2);
      for (std::size_t t = 0; t < data.num_years(); ++t) {
        colors_[base + (t & 1)].push_back({static_cast<std::uint32_t>(s),
                                           static_cast<std::uint32_t>(t)});
      }
    }
  }

  void colored(StateField& z, const EmissionParams& params, int sweep_index) {
    unsigned threads = config_.threads != 0 ? config_.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, threads);
    for (std::size_t c = 0; c < colors_.size(); ++c) {
      const auto& nodes = colors_[c];
      const std::size_t chunks = (nodes.size() + kColorChunk - 1) / kColorChunk;
      std::atomic<std::size_t> next{0};
      const auto work = [&] {
        for (std::size_t chunk = next++; chunk < chunks; chunk = next++) {
          // Stream per (sweep, colour, chunk): results do not depend on thread count.
          std::mt19937_64 rng(splitmix64(config_.seed ^ splitmix64(
                                             (static_cast<std::uint64_t>(sweep_index) << 24) ^
                                             (static_cast<std::uint64_t>(c) << 20) ^ chunk)));
          const std::size_t end = std::min(nodes.size(), (chunk + 1) * kColorChunk);
          for (std::size_t i = chunk * kColorChunk; i < end; ++i) {
            update_local(z, params, nodes[i].s, nodes[i].t, rng);
          }
        }
      };
      const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
      if (workers <= 1) {
        work();
        continue;
      }
      std::vector<std::jthread> pool;
      pool.reserve(workers - 1);
      for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
      work();
    }
    for (std::size_t t = 0; t < z.years(); ++t) update_aimr(z, params, t);
  }

  const MrfModel& model_;
  const GibbsConfig& config_;
  const GibbsHooks& hooks_;
  std::mt19937_64 rng_;
  std::array<std::vector<NodeRef>, 8> colors_;
  std::mutex hook_mutex_;
};

}  // namespace

Distribution conditional_local(const MrfModel& model, const StateField& z,
                               const EmissionParams& params, LocationId s, std::size_t t) {
  check_node(model, z, params);
  if (s < 0 || static_cast<std::size_t>(s) >= z.locations()) {
    throw Error(ErrorCode::InvalidLocation, "location id " + std::to_string(s));
  }
  if (t >= z.years()) throw Error(ErrorCode::InvalidParameter, "year index out of range");
  if (!(params.sigma_loc[static_cast<std::size_t>(s)] > 0.0)) {
    throw Error(ErrorCode::DegenerateEmission, "location " + std::to_string(s) + " has zero spread");
  }
  return normalise(local_log_weights(model, z, params, static_cast<std::size_t>(s), t));
}

Distribution conditional_aimr(const MrfModel& model, const StateField& z,
                              const EmissionParams& params, std::size_t t) {
  check_node(model, z, params);
  if (t >= z.years()) throw Error(ErrorCode::InvalidParameter, "year index out of range");
  if (!(params.sigma_aimr > 0.0)) {
    throw Error(ErrorCode::DegenerateEmission, "AIMR series has zero spread");
  }
  return normalise(aimr_log_weights(model, z, params, t));
}

void SampleAccumulator::record(const StateField& z) {
  auto counts = local.flat();
  const auto states = z.z.flat();
  for (std::size_t i = 0; i < states.size(); ++i) ++counts[i][slot(states[i])];
  for (std::size_t t = 0; t < z.z_aimr.size(); ++t) ++aimr[t][slot(z.z_aimr[t])];
  ++n_samples;
}

State mode_of(const std::array<std::uint32_t, 3>& c) noexcept {
  // Preference on ties: normal, positive, negative.
  State best = State::Normal;
  std::uint32_t top = c[slot(State::Normal)];
  for (State s : {State::Positive, State::Negative}) {
    if (c[slot(s)] > top) {
      top = c[slot(s)];
      best = s;
    }
  }
  return best;
}

State mode_of(const Distribution& p) noexcept {
  State best = State::Normal;
  double top = p[slot(State::Normal)];
  for (State s : {State::Positive, State::Negative}) {
    if (p[slot(s)] > top) {
      top = p[slot(s)];
      best = s;
    }
  }
  return best;
}

StateField map_estimate(const SampleAccumulator& counts) {
  if (counts.n_samples == 0) throw Error(ErrorCode::InsufficientSamples, "no samples collected");
  StateField out(counts.local.locations(), counts.local.years());
  const auto src = counts.local.flat();
  auto dst = out.z.flat();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = mode_of(src[i]);
  for (std::size_t t = 0; t < counts.aimr.size(); ++t) out.z_aimr[t] = mode_of(counts.aimr[t]);
  return out;
}

StateField map_estimate(const PosteriorSummary& summary) { return map_estimate(summary.counts); }

PosteriorSummary gibbs_run(const MrfModel& model, const GibbsConfig& config,
                           const StateField& init,
                           const std::optional<EmissionParams>& initial_params,
                           const GibbsHooks& hooks) {
  validate(config);
  const auto& data = *model.dataset;
  if (init.locations() != data.locations() || init.years() != data.num_years()) {
    throw Error(ErrorCode::ShapeError, "initial assignment does not match dataset");
  }
  EmissionParams params = initial_params ? *initial_params
                                          : estimate_emissions(data, init,
                                                               model.config.emission_spread);
  check_node(model, init, params);
  require_positive_spread(params);

  StateField z = init;
  PosteriorSummary summary;
  summary.counts = SampleAccumulator(data.locations(), data.num_years());
  summary.trace.reserve(static_cast<std::size_t>(config.sweeps));

  Sampler sampler(model, config, hooks);
  for (int i = 0; i < config.sweeps; ++i) {
    sampler.sweep(z, params, i);
    if (config.reestimate_means) reestimate_means(params, data, z);
    summary.trace.push_back(log_likelihood(model, z, params));
    if (i >= config.burn_in && (i - config.burn_in) % config.thin == 0) summary.counts.record(z);
  }

  const double n = static_cast<double>(summary.counts.n_samples);
  summary.marginal = Field<Distribution>(data.locations(), data.num_years());
  const auto counts = summary.counts.local.flat();
  auto marginal = summary.marginal.flat();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t p = 0; p < 3; ++p) marginal[i][p] = counts[i][p] / n;
  }
  summary.aimr_marginal.resize(data.num_years());
  for (std::size_t t = 0; t < data.num_years(); ++t) {
    for (std::size_t p = 0; p < 3; ++p) {
      summary.aimr_marginal[t][p] = summary.counts.aimr[t][p] / n;
    }
  }
  summary.map_field = map_estimate(summary.counts);
  summary.params = std::move(params);
  return summary;
}

PosteriorSummary gibbs_run(const RainfallDataset& dataset, const MrfConfig& mrf_config,
                           const GibbsConfig& config, const StateField& init) {
  const auto model = build_model(dataset, mrf_config);
  return gibbs_run(model, config, init);
}

StateField marginal_mode(const Field<Distribution>& marginal,
                         const std::vector<Distribution>& aimr_marginal) {
  StateField out(marginal.locations(), marginal.years());
  const auto src = marginal.flat();
  auto dst = out.z.flat();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = mode_of(src[i]);
  for (std::size_t t = 0; t < aimr_marginal.size(); ++t) out.z_aimr[t] = mode_of(aimr_marginal[t]);
  return out;
}

void write_marginals_csv(const PosteriorSummary& summary, const RainfallDataset& dataset,
                         const std::filesystem::path& path) {
  auto out = csv::open_output(path);
  out << "location_id,year,p1,p2,p3\n";
  const auto row = [&](const Distribution& p) {
    out << csv::format(p[0]) << ',' << csv::format(p[1]) << ',' << csv::format(p[2]) << '\n';
  };
  for (std::size_t s = 0; s < summary.marginal.locations(); ++s) {
    for (std::size_t t = 0; t < summary.marginal.years(); ++t) {
      out << dataset.labels[s] << ',' << dataset.years[t] << ',';
      row(summary.marginal(s, t));
    }
  }
  for (std::size_t t = 0; t < summary.aimr_marginal.size(); ++t) {
    out << "aimr," << dataset.years[t] << ',';
    row(summary.aimr_marginal[t]);
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

void write_trace_csv(const PosteriorSummary& summary, const std::filesystem::path& path) {
  auto out = csv::open_output(path);
  out << "sweep,loglik\n";
  for (std::size_t i = 0; i < summary.trace.size(); ++i) {
    out << i + 1 << ',' << csv::format(summary.trace[i]) << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace mrfanom
