#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "mrfanom/mrf.hpp"

namespace mrfanom {

using Distribution = std::array<double, 3>;  // indexed by slot(state)

/// Node visiting schedule within a sweep.
///
///   raster   every location-year node in location-major order, then every
///            AIMR node (default; deterministic)
///   random   S*T + T nodes drawn uniformly with replacement
///   colored  location-year nodes grouped into 8 colour classes by
///            (row, col, year) parity; nodes of one class share no edge and
///            are updated concurrently, classes serially, then AIMR nodes
enum class ScanOrder { Raster, Random, Colored };

struct GibbsConfig {
  int sweeps = 2000;
  int burn_in = 500;
  int thin = 5;
  std::uint64_t seed = 1;
  bool reestimate_means = true;
  ScanOrder scan = ScanOrder::Raster;
  unsigned threads = 0;  // colored scan only; 0 = hardware concurrency
};

/// Throws InsufficientSamples when no sweep would be collected and
/// InvalidParameter for non-positive thin or negative counts.
void validate(const GibbsConfig& config);

/// Sweeps whose state is recorded: burn_in, burn_in + thin, ...
std::size_t collected_samples(const GibbsConfig& config);

std::string_view to_string(ScanOrder scan) noexcept;
ScanOrder parse_scan_order(std::string_view text);

/// Full conditional of Z[s][t] given everything else (node potential, AIMR
/// link, spatial neighbours of the same year, the previous and next year at
/// the same location, and the Gaussian emission). Evaluated in log space and
/// normalised. Throws NumericalError if a weight is not finite.
Distribution conditional_local(const MrfModel& model, const StateField& z,
                               const EmissionParams& params, LocationId s, std::size_t t);

/// Full conditional of the AIMR node of year t: node potential,
/// exp(n_q / S) from the links to that year's locations, and the emission of
/// the AIMR value. There are no AIMR-to-AIMR edges.
Distribution conditional_aimr(const MrfModel& model, const StateField& z,
                              const EmissionParams& params, std::size_t t);

/// Per-node visit counts of collected samples.
struct SampleAccumulator {
  Field<std::array<std::uint32_t, 3>> local;
  std::vector<std::array<std::uint32_t, 3>> aimr;
  std::size_t n_samples = 0;

  SampleAccumulator() = default;
  SampleAccumulator(std::size_t locations, std::size_t years)
      : local(locations, years, {0, 0, 0}), aimr(years, {0, 0, 0}) {}

  void record(const StateField& z);
};

struct PosteriorSummary {
  SampleAccumulator counts;
  Field<Distribution> marginal;
  std::vector<Distribution> aimr_marginal;
  StateField map_field;
  std::vector<double> trace;  // log-likelihood after each sweep
  EmissionParams params;      // parameters after the final sweep
};

/// Per-node mode of the collected samples; ties resolve to state 3, then 1,
/// then 2. Throws InsufficientSamples for an empty accumulator.
StateField map_estimate(const SampleAccumulator& counts);
StateField map_estimate(const PosteriorSummary& summary);

/// Mode of a single count triple with the same tie-break.
State mode_of(const std::array<std::uint32_t, 3>& counts) noexcept;
/// Argmax of a distribution with the same tie-break.
State mode_of(const Distribution& p) noexcept;

/// Optional instrumentation; `on_conditional` sees every distribution sampled from.
struct GibbsHooks {
  std::function<void(const Distribution&)> on_conditional;
};

/// Runs one Gibbs chain from `init`.
///
/// Per sweep: sample every node per the scan order, then (when
/// `reestimate_means`) recompute the state means, then log the
/// log-likelihood. Sweeps from burn_in on, every thin-th, are recorded.
/// Emission spreads are estimated once from the data and initial means from
/// `init`, unless `initial_params` is given (with `reestimate_means` off those
/// parameters stay fixed for the whole run). Serial scans are deterministic
/// for a fixed seed; the colored scan is deterministic for a fixed seed
/// regardless of thread count. Throws DegenerateEmission for a zero spread.
PosteriorSummary gibbs_run(const MrfModel& model, const GibbsConfig& config,
                           const StateField& init,
                           const std::optional<EmissionParams>& initial_params = std::nullopt,
                           const GibbsHooks& hooks = {});

/// Convenience overload resolving the model first.
PosteriorSummary gibbs_run(const RainfallDataset& dataset, const MrfConfig& mrf_config,
                           const GibbsConfig& config, const StateField& init);

/// Exact posterior by enumerating every joint assignment.
struct ExactResult {
  StateField map;            // joint argmax of the log-likelihood
  double map_log_likelihood = 0.0;
  Field<Distribution> marginal;
  std::vector<Distribution> aimr_marginal;
};

inline constexpr std::size_t kMaxExactNodes = 16;

/// Throws TooLarge when S*T + T exceeds kMaxExactNodes.
ExactResult exact_enumerate(const MrfModel& model, const EmissionParams& params);

/// Per-node argmax of exact marginals (ties as in map_estimate).
StateField marginal_mode(const Field<Distribution>& marginal,
                         const std::vector<Distribution>& aimr_marginal);

/// `location_id,year,p1,p2,p3`; AIMR rows use the token `aimr` as location_id.
void write_marginals_csv(const PosteriorSummary& summary, const RainfallDataset& dataset,
                         const std::filesystem::path& path);

/// `sweep,loglik`.
void write_trace_csv(const PosteriorSummary& summary, const std::filesystem::path& path);

}  // namespace mrfanom
