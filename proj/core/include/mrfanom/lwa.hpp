#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "mrfanom/dataset.hpp"
#include "mrfanom/state.hpp"

namespace mrfanom {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population (divide-by-N)
};

MeanStd population_mean_std(std::span<const double> values);

/// Per-location climatology over all years, and the same for the AIMR series.
struct LocationStats {
  std::vector<double> mu;
  std::vector<double> sigma;
  double mu_aimr = 0.0;
  double sigma_aimr = 0.0;

  /// Locations whose series has zero spread.
  std::vector<LocationId> degenerate() const;
};

/// Throws InsufficientYears when the dataset has fewer than two years.
LocationStats location_stats(const RainfallDataset& dataset);

/// Location-wise thresholding: state 1 when y >= mu + k*sigma, state 2 when
/// y <= mu - k*sigma, else 3. Comparisons are inclusive. A location (or the
/// AIMR series) with sigma == 0 is all-normal.
StateField lwa_assign(const RainfallDataset& dataset, const LocationStats& stats, double k = 1.0);

/// Year sets from an LWA assignment: H/L from the AIMR states, HL/LL from the
/// per-year counts of state-1/state-2 locations thresholded at mean + 1 std.
struct YearSets {
  std::vector<std::size_t> H, L, HL, LL;
  std::vector<std::size_t> n1, n2;
  double mu_n1 = 0.0, sigma_n1 = 0.0;
  double mu_n2 = 0.0, sigma_n2 = 0.0;
  /// Set when a count series has zero spread; every year then meets the
  /// (inclusive) threshold.
  bool hl_degenerate = false;
  bool ll_degenerate = false;

  double hl_threshold() const noexcept { return mu_n1 + sigma_n1; }
  double ll_threshold() const noexcept { return mu_n2 + sigma_n2; }
};

YearSets widespread_year_sets(const StateField& z0);

/// Per-year count of locations in `state`.
std::vector<std::size_t> count_per_year(const StateField& z, State state);

/// Writes `location_id,year,state`; AIMR states follow as rows whose
/// location_id is the token `aimr`.
void write_state_csv(const StateField& field, const RainfallDataset& dataset,
                     const std::filesystem::path& path, bool include_aimr = true);

/// Reads a state CSV against the dataset's locations and years. Every
/// location-year cell must be present (IncompleteGrid otherwise); AIMR rows are
/// optional and default to normal.
StateField load_state_csv(const std::filesystem::path& path, const RainfallDataset& dataset);

}  // namespace mrfanom
