#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrfanom/dataset.hpp"
#include "mrfanom/lwa.hpp"
#include "mrfanom/state.hpp"
#include "mrfanom/synthetic.hpp"

namespace mrfanom {

/// A location-year node.
struct StNode {
  LocationId s = 0;
  std::size_t t = 0;

  friend auto operator<=>(const StNode&, const StNode&) = default;
};

/// A maximal connected set of location-year nodes sharing state 1 or 2.
/// Connectivity: 8-neighbours in the same year, or the same location in
/// adjacent years.
struct Anomaly {
  std::size_t id = 0;
  Sign sign = Sign::Positive;
  std::vector<StNode> nodes;  // sorted by (location, year)
  std::size_t spatial_size = 0;
  std::size_t temporal_size = 0;
  std::size_t st_size = 0;
  double intensity = 0.0;  // filled by annotate_intensity

  State state() const noexcept { return sign == Sign::Positive ? State::Positive : State::Negative; }
  std::size_t first_year_index() const;
  std::size_t last_year_index() const;
};

/// Connected components of the state-1 and state-2 nodes (AIMR nodes are not
/// part of any anomaly). Ids are assigned in order of each component's first
/// node in year-major, location-minor scan order. Intensities are left at 0.
std::vector<Anomaly> extract_anomalies(const StateField& z, const GridIndex& grid);

/// Mean over the anomaly's nodes of y[s][t] / mu_s. Throws
/// DegenerateClimatology when a covered location has mu_s == 0.
double anomaly_intensity(const Anomaly& anomaly, const RainfallDataset& dataset,
                         const LocationStats& stats);

void annotate_intensity(std::span<Anomaly> anomalies, const RainfallDataset& dataset,
                        const LocationStats& stats);

/// Counts and per-sign means over anomalies with st_size >= min_st_size.
/// Means over an empty group are absent.
struct AnomalyStats {
  std::size_t min_st_size = 1;
  std::size_t NP = 0, NN = 0;
  std::optional<double> STSP, STSN, SSP, SSN, TSP, TSN, IP, IN;
};

AnomalyStats aggregate_stats(std::span<const Anomaly> anomalies, std::size_t min_st_size = 1);

/// Node counts of an assignment and its gains/losses against a reference.
struct GainLossReport {
  std::size_t N1 = 0, N2 = 0;
  std::size_t NG1 = 0, NG2 = 0;
  std::size_t NL1 = 0, NL2 = 0;
};

/// Throws ShapeError when the two fields differ in shape.
GainLossReport gain_loss(const StateField& z, const StateField& z_ref);

/// Aggregate-year sets and how well the model's AIMR states cover them.
struct OverlapReport {
  std::vector<std::size_t> H, L, HL, LL, ZH, ZL;
  std::optional<double> h_in_zh;   // |H ∩ ZH| / |H|
  std::optional<double> hl_in_zh;  // |HL ∩ ZH| / |HL|
  std::optional<double> l_in_zl;   // |L ∩ ZL| / |L|
  std::optional<double> ll_in_zl;  // |LL ∩ ZL| / |LL|
};

/// ZH/ZL from the AIMR states of `z_mrf`; H/L/HL/LL from `year_sets`
/// (computed on the LWA assignment).
OverlapReport overlap_report(const StateField& z_mrf, const YearSets& year_sets);

/// Mean per-year counts of state-1/state-2 locations over all years and over
/// the excess (H) / deficit (L) years.
struct YearAssignmentStats {
  double N1Y = 0.0, N2Y = 0.0;
  std::optional<double> N1H, N2L, D12H, D21L;
};

YearAssignmentStats year_assignment_stats(const StateField& z, const YearSets& year_sets);

/// Pearson correlations per sign for the size/intensity pairs.
struct CorrelationReport {
  struct Pair {
    std::optional<double> positive;
    std::optional<double> negative;
  };
  Pair temporal_spatial;
  Pair st_spatial;
  Pair st_temporal;
  Pair st_intensity;
};

/// Pearson correlation; absent for fewer than two points or zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

CorrelationReport size_correlations(std::span<const Anomaly> anomalies);

/// The quantities narrated for an individual anomaly.
struct CaseReport {
  struct Site {
    std::int64_t location_id = 0;
    double lat = 0.0;
    double lon = 0.0;
    double long_term_mean = 0.0;

    friend bool operator==(const Site&, const Site&) = default;
  };
  struct YearEntry {
    int year = 0;
    std::size_t locations = 0;
    double observed_mean = 0.0;  // mean rainfall over the anomaly's nodes in this year

    friend bool operator==(const YearEntry&, const YearEntry&) = default;
  };

  std::size_t anomaly_id = 0;
  Sign sign = Sign::Positive;
  std::size_t spatial_size = 0;
  std::size_t temporal_size = 0;
  std::size_t st_size = 0;
  int first_year = 0;
  int last_year = 0;
  std::vector<Site> sites;
  double long_term_mean = 0.0;  // mean of mu_s over covered locations
  std::vector<YearEntry> years;
  double intensity = 0.0;

  friend bool operator==(const CaseReport&, const CaseReport&) = default;
};

CaseReport case_report(const Anomaly& anomaly, const RainfallDataset& dataset,
                       const LocationStats& stats);

/// `anomaly_id,sign,spatial_size,temporal_size,st_size,intensity`; sign is `+` or `-`.
void write_anomalies_csv(std::span<const Anomaly> anomalies, const std::filesystem::path& path);

/// `anomaly_id,location_id,year`.
void write_membership_csv(std::span<const Anomaly> anomalies, const RainfallDataset& dataset,
                          const std::filesystem::path& path);

/// Rebuilds a state field from anomaly and membership CSVs (every node not in
/// an anomaly is normal; AIMR states are normal).
StateField load_anomaly_field(const std::filesystem::path& anomalies_csv,
                              const std::filesystem::path& membership_csv,
                              const RainfallDataset& dataset);

}  // namespace mrfanom
