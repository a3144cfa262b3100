#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrfanom/dataset.hpp"
#include "mrfanom/keyvalue.hpp"
#include "mrfanom/lwa.hpp"
#include "mrfanom/state.hpp"

namespace mrfanom {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// How same-state weights C(s,s') on spatial edges are chosen.
///
///   unif  every edge gets C_uniform
///   prop  lambda * fraction of years in which both locations deviate from
///         their own climatology with the same sign
///   anml  lambda * fraction of years in which both locations share an LWA state
///   mxd   C_uniform with a non-zero mismatch weight D (the "mixed" settings)
///   off   spatial edges contribute a constant (no spatial coherence)
enum class SpatialMode { Off, Unif, Prop, Anml, Mxd };

struct SpatialPotentialSpec {
  SpatialMode mode = SpatialMode::Prop;
  double C_uniform = 1.0;
  double D = 0.0;
  double lambda = 1.0;
};

/// Temporal coherence parameter P in (0,1); nullopt disables temporal edges.
struct TemporalPotentialSpec {
  std::optional<double> P = 0.9;
};

/// Node potential settings. NP1-NP4 are uniform across nodes; NP5/NP6 depend
/// on whether a location is wet or dry, NP7/NP8 on whether a year is an
/// excess or deficit AIMR year. Custom applies (C1, C2, C3) everywhere.
enum class NodeScheme { NP1, NP2, NP3, NP4, NP5, NP6, NP7, NP8, Custom };

struct NodePotentialScheme {
  NodeScheme scheme = NodeScheme::NP1;
  double C1 = 1.0;
  double C2 = 1.0;
  double C3 = 1.0;
};

/// How the per-location emission spread sigma_s is estimated from the initial
/// assignment. Both are shared by the three states and held fixed while sampling.
///
///   pooled  root mean square of y - mu_{s,z} (within-state residuals); falls
///           back to the total spread when the residuals vanish
///   total   population standard deviation of the whole series
enum class EmissionSpread { Pooled, Total };

struct MrfConfig {
  SpatialPotentialSpec spatial;
  TemporalPotentialSpec temporal;
  NodePotentialScheme node;
  bool aimr_link = true;
  EmissionSpread emission_spread = EmissionSpread::Pooled;

  bool has_coherence() const noexcept {
    return spatial.mode != SpatialMode::Off || temporal.P.has_value() || aimr_link;
  }
};

std::string_view to_string(SpatialMode mode) noexcept;
std::string_view to_string(NodeScheme scheme) noexcept;
std::string_view to_string(EmissionSpread spread) noexcept;
SpatialMode parse_spatial_mode(std::string_view text);
NodeScheme parse_node_scheme(std::string_view text);
EmissionSpread parse_emission_spread(std::string_view text);

/// Reads `spatial.mode`, `spatial.C`, `spatial.D`, `spatial.lambda`,
/// `temporal.P` (a number or `off`), `node.scheme`, `node.C1`..`node.C3` and
/// `aimr_link` and `emission.sigma`. Keys with other prefixes are left for the caller; unknown keys
/// under these prefixes raise InvalidConfig. Validates the result.
MrfConfig parse_mrf_config(const KeyValueConfig& config);

/// Serializes in the format read by parse_mrf_config.
std::string format_mrf_config(const MrfConfig& config);

/// Throws InvalidParameter for P outside (0,1), non-positive node potentials,
/// negative lambda or non-finite weights.
void validate(const MrfConfig& config);

// ---------------------------------------------------------------------------
// Potentials
// ---------------------------------------------------------------------------

/// Per-edge weights aligned with the grid's neighbour table:
/// `C[k]` belongs to the edge (s, grid.neighbors(s)[k - offsets[s]]).
struct SpatialEdges {
  std::vector<std::size_t> offsets;
  std::vector<LocationId> neighbor;
  std::vector<double> C;
  double D = 0.0;

  double weight(LocationId s, LocationId s2) const;
};

/// Estimates C(s,s') for every spatial edge. `z0` is the LWA assignment (used
/// by anml). Throws NotApplicable for mode `off`.
SpatialEdges estimate_spatial_potentials(const RainfallDataset& dataset, const StateField& z0,
                                         const SpatialPotentialSpec& spec);

/// exp(C) when the two states agree, exp(D) otherwise.
double spatial_potential(double C, double D, bool same_state);

/// P when the states agree, 1-P otherwise. Throws InvalidParameter unless 0 < P < 1.
double temporal_potential(double P, bool same_state);

/// exp(1/S) when a location state agrees with its year's AIMR state, 1 otherwise.
double aimr_edge_potential(std::size_t S, bool same_state);

/// Node potentials resolved against a dataset: which locations are wet/dry
/// and which years are excess/deficit.
class NodePotentials {
 public:
  NodePotentials() = default;

  /// Wet/dry sets come from the cross-location distribution of mu_s
  /// (HS: mu_s >= mean + std, LS: mu_s <= mean - std); excess/deficit years
  /// are the H and L sets of the LWA AIMR assignment.
  NodePotentials(const NodePotentialScheme& scheme, const LocationStats& stats,
                 const YearSets& years, std::size_t n_years);

  double value(LocationId s, std::size_t t, State state) const;
  double log_value(LocationId s, std::size_t t, State state) const noexcept {
    return log_table_[class_of(s, t)][slot(state)];
  }
  /// Potential on the AIMR node of year t.
  double log_aimr(State state) const noexcept { return log_aimr_[slot(state)]; }

  const NodePotentialScheme& scheme() const noexcept { return scheme_; }
  bool is_wet(LocationId s) const { return location_class_.at(static_cast<std::size_t>(s)) == 1; }
  bool is_dry(LocationId s) const { return location_class_.at(static_cast<std::size_t>(s)) == 2; }
  bool is_excess_year(std::size_t t) const { return year_class_.at(t) == 1; }
  bool is_deficit_year(std::size_t t) const { return year_class_.at(t) == 2; }

 private:
  std::size_t class_of(LocationId s, std::size_t t) const noexcept;

  NodePotentialScheme scheme_;
  // 0 = other, 1 = wet / excess, 2 = dry / deficit
  std::vector<std::uint8_t> location_class_;
  std::vector<std::uint8_t> year_class_;
  std::array<std::array<double, 3>, 3> log_table_{};
  std::array<double, 3> log_aimr_{};
};

/// node_potential(scheme, s, t, state) from a resolved table.
double node_potential(const NodePotentials& potentials, LocationId s, std::size_t t, State state);

// ---------------------------------------------------------------------------
// Emissions
// ---------------------------------------------------------------------------

/// Gaussian emission parameters: state-specific means with one spread per
/// location, and the same for the AIMR series.
struct EmissionParams {
  std::vector<std::array<double, 3>> mu_state;  // [s][slot]
  std::vector<double> sigma_loc;
  std::array<double, 3> mu_aimr_state{};
  double sigma_aimr = 0.0;

  friend bool operator==(const EmissionParams&, const EmissionParams&) = default;
};

/// Means of y over the years in each state; an empty state falls back to
/// mu+sigma (1), mu-sigma (2) or mu (3) with sigma the series' total spread.
/// Spreads follow `spread` (see EmissionSpread).
EmissionParams estimate_emissions(const RainfallDataset& dataset, const StateField& z,
                                  EmissionSpread spread = EmissionSpread::Total);

/// Recomputes only the state means of `params` from `z`, keeping the spreads.
void reestimate_means(EmissionParams& params, const RainfallDataset& dataset, const StateField& z);

/// True when every location keeps mu_1 >= mu_3 >= mu_2 (monitored, not enforced).
bool means_ordered(const EmissionParams& params);

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

/// A configuration resolved against a dataset, ready for evaluation and
/// sampling. Holds a pointer to the dataset, which must outlive the model.
struct MrfModel {
  const RainfallDataset* dataset = nullptr;
  MrfConfig config;
  LocationStats stats;
  StateField lwa;
  YearSets year_sets;
  SpatialEdges edges;  // empty when spatial mode is off
  NodePotentials nodes;
  double log_p_same = 0.0;
  double log_p_diff = 0.0;
  double aimr_gain = 0.0;  // log exp(1/S) when the AIMR link is on, else 0

  bool spatial_enabled() const noexcept { return config.spatial.mode != SpatialMode::Off; }
  bool temporal_enabled() const noexcept { return config.temporal.P.has_value(); }
};

/// Validates the config, computes the LWA reference (stats, z0, year sets) and
/// resolves every potential.
MrfModel build_model(const RainfallDataset& dataset, const MrfConfig& config);

/// Unnormalised log-likelihood: log node potentials + log edge potentials
/// (spatial, temporal, AIMR link) + Gaussian log densities of every y[s][t]
/// and every AIMR value. Throws DegenerateEmission for a non-positive spread.
double log_likelihood(const MrfModel& model, const StateField& z, const EmissionParams& params);

/// Throws DegenerateEmission when any spread is not strictly positive.
void require_positive_spread(const EmissionParams& params);

/// log N(y; mu, sigma).
double log_normal_density(double y, double mu, double sigma) noexcept;

}  // namespace mrfanom
