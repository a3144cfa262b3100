#include "mrfanom/mrf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>

#include "mrfanom/csv.hpp"
#include "mrfanom/error.hpp"

namespace mrfanom {

std::string_view to_string(SpatialMode mode) noexcept {
  switch (mode) {
    case SpatialMode::Off: return "off";
    case SpatialMode::Unif: return "unif";
    case SpatialMode::Prop: return "prop";
    case SpatialMode::Anml: return "anml";
    case SpatialMode::Mxd: return "mxd";
  }
  return "off";
}

std::string_view to_string(NodeScheme scheme) noexcept {
  switch (scheme) {
    case NodeScheme::NP1: return "NP1";
    case NodeScheme::NP2: return "NP2";
    case NodeScheme::NP3: return "NP3";
    case NodeScheme::NP4: return "NP4";
    case NodeScheme::NP5: return "NP5";
    case NodeScheme::NP6: return "NP6";
    case NodeScheme::NP7: return "NP7";
    case NodeScheme::NP8: return "NP8";
    case NodeScheme::Custom: return "custom";
  }
  return "NP1";
}

SpatialMode parse_spatial_mode(std::string_view text) {
  for (auto mode : {SpatialMode::Off, SpatialMode::Unif, SpatialMode::Prop, SpatialMode::Anml,
                    SpatialMode::Mxd}) {
    if (to_string(mode) == text) return mode;
  }
  throw Error(ErrorCode::InvalidConfig, "spatial.mode: unknown mode '" + std::string(text) + "'");
}

NodeScheme parse_node_scheme(std::string_view text) {
  for (auto scheme : {NodeScheme::NP1, NodeScheme::NP2, NodeScheme::NP3, NodeScheme::NP4,
                      NodeScheme::NP5, NodeScheme::NP6, NodeScheme::NP7, NodeScheme::NP8,
                      NodeScheme::Custom}) {
    if (to_string(scheme) == text) return scheme;
  }
  throw Error(ErrorCode::InvalidScheme, "node.scheme: unknown scheme '" + std::string(text) + "'");
}

std::string_view to_string(EmissionSpread spread) noexcept {
  return spread == EmissionSpread::Pooled ? "pooled" : "total";
}

EmissionSpread parse_emission_spread(std::string_view text) {
  if (text == "pooled") return EmissionSpread::Pooled;
  if (text == "total") return EmissionSpread::Total;
  throw Error(ErrorCode::InvalidConfig,
              "emission.sigma: expected 'pooled' or 'total', got '" + std::string(text) + "'");
}

void validate(const MrfConfig& config) {
  const auto& sp = config.spatial;
  if (!std::isfinite(sp.C_uniform) || !std::isfinite(sp.D) || !std::isfinite(sp.lambda)) {
    throw Error(ErrorCode::InvalidParameter, "spatial weights must be finite");
  }
  if (sp.lambda < 0.0) throw Error(ErrorCode::InvalidParameter, "spatial.lambda must be >= 0");
  if (config.temporal.P) {
    const double P = *config.temporal.P;
    if (!(P > 0.0 && P < 1.0)) {
      throw Error(ErrorCode::InvalidParameter, "temporal.P must lie in (0, 1)");
    }
  }
  const auto& node = config.node;
  if (node.scheme == NodeScheme::Custom) {
    for (double c : {node.C1, node.C2, node.C3}) {
      if (!(c > 0.0) || !std::isfinite(c)) {
        throw Error(ErrorCode::InvalidParameter, "node potentials must be positive and finite");
      }
    }
  }
}

MrfConfig parse_mrf_config(const KeyValueConfig& kv) {
  static const std::vector<std::string_view> known = {
      "spatial.mode", "spatial.C", "spatial.D", "spatial.lambda", "temporal.P",
      "node.scheme",  "node.C1",   "node.C2",   "node.C3",        "aimr_link",
      "emission.sigma"};
  for (const auto& e : kv.entries()) {
    const bool ours = e.key.rfind("spatial.", 0) == 0 || e.key.rfind("temporal.", 0) == 0 ||
                      e.key.rfind("node.", 0) == 0 || e.key.rfind("emission.", 0) == 0 ||
                      e.key == "aimr_link";
    if (ours && std::find(known.begin(), known.end(), e.key) == known.end()) {
      throw Error(ErrorCode::InvalidConfig,
                  "line " + std::to_string(e.line) + ": unknown key '" + e.key + "'");
    }
  }

  MrfConfig config;
  if (auto v = kv.get("spatial.mode")) config.spatial.mode = parse_spatial_mode(trim(*v));
  config.spatial.C_uniform = kv.get_double("spatial.C", config.spatial.C_uniform);
  config.spatial.D = kv.get_double("spatial.D", config.spatial.D);
  config.spatial.lambda = kv.get_double("spatial.lambda", config.spatial.lambda);
  if (auto v = kv.get("temporal.P")) {
    if (trim(*v) == "off") {
      config.temporal.P.reset();
    } else {
      config.temporal.P = parse_double(*v, "temporal.P");
    }
  }
  if (auto v = kv.get("node.scheme")) config.node.scheme = parse_node_scheme(trim(*v));
  config.node.C1 = kv.get_double("node.C1", config.node.C1);
  config.node.C2 = kv.get_double("node.C2", config.node.C2);
  config.node.C3 = kv.get_double("node.C3", config.node.C3);
  config.aimr_link = kv.get_bool("aimr_link", config.aimr_link);
  if (auto v = kv.get("emission.sigma")) config.emission_spread = parse_emission_spread(trim(*v));
  validate(config);
  return config;
}

std::string format_mrf_config(const MrfConfig& config) {
  std::ostringstream out;
  out << "spatial.mode = " << to_string(config.spatial.mode) << '\n'
      << "spatial.C = " << csv::format(config.spatial.C_uniform) << '\n'
      << "spatial.D = " << csv::format(config.spatial.D) << '\n'
      << "spatial.lambda = " << csv::format(config.spatial.lambda) << '\n'
      << "temporal.P = " << (config.temporal.P ? csv::format(*config.temporal.P) : "off") << '\n'
      << "node.scheme = " << to_string(config.node.scheme) << '\n'
      << "node.C1 = " << csv::format(config.node.C1) << '\n'
      << "node.C2 = " << csv::format(config.node.C2) << '\n'
      << "node.C3 = " << csv::format(config.node.C3) << '\n'
      << "aimr_link = " << (config.aimr_link ? "on" : "off") << '\n'
      << "emission.sigma = " << to_string(config.emission_spread) << '\n';
  return out.str();
}

double SpatialEdges::weight(LocationId s, LocationId s2) const {
  const auto i = static_cast<std::size_t>(s);
  for (std::size_t k = offsets.at(i); k < offsets.at(i + 1); ++k) {
    if (neighbor[k] == s2) return C[k];
  }
  throw Error(ErrorCode::InvalidLocation, "locations are not neighbours");
}

namespace {

int deviation_sign(double y, double mu) noexcept { return (y > mu) - (y < mu); }

}  // namespace

SpatialEdges estimate_spatial_potentials(const RainfallDataset& dataset, const StateField& z0,
                                         const SpatialPotentialSpec& spec) {
  if (spec.mode == SpatialMode::Off) {
    throw Error(ErrorCode::NotApplicable, "spatial potentials are disabled");
  }
  const auto& grid = dataset.grid;
  const std::size_t S = grid.size();
  const std::size_t T = dataset.num_years();
  if (spec.mode == SpatialMode::Anml && (z0.locations() != S || z0.years() != T)) {
    throw Error(ErrorCode::ShapeError, "reference assignment does not match dataset");
  }

  std::vector<double> mu(S, 0.0);
  if (spec.mode == SpatialMode::Prop) {
    for (std::size_t s = 0; s < S; ++s) mu[s] = population_mean_std(dataset.y.series(s)).mean;
  }

  SpatialEdges edges;
  edges.D = spec.D;
  edges.offsets.assign(S + 1, 0);
  for (std::size_t s = 0; s < S; ++s) {
    const auto nbrs = grid.neighbors(static_cast<LocationId>(s));
    for (const LocationId n : nbrs) {
      const auto s2 = static_cast<std::size_t>(n);
      double c = spec.C_uniform;
      if (spec.mode == SpatialMode::Prop || spec.mode == SpatialMode::Anml) {
        std::size_t agree = 0;
        for (std::size_t t = 0; t < T; ++t) {
          if (spec.mode == SpatialMode::Prop) {
            agree += deviation_sign(dataset.y(s, t), mu[s]) ==
                             deviation_sign(dataset.y(s2, t), mu[s2])
                         ? 1
                         : 0;
          } else {
            agree += z0.z(s, t) == z0.z(s2, t) ? 1 : 0;
          }
        }
        c = T == 0 ? 0.0 : spec.lambda * static_cast<double>(agree) / static_cast<double>(T);
      }
      edges.neighbor.push_back(n);
      edges.C.push_back(c);
    }
    edges.offsets[s + 1] = edges.neighbor.size();
  }
  return edges;
}

double spatial_potential(double C, double D, bool same_state) {
  return std::exp(same_state ? C : D);
}

double temporal_potential(double P, bool same_state) {
  if (!(P > 0.0 && P < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "P must lie in (0, 1)");
  }
  return same_state ? P : 1.0 - P;
}

double aimr_edge_potential(std::size_t S, bool same_state) {
  if (S == 0) throw Error(ErrorCode::InvalidParameter, "S must be at least 1");
  return same_state ? std::exp(1.0 / static_cast<double>(S)) : 1.0;
}

namespace {

using Triple = std::array<double, 3>;

Triple log_triple(double c1, double c2, double c3) {
  return {std::log(c1), std::log(c2), std::log(c3)};
}

}  // namespace

NodePotentials::NodePotentials(const NodePotentialScheme& scheme, const LocationStats& stats,
                               const YearSets& years, std::size_t n_years)
    : scheme_(scheme), location_class_(stats.mu.size(), 0), year_class_(n_years, 0) {
  const Triple ones = log_triple(1, 1, 1);
  const Triple favour_positive = log_triple(2, 1, 1);
  const Triple favour_negative = log_triple(1, 2, 1);
  log_table_ = {ones, ones, ones};
  log_aimr_ = ones;

  const auto uniform = [&](const Triple& values) {
    log_table_ = {values, values, values};
    log_aimr_ = values;
  };

  switch (scheme.scheme) {
    case NodeScheme::NP1: break;
    case NodeScheme::NP2: uniform(favour_positive); break;
    case NodeScheme::NP3: uniform(favour_negative); break;
    case NodeScheme::NP4: uniform(log_triple(2, 2, 1)); break;
    case NodeScheme::Custom:
      if (!(scheme.C1 > 0.0 && scheme.C2 > 0.0 && scheme.C3 > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "node potentials must be positive");
      }
      uniform(log_triple(scheme.C1, scheme.C2, scheme.C3));
      break;
    case NodeScheme::NP5:
    case NodeScheme::NP6: {
      const auto spread = population_mean_std(stats.mu);
      for (std::size_t s = 0; s < stats.mu.size(); ++s) {
        if (stats.mu[s] >= spread.mean + spread.std) location_class_[s] = 1;
        else if (stats.mu[s] <= spread.mean - spread.std) location_class_[s] = 2;
      }
      const bool np5 = scheme.scheme == NodeScheme::NP5;
      log_table_[1] = np5 ? favour_positive : favour_negative;
      log_table_[2] = np5 ? favour_negative : favour_positive;
      break;
    }
    case NodeScheme::NP7:
    case NodeScheme::NP8: {
      for (auto t : years.H) year_class_.at(t) = 1;
      for (auto t : years.L) year_class_.at(t) = 2;
      const bool np7 = scheme.scheme == NodeScheme::NP7;
      log_table_[1] = np7 ? favour_positive : favour_negative;
      log_table_[2] = np7 ? favour_negative : favour_positive;
      break;
    }
  }
}

std::size_t NodePotentials::class_of(LocationId s, std::size_t t) const noexcept {
  switch (scheme_.scheme) {
    case NodeScheme::NP5:
    case NodeScheme::NP6: return location_class_[static_cast<std::size_t>(s)];
    case NodeScheme::NP7:
    case NodeScheme::NP8: return year_class_[t];
    default: return 0;
  }
}

double NodePotentials::value(LocationId s, std::size_t t, State state) const {
  if (s < 0 || static_cast<std::size_t>(s) >= location_class_.size()) {
    throw Error(ErrorCode::InvalidLocation, "location id " + std::to_string(s));
  }
  if (t >= year_class_.size()) throw Error(ErrorCode::InvalidParameter, "year index out of range");
  return std::exp(log_value(s, t, state));
}

double node_potential(const NodePotentials& potentials, LocationId s, std::size_t t, State state) {
  return potentials.value(s, t, state);
}

namespace {

void fill_means(std::array<double, 3>& mu_state, std::span<const double> values,
                std::span<const State> states, double mu, double sigma) {
  std::array<double, 3> sum{};
  std::array<std::size_t, 3> count{};
  for (std::size_t t = 0; t < values.size(); ++t) {
    sum[slot(states[t])] += values[t];
    ++count[slot(states[t])];
  }
  const std::array<double, 3> fallback = {mu + sigma, mu - sigma, mu};
  for (std::size_t p = 0; p < 3; ++p) {
    mu_state[p] = count[p] > 0 ? sum[p] / static_cast<double>(count[p]) : fallback[p];
  }
}

}  // namespace

namespace {

double pooled_spread(std::span<const double> values, std::span<const State> states,
                     const std::array<double, 3>& mu_state, double total) {
  double ss = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    const double d = values[t] - mu_state[slot(states[t])];
    ss += d * d;
  }
  const double pooled = std::sqrt(ss / static_cast<double>(values.size()));
  return pooled > 0.0 && std::isfinite(pooled) ? pooled : total;
}

}  // namespace

EmissionParams estimate_emissions(const RainfallDataset& dataset, const StateField& z,
                                  EmissionSpread spread) {
  if (z.locations() != dataset.locations() || z.years() != dataset.num_years()) {
    throw Error(ErrorCode::ShapeError, "state field does not match dataset");
  }
  EmissionParams params;
  params.mu_state.resize(dataset.locations());
  params.sigma_loc.resize(dataset.locations());
  for (std::size_t s = 0; s < dataset.locations(); ++s) {
    params.sigma_loc[s] = population_mean_std(dataset.y.series(s)).std;
  }
  params.sigma_aimr = population_mean_std(dataset.aimr).std;
  reestimate_means(params, dataset, z);
  if (spread == EmissionSpread::Pooled) {
    for (std::size_t s = 0; s < dataset.locations(); ++s) {
      params.sigma_loc[s] = pooled_spread(dataset.y.series(s), z.z.series(s), params.mu_state[s],
                                          params.sigma_loc[s]);
    }
    params.sigma_aimr =
        pooled_spread(dataset.aimr, z.z_aimr, params.mu_aimr_state, params.sigma_aimr);
  }
  return params;
}

void reestimate_means(EmissionParams& params, const RainfallDataset& dataset, const StateField& z) {
  for (std::size_t s = 0; s < dataset.locations(); ++s) {
    const auto series = dataset.y.series(s);
    const auto ms = population_mean_std(series);
    fill_means(params.mu_state[s], series, z.z.series(s), ms.mean, ms.std);
  }
  const auto ms = population_mean_std(dataset.aimr);
  fill_means(params.mu_aimr_state, dataset.aimr, z.z_aimr, ms.mean, ms.std);
}

bool means_ordered(const EmissionParams& params) {
  for (const auto& m : params.mu_state) {
    if (!(m[0] >= m[2] && m[2] >= m[1])) return false;
  }
  return true;
}

void require_positive_spread(const EmissionParams& params) {
  for (std::size_t s = 0; s < params.sigma_loc.size(); ++s) {
    if (!(params.sigma_loc[s] > 0.0)) {
      throw Error(ErrorCode::DegenerateEmission,
                  "location " + std::to_string(s) + " has zero rainfall spread");
    }
  }
  if (!(params.sigma_aimr > 0.0)) {
    throw Error(ErrorCode::DegenerateEmission, "AIMR series has zero spread");
  }
}

double log_normal_density(double y, double mu, double sigma) noexcept {
  const double z = (y - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

MrfModel build_model(const RainfallDataset& dataset, const MrfConfig& config) {
  validate(config);
  MrfModel model;
  model.dataset = &dataset;
  model.config = config;
  model.stats = location_stats(dataset);
  model.lwa = lwa_assign(dataset, model.stats);
  model.year_sets = widespread_year_sets(model.lwa);
  if (config.spatial.mode != SpatialMode::Off) {
    model.edges = estimate_spatial_potentials(dataset, model.lwa, config.spatial);
  }
  model.nodes = NodePotentials(config.node, model.stats, model.year_sets, dataset.num_years());
  if (config.temporal.P) {
    model.log_p_same = std::log(*config.temporal.P);
    model.log_p_diff = std::log(1.0 - *config.temporal.P);
  }
  model.aimr_gain =
      config.aimr_link && dataset.locations() > 0 ? 1.0 / static_cast<double>(dataset.locations())
                                                  : 0.0;
  return model;
}

double log_likelihood(const MrfModel& model, const StateField& z, const EmissionParams& params) {
  const auto& data = *model.dataset;
  const std::size_t S = data.locations();
  const std::size_t T = data.num_years();
  if (z.locations() != S || z.years() != T || params.sigma_loc.size() != S) {
    throw Error(ErrorCode::ShapeError, "assignment or parameters do not match the model");
  }
  require_positive_spread(params);

  double total = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    const auto sid = static_cast<LocationId>(s);
    const auto states = z.z.series(s);
    const auto y = data.y.series(s);
    for (std::size_t t = 0; t < T; ++t) {
      const State p = states[t];
      total += model.nodes.log_value(sid, t, p);
      total += log_normal_density(y[t], params.mu_state[s][slot(p)], params.sigma_loc[s]);
      if (p == z.z_aimr[t]) total += model.aimr_gain;
      if (model.temporal_enabled() && t + 1 < T) {
        total += p == states[t + 1] ? model.log_p_same : model.log_p_diff;
      }
    }
    if (model.spatial_enabled()) {
      for (std::size_t k = model.edges.offsets[s]; k < model.edges.offsets[s + 1]; ++k) {
        const auto s2 = static_cast<std::size_t>(model.edges.neighbor[k]);
        if (s2 <= s) continue;  // each undirected edge once
        const auto other = z.z.series(s2);
        for (std::size_t t = 0; t < T; ++t) {
          total += states[t] == other[t] ? model.edges.C[k] : model.edges.D;
        }
      }
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    const State q = z.z_aimr[t];
    total += model.nodes.log_aimr(q);
    total += log_normal_density(data.aimr[t], params.mu_aimr_state[slot(q)], params.sigma_aimr);
  }
  if (!std::isfinite(total)) throw Error(ErrorCode::NumericalError, "log-likelihood is not finite");
  return total;
}

}  // namespace mrfanom
