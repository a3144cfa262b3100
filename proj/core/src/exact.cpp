#include <cmath>
#include <limits>

#include "mrfanom/error.hpp"
#include "mrfanom/inference.hpp"

namespace mrfanom {

namespace {

// Odometer over every latent node: location-year nodes first (location-major),
// then AIMR nodes. Returns false after the last assignment.
bool advance(StateField& z) {
  auto local = z.z.flat();
  for (auto& v : local) {
    if (v != State::Normal) {
      v = static_cast<State>(code(v) + 1);
      return true;
    }
    v = State::Positive;
  }
  for (auto& v : z.z_aimr) {
    if (v != State::Normal) {
      v = static_cast<State>(code(v) + 1);
      return true;
    }
    v = State::Positive;
  }
  return false;
}

}  // namespace

ExactResult exact_enumerate(const MrfModel& model, const EmissionParams& params) {
  const auto& data = *model.dataset;
  const std::size_t S = data.locations();
  const std::size_t T = data.num_years();
  const std::size_t nodes = S * T + T;
  if (nodes > kMaxExactNodes) {
    throw Error(ErrorCode::TooLarge, std::to_string(nodes) + " latent nodes (limit " +
                                         std::to_string(kMaxExactNodes) + ")");
  }
  require_positive_spread(params);

  // Pass 1: joint maximum (also the reference for stable exponentiation).
  StateField z(S, T, State::Positive);
  ExactResult result;
  result.map_log_likelihood = -std::numeric_limits<double>::infinity();
  do {
    const double ll = log_likelihood(model, z, params);
    if (ll > result.map_log_likelihood) {
      result.map_log_likelihood = ll;
      result.map = z;
    }
  } while (advance(z));

  // Pass 2: marginals by summation of exp(ll - max).
  Field<std::array<double, 3>> local(S, T, {0.0, 0.0, 0.0});
  std::vector<std::array<double, 3>> aimr(T, {0.0, 0.0, 0.0});
  double total = 0.0;
  z = StateField(S, T, State::Positive);
  do {
    const double w = std::exp(log_likelihood(model, z, params) - result.map_log_likelihood);
    total += w;
    const auto states = z.z.flat();
    auto acc = local.flat();
    for (std::size_t i = 0; i < states.size(); ++i) acc[i][slot(states[i])] += w;
    for (std::size_t t = 0; t < T; ++t) aimr[t][slot(z.z_aimr[t])] += w;
  } while (advance(z));

  result.marginal = Field<Distribution>(S, T);
  auto out = result.marginal.flat();
  const auto acc = local.flat();
  for (std::size_t i = 0; i < acc.size(); ++i) {
    for (std::size_t p = 0; p < 3; ++p) out[i][p] = acc[i][p] / total;
  }
  result.aimr_marginal.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t p = 0; p < 3; ++p) result.aimr_marginal[t][p] = aimr[t][p] / total;
  }
  return result;
}

}  // namespace mrfanom
