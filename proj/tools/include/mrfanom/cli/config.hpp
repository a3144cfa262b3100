#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <mrfanom/inference.hpp>
#include <mrfanom/keyvalue.hpp>
#include <mrfanom/mrf.hpp>

namespace mrfanom::cli {

/// Gibbs keys accepted in run configs: gibbs.sweeps, gibbs.burn_in,
/// gibbs.thin, gibbs.seed, gibbs.reestimate_means, gibbs.scan, gibbs.threads.
GibbsConfig parse_gibbs_config(const KeyValueConfig& kv);

/// Rejects keys that are neither MRF keys, gibbs keys, nor in `extra`.
void require_run_keys(const KeyValueConfig& kv, const std::vector<std::string_view>& extra = {});

/// Flat key/value snapshot for manifests.
std::vector<std::pair<std::string, std::string>> snapshot(const MrfConfig& mrf,
                                                          const GibbsConfig& gibbs);

}  // namespace mrfanom::cli
