#include "mrfanom/cli/config.hpp"

#include <algorithm>
#include <limits>

#include <mrfanom/csv.hpp>
#include <mrfanom/error.hpp>

namespace mrfanom::cli {

namespace {

const std::vector<std::string_view> kGibbsKeys = {
    "gibbs.sweeps", "gibbs.burn_in",         "gibbs.thin",    "gibbs.seed",
    "gibbs.scan",   "gibbs.reestimate_means", "gibbs.threads"};

bool is_mrf_key(std::string_view key) {
  for (std::string_view prefix : {"spatial.", "temporal.", "node.", "emission."}) {
    if (key.starts_with(prefix)) return true;
  }
  return key == "aimr_link";
}

int as_int(const KeyValueConfig& kv, std::string_view key, int fallback) {
  const auto v = kv.get_int(key, fallback);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw Error(ErrorCode::InvalidConfig, std::string(key) + ": out of range");
  }
  return static_cast<int>(v);
}

}  // namespace

GibbsConfig parse_gibbs_config(const KeyValueConfig& kv) {
  GibbsConfig g;
  g.sweeps = as_int(kv, "gibbs.sweeps", g.sweeps);
  g.burn_in = as_int(kv, "gibbs.burn_in", g.burn_in);
  g.thin = as_int(kv, "gibbs.thin", g.thin);
  const auto seed = kv.get_int("gibbs.seed", static_cast<std::int64_t>(g.seed));
  if (seed < 0) throw Error(ErrorCode::InvalidConfig, "gibbs.seed: must be non-negative");
  g.seed = static_cast<std::uint64_t>(seed);
  g.reestimate_means = kv.get_bool("gibbs.reestimate_means", g.reestimate_means);
  if (auto v = kv.get("gibbs.scan")) g.scan = parse_scan_order(trim(*v));
  const auto threads = kv.get_int("gibbs.threads", g.threads);
  if (threads < 0) throw Error(ErrorCode::InvalidConfig, "gibbs.threads: must be non-negative");
  g.threads = static_cast<unsigned>(threads);
  return g;
}

void require_run_keys(const KeyValueConfig& kv, const std::vector<std::string_view>& extra) {
  for (const auto& e : kv.entries()) {
    if (is_mrf_key(e.key)) continue;
    if (std::find(kGibbsKeys.begin(), kGibbsKeys.end(), e.key) != kGibbsKeys.end()) continue;
    if (std::find(extra.begin(), extra.end(), e.key) != extra.end()) continue;
    throw Error(ErrorCode::InvalidConfig,
                "line " + std::to_string(e.line) + ": unknown key '" + e.key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> snapshot(const MrfConfig& mrf,
                                                          const GibbsConfig& gibbs) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto kv = KeyValueConfig::parse(format_mrf_config(mrf));
  for (const auto& e : kv.entries()) out.emplace_back(e.key, e.value);
  out.emplace_back("gibbs.sweeps", std::to_string(gibbs.sweeps));
  out.emplace_back("gibbs.burn_in", std::to_string(gibbs.burn_in));
  out.emplace_back("gibbs.thin", std::to_string(gibbs.thin));
  out.emplace_back("gibbs.seed", std::to_string(gibbs.seed));
  out.emplace_back("gibbs.reestimate_means", gibbs.reestimate_means ? "on" : "off");
  out.emplace_back("gibbs.scan", std::string(to_string(gibbs.scan)));
  out.emplace_back("gibbs.threads", std::to_string(gibbs.threads));
  return out;
}

}  // namespace mrfanom::cli
