#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <mrfanom/anomaly.hpp>
#include <mrfanom/keyvalue.hpp>
#include <mrfanom/mrf.hpp>

namespace mrfanom::cli {

/// One named analysis setting.
///
///   LWA                 location-wise thresholds (the reference)
///   MRF-SC              spatial coherence only
///   MRF-TC-<P>          temporal coherence only
///   MRF-STC-<P>         both
///   MRF-STC-<mode>      both with P = 0.9; mode is unif, prop, anml, mxd1
///                       (C=2, D=1) or mxd2 (C=5, D=1)
///   NP1 ... NP8         both with P = 0.99 and the given node scheme
///
/// Unspecified settings come from `base`. Throws InvalidConfig for unknown names.
struct SweepSetting {
  std::string name;
  bool lwa = false;
  MrfConfig mrf;
};

SweepSetting resolve_setting(std::string_view name, const MrfConfig& base);

/// Setting names from every `settings` line (comma or space separated).
std::vector<std::string> setting_names(const KeyValueConfig& kv);

/// Statistics of one setting, the columns of the sweep table.
struct SweepRow {
  SweepSetting setting;
  GainLossReport counts;  // gains/losses are left empty for the LWA row
  YearAssignmentStats years;
  AnomalyStats all;       // every anomaly
  AnomalyStats multi;     // st_size >= 2
};

std::string sweep_header();
std::string sweep_line(const SweepRow& row);

}  // namespace mrfanom::cli
