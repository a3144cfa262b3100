#include "mrfanom/report_json.hpp"

#include <json.hpp>

#include "mrfanom/csv.hpp"
#include "mrfanom/error.hpp"

namespace mrfanom {

namespace {

using nlohmann::ordered_json;

ordered_json opt(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json year_labels(const std::vector<std::size_t>& indices, std::span<const int> years) {
  ordered_json out = ordered_json::array();
  for (auto t : indices) out.push_back(years[t]);
  return out;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

const char* sign_token(Sign s) { return s == Sign::Positive ? "+" : "-"; }

}  // namespace

std::string to_json(const YearSets& sets, std::span<const int> years) {
  ordered_json j;
  j["H"] = year_labels(sets.H, years);
  j["L"] = year_labels(sets.L, years);
  j["HL"] = year_labels(sets.HL, years);
  j["LL"] = year_labels(sets.LL, years);
  j["N1"] = sets.n1;
  j["N2"] = sets.n2;
  j["mu_N1"] = sets.mu_n1;
  j["sigma_N1"] = sets.sigma_n1;
  j["HL_threshold"] = sets.hl_threshold();
  j["mu_N2"] = sets.mu_n2;
  j["sigma_N2"] = sets.sigma_n2;
  j["LL_threshold"] = sets.ll_threshold();
  ordered_json warnings = ordered_json::array();
  if (sets.hl_degenerate) warnings.push_back("DegenerateThreshold: N1 series is constant");
  if (sets.ll_degenerate) warnings.push_back("DegenerateThreshold: N2 series is constant");
  j["warnings"] = warnings;
  return dump(j);
}

std::string to_json(const AnomalyStats& s) {
  ordered_json j;
  j["min_st_size"] = s.min_st_size;
  j["NP"] = s.NP;
  j["NN"] = s.NN;
  j["STSP"] = opt(s.STSP);
  j["STSN"] = opt(s.STSN);
  j["SSP"] = opt(s.SSP);
  j["SSN"] = opt(s.SSN);
  j["TSP"] = opt(s.TSP);
  j["TSN"] = opt(s.TSN);
  j["IP"] = opt(s.IP);
  j["IN"] = opt(s.IN);
  return dump(j);
}

std::string to_json(const GainLossReport& r) {
  ordered_json j;
  j["N1"] = r.N1;
  j["N2"] = r.N2;
  j["NG1"] = r.NG1;
  j["NG2"] = r.NG2;
  j["NL1"] = r.NL1;
  j["NL2"] = r.NL2;
  return dump(j);
}

std::string to_json(const OverlapReport& r, std::span<const int> years) {
  ordered_json j;
  j["H"] = year_labels(r.H, years);
  j["L"] = year_labels(r.L, years);
  j["HL"] = year_labels(r.HL, years);
  j["LL"] = year_labels(r.LL, years);
  j["ZH"] = year_labels(r.ZH, years);
  j["ZL"] = year_labels(r.ZL, years);
  j["H_in_ZH"] = opt(r.h_in_zh);
  j["HL_in_ZH"] = opt(r.hl_in_zh);
  j["L_in_ZL"] = opt(r.l_in_zl);
  j["LL_in_ZL"] = opt(r.ll_in_zl);
  return dump(j);
}

std::string to_json(const YearAssignmentStats& s) {
  ordered_json j;
  j["N1Y"] = s.N1Y;
  j["N2Y"] = s.N2Y;
  j["N1H"] = opt(s.N1H);
  j["N2L"] = opt(s.N2L);
  j["D12H"] = opt(s.D12H);
  j["D21L"] = opt(s.D21L);
  return dump(j);
}

std::string to_json(const CorrelationReport& r) {
  const auto pair = [](const CorrelationReport::Pair& p) {
    ordered_json j;
    j["positive"] = opt(p.positive);
    j["negative"] = opt(p.negative);
    return j;
  };
  ordered_json j;
  j["temporal_vs_spatial"] = pair(r.temporal_spatial);
  j["st_vs_spatial"] = pair(r.st_spatial);
  j["st_vs_temporal"] = pair(r.st_temporal);
  j["st_vs_intensity"] = pair(r.st_intensity);
  return dump(j);
}

std::string to_json(const CaseReport& r) {
  ordered_json j;
  j["anomaly_id"] = r.anomaly_id;
  j["sign"] = sign_token(r.sign);
  j["spatial_size"] = r.spatial_size;
  j["temporal_size"] = r.temporal_size;
  j["st_size"] = r.st_size;
  j["first_year"] = r.first_year;
  j["last_year"] = r.last_year;
  ordered_json sites = ordered_json::array();
  for (const auto& s : r.sites) {
    sites.push_back({{"location_id", s.location_id},
                     {"lat", s.lat},
                     {"lon", s.lon},
                     {"long_term_mean", s.long_term_mean}});
  }
  j["sites"] = sites;
  j["long_term_mean"] = r.long_term_mean;
  ordered_json yrs = ordered_json::array();
  for (const auto& y : r.years) {
    yrs.push_back(
        {{"year", y.year}, {"locations", y.locations}, {"observed_mean", y.observed_mean}});
  }
  j["years"] = yrs;
  j["intensity"] = r.intensity;
  return dump(j);
}

CaseReport case_report_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    CaseReport r;
    r.anomaly_id = j.at("anomaly_id").get<std::size_t>();
    const auto sign = j.at("sign").get<std::string>();
    if (sign != "+" && sign != "-") throw Error(ErrorCode::ParseError, "sign must be + or -");
    r.sign = sign == "+" ? Sign::Positive : Sign::Negative;
    r.spatial_size = j.at("spatial_size").get<std::size_t>();
    r.temporal_size = j.at("temporal_size").get<std::size_t>();
    r.st_size = j.at("st_size").get<std::size_t>();
    r.first_year = j.at("first_year").get<int>();
    r.last_year = j.at("last_year").get<int>();
    for (const auto& s : j.at("sites")) {
      r.sites.push_back({s.at("location_id").get<std::int64_t>(), s.at("lat").get<double>(),
                         s.at("lon").get<double>(), s.at("long_term_mean").get<double>()});
    }
    r.long_term_mean = j.at("long_term_mean").get<double>();
    for (const auto& y : j.at("years")) {
      r.years.push_back({y.at("year").get<int>(), y.at("locations").get<std::size_t>(),
                         y.at("observed_mean").get<double>()});
    }
    r.intensity = j.at("intensity").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("case report: ") + e.what());
  }
}

std::string to_json(const RunManifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["tool_version"] = m.tool_version;
  ordered_json inputs = ordered_json::object();
  for (const auto& [k, v] : m.inputs) inputs[k] = v;
  j["inputs"] = inputs;
  ordered_json config = ordered_json::object();
  for (const auto& [k, v] : m.config) config[k] = v;
  j["config"] = config;
  j["seed"] = m.seed ? ordered_json(*m.seed) : ordered_json(nullptr);
  j["out_dir"] = m.out_dir;
  return dump(j);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = csv::open_output(path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace mrfanom
