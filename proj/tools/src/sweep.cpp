#include "mrfanom/cli/sweep.hpp"

#include <charconv>
#include <sstream>

#include <mrfanom/csv.hpp>
#include <mrfanom/error.hpp>

namespace mrfanom::cli {

namespace {

std::optional<double> as_probability(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

[[noreturn]] void unknown(std::string_view name) {
  throw Error(ErrorCode::InvalidConfig, "unknown sweep setting '" + std::string(name) + "'");
}

MrfConfig with_spatial(const MrfConfig& base) {
  MrfConfig c = base;
  if (c.spatial.mode == SpatialMode::Off) c.spatial.mode = SpatialMode::Prop;
  return c;
}

}  // namespace

SweepSetting resolve_setting(std::string_view name, const MrfConfig& base) {
  SweepSetting s{std::string(name), false, base};
  if (name == "LWA") {
    s.lwa = true;
    return s;
  }
  if (name == "MRF-SC") {
    s.mrf = with_spatial(base);
    s.mrf.temporal.P.reset();
    return s;
  }
  if (name.starts_with("MRF-TC-")) {
    const auto P = as_probability(name.substr(7));
    if (!P) unknown(name);
    s.mrf.spatial.mode = SpatialMode::Off;
    s.mrf.temporal.P = *P;
    validate(s.mrf);
    return s;
  }
  if (name.starts_with("MRF-STC-")) {
    const auto tail = name.substr(8);
    s.mrf = with_spatial(base);
    if (const auto P = as_probability(tail)) {
      s.mrf.temporal.P = *P;
      validate(s.mrf);
      return s;
    }
    s.mrf.temporal.P = 0.9;
    s.mrf.spatial.D = 0.0;
    if (tail == "unif") {
      s.mrf.spatial.mode = SpatialMode::Unif;
    } else if (tail == "prop") {
      s.mrf.spatial.mode = SpatialMode::Prop;
    } else if (tail == "anml") {
      s.mrf.spatial.mode = SpatialMode::Anml;
    } else if (tail == "mxd1" || tail == "mxd2") {
      s.mrf.spatial.mode = SpatialMode::Mxd;
      s.mrf.spatial.C_uniform = tail == "mxd1" ? 2.0 : 5.0;
      s.mrf.spatial.D = 1.0;
    } else {
      unknown(name);
    }
    return s;
  }
  if (name.size() == 3 && name.starts_with("NP") && name[2] >= '1' && name[2] <= '8') {
    s.mrf = with_spatial(base);
    s.mrf.temporal.P = 0.99;
    s.mrf.node.scheme = parse_node_scheme(name);
    return s;
  }
  unknown(name);
}

std::vector<std::string> setting_names(const KeyValueConfig& kv) {
  std::vector<std::string> names;
  for (const auto& line : kv.get_all("settings")) {
    std::string token;
    for (char ch : line + ",") {
      if (ch == ',' || ch == ' ' || ch == '\t') {
        if (!token.empty()) names.push_back(token);
        token.clear();
      } else {
        token.push_back(ch);
      }
    }
  }
  return names;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? csv::format(*v) : ""; }

void stats_cells(std::ostringstream& out, const AnomalyStats& a) {
  out << ',' << a.NP << ',' << a.NN << ',' << cell(a.STSP) << ',' << cell(a.STSN) << ','
      << cell(a.SSP) << ',' << cell(a.SSN) << ',' << cell(a.TSP) << ',' << cell(a.TSN);
}

}  // namespace

std::string sweep_header() {
  return "setting,spatial_mode,C,D,lambda,P,node_scheme,"
         "N1,N2,NG1,NG2,NL1,NL2,N1Y,N2Y,N1H,N2L,D12H,D21L,"
         "NP,NN,STSP,STSN,SSP,SSN,TSP,TSN,IP,IN,"
         "NP2,NN2,STSP2,STSN2,SSP2,SSN2,TSP2,TSN2\n";
}

std::string sweep_line(const SweepRow& row) {
  std::ostringstream out;
  const auto& s = row.setting;
  out << s.name << ',';
  if (s.lwa) {
    out << ",,,,,";
  } else {
    const auto& sp = s.mrf.spatial;
    const bool uses_c = sp.mode == SpatialMode::Unif || sp.mode == SpatialMode::Mxd;
    const bool uses_lambda = sp.mode == SpatialMode::Prop || sp.mode == SpatialMode::Anml;
    out << to_string(sp.mode) << ',' << (uses_c ? csv::format(sp.C_uniform) : "") << ','
        << (sp.mode == SpatialMode::Off ? "" : csv::format(sp.D)) << ','
        << (uses_lambda ? csv::format(sp.lambda) : "") << ','
        << (s.mrf.temporal.P ? csv::format(*s.mrf.temporal.P) : "off") << ','
        << to_string(s.mrf.node.scheme);
  }
  const auto& c = row.counts;
  out << ',' << c.N1 << ',' << c.N2;
  if (s.lwa) {
    out << ",,,,";
  } else {
    out << ',' << c.NG1 << ',' << c.NG2 << ',' << c.NL1 << ',' << c.NL2;
  }
  const auto& y = row.years;
  out << ',' << csv::format(y.N1Y) << ',' << csv::format(y.N2Y) << ',' << cell(y.N1H) << ','
      << cell(y.N2L) << ',' << cell(y.D12H) << ',' << cell(y.D21L);
  stats_cells(out, row.all);
  out << ',' << cell(row.all.IP) << ',' << cell(row.all.IN);
  stats_cells(out, row.multi);
  out << '\n';
  return out.str();
}

}  // namespace mrfanom::cli
