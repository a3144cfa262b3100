#include "mrfanom/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "mrfanom/csv.hpp"
#include "mrfanom/error.hpp"

namespace mrfanom {

std::size_t Anomaly::first_year_index() const {
  std::size_t first = nodes.empty() ? 0 : nodes.front().t;
  for (const auto& n : nodes) first = std::min(first, n.t);
  return first;
}

std::size_t Anomaly::last_year_index() const {
  std::size_t last = 0;
  for (const auto& n : nodes) last = std::max(last, n.t);
  return last;
}

std::vector<Anomaly> extract_anomalies(const StateField& z, const GridIndex& grid) {
  const std::size_t S = z.locations();
  const std::size_t T = z.years();
  if (grid.size() != S) throw Error(ErrorCode::ShapeError, "state field does not match grid");

  std::vector<Anomaly> anomalies;
  Field<std::uint8_t> visited(S, T, 0);
  std::vector<StNode> stack;

  for (std::size_t t0 = 0; t0 < T; ++t0) {
    for (std::size_t s0 = 0; s0 < S; ++s0) {
      const State state = z.z(s0, t0);
      if (!is_anomalous(state) || visited(s0, t0)) continue;

      Anomaly a;
      a.id = anomalies.size();
      a.sign = state == State::Positive ? Sign::Positive : Sign::Negative;
      visited(s0, t0) = 1;
      stack.push_back({static_cast<LocationId>(s0), t0});
      while (!stack.empty()) {
        const StNode node = stack.back();
        stack.pop_back();
        a.nodes.push_back(node);
        const auto visit = [&](std::size_t s, std::size_t t) {
          if (z.z(s, t) == state && !visited(s, t)) {
            visited(s, t) = 1;
            stack.push_back({static_cast<LocationId>(s), t});
          }
        };
        for (const LocationId n : grid.neighbors(node.s)) visit(static_cast<std::size_t>(n), node.t);
        const auto s = static_cast<std::size_t>(node.s);
        if (node.t > 0) visit(s, node.t - 1);
        if (node.t + 1 < T) visit(s, node.t + 1);
      }

      std::sort(a.nodes.begin(), a.nodes.end());
      a.st_size = a.nodes.size();
      std::set<LocationId> locations;
      std::set<std::size_t> years;
      for (const auto& n : a.nodes) {
        locations.insert(n.s);
        years.insert(n.t);
      }
      a.spatial_size = locations.size();
      a.temporal_size = years.size();
      anomalies.push_back(std::move(a));
    }
  }
  return anomalies;
}

double anomaly_intensity(const Anomaly& anomaly, const RainfallDataset& dataset,
                         const LocationStats& stats) {
  if (anomaly.nodes.empty()) throw Error(ErrorCode::InvalidParameter, "empty anomaly");
  double sum = 0.0;
  for (const auto& n : anomaly.nodes) {
    const auto s = static_cast<std::size_t>(n.s);
    const double mu = stats.mu.at(s);
    if (mu == 0.0) {
      throw Error(ErrorCode::DegenerateClimatology,
                  "location " + std::to_string(dataset.labels.at(s)) + " has zero mean rainfall");
    }
    sum += dataset.y(s, n.t) / mu;
  }
  return sum / static_cast<double>(anomaly.nodes.size());
}

void annotate_intensity(std::span<Anomaly> anomalies, const RainfallDataset& dataset,
                        const LocationStats& stats) {
  for (auto& a : anomalies) a.intensity = anomaly_intensity(a, dataset, stats);
}

namespace {

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

AnomalyStats aggregate_stats(std::span<const Anomaly> anomalies, std::size_t min_st_size) {
  AnomalyStats out;
  out.min_st_size = min_st_size;
  std::array<std::vector<double>, 2> st, sp, tm, in;
  for (const auto& a : anomalies) {
    if (a.st_size < min_st_size) continue;
    const std::size_t k = a.sign == Sign::Positive ? 0 : 1;
    st[k].push_back(static_cast<double>(a.st_size));
    sp[k].push_back(static_cast<double>(a.spatial_size));
    tm[k].push_back(static_cast<double>(a.temporal_size));
    in[k].push_back(a.intensity);
  }
  out.NP = st[0].size();
  out.NN = st[1].size();
  out.STSP = mean_of(st[0]);
  out.STSN = mean_of(st[1]);
  out.SSP = mean_of(sp[0]);
  out.SSN = mean_of(sp[1]);
  out.TSP = mean_of(tm[0]);
  out.TSN = mean_of(tm[1]);
  out.IP = mean_of(in[0]);
  out.IN = mean_of(in[1]);
  return out;
}

GainLossReport gain_loss(const StateField& z, const StateField& z_ref) {
  if (!z.z.same_shape(z_ref.z)) {
    throw Error(ErrorCode::ShapeError, "fields differ in shape");
  }
  GainLossReport r;
  const auto a = z.z.flat();
  const auto b = z_ref.z.flat();
  for (std::size_t i = 0; i < a.size(); ++i) {
    r.N1 += a[i] == State::Positive;
    r.N2 += a[i] == State::Negative;
    r.NG1 += a[i] == State::Positive && b[i] != State::Positive;
    r.NG2 += a[i] == State::Negative && b[i] != State::Negative;
    r.NL1 += b[i] == State::Positive && a[i] != State::Positive;
    r.NL2 += b[i] == State::Negative && a[i] != State::Negative;
  }
  return r;
}

namespace {

std::optional<double> covered_fraction(const std::vector<std::size_t>& set,
                                       const std::vector<std::size_t>& by) {
  if (set.empty()) return std::nullopt;
  std::size_t hit = 0;
  for (auto t : set) hit += std::find(by.begin(), by.end(), t) != by.end();
  return static_cast<double>(hit) / static_cast<double>(set.size());
}

std::optional<double> mean_over(const std::vector<std::size_t>& years,
                                const std::vector<double>& per_year) {
  if (years.empty()) return std::nullopt;
  double sum = 0.0;
  for (auto t : years) sum += per_year.at(t);
  return sum / static_cast<double>(years.size());
}

}  // namespace

OverlapReport overlap_report(const StateField& z_mrf, const YearSets& year_sets) {
  OverlapReport r;
  r.H = year_sets.H;
  r.L = year_sets.L;
  r.HL = year_sets.HL;
  r.LL = year_sets.LL;
  for (std::size_t t = 0; t < z_mrf.z_aimr.size(); ++t) {
    if (z_mrf.z_aimr[t] == State::Positive) r.ZH.push_back(t);
    if (z_mrf.z_aimr[t] == State::Negative) r.ZL.push_back(t);
  }
  r.h_in_zh = covered_fraction(r.H, r.ZH);
  r.hl_in_zh = covered_fraction(r.HL, r.ZH);
  r.l_in_zl = covered_fraction(r.L, r.ZL);
  r.ll_in_zl = covered_fraction(r.LL, r.ZL);
  return r;
}

YearAssignmentStats year_assignment_stats(const StateField& z, const YearSets& year_sets) {
  const auto c1 = count_per_year(z, State::Positive);
  const auto c2 = count_per_year(z, State::Negative);
  const std::vector<double> n1(c1.begin(), c1.end());
  const std::vector<double> n2(c2.begin(), c2.end());
  std::vector<double> d12(n1.size()), d21(n1.size());
  for (std::size_t t = 0; t < n1.size(); ++t) {
    d12[t] = n1[t] - n2[t];
    d21[t] = n2[t] - n1[t];
  }
  YearAssignmentStats r;
  r.N1Y = mean_of(n1).value_or(0.0);
  r.N2Y = mean_of(n2).value_or(0.0);
  r.N1H = mean_over(year_sets.H, n1);
  r.N2L = mean_over(year_sets.L, n2);
  r.D12H = mean_over(year_sets.H, d12);
  r.D21L = mean_over(year_sets.L, d21);
  return r;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationReport size_correlations(std::span<const Anomaly> anomalies) {
  struct Columns {
    std::vector<double> st, sp, tm, in;
  };
  std::array<Columns, 2> cols;
  for (const auto& a : anomalies) {
    auto& c = cols[a.sign == Sign::Positive ? 0 : 1];
    c.st.push_back(static_cast<double>(a.st_size));
    c.sp.push_back(static_cast<double>(a.spatial_size));
    c.tm.push_back(static_cast<double>(a.temporal_size));
    c.in.push_back(a.intensity);
  }
  CorrelationReport r;
  r.temporal_spatial = {pearson(cols[0].tm, cols[0].sp), pearson(cols[1].tm, cols[1].sp)};
  r.st_spatial = {pearson(cols[0].st, cols[0].sp), pearson(cols[1].st, cols[1].sp)};
  r.st_temporal = {pearson(cols[0].st, cols[0].tm), pearson(cols[1].st, cols[1].tm)};
  r.st_intensity = {pearson(cols[0].st, cols[0].in), pearson(cols[1].st, cols[1].in)};
  return r;
}

CaseReport case_report(const Anomaly& anomaly, const RainfallDataset& dataset,
                       const LocationStats& stats) {
  CaseReport r;
  r.anomaly_id = anomaly.id;
  r.sign = anomaly.sign;
  r.spatial_size = anomaly.spatial_size;
  r.temporal_size = anomaly.temporal_size;
  r.st_size = anomaly.st_size;
  if (anomaly.nodes.empty()) return r;
  r.first_year = dataset.years.at(anomaly.first_year_index());
  r.last_year = dataset.years.at(anomaly.last_year_index());

  std::set<LocationId> locations;
  std::map<std::size_t, std::pair<std::size_t, double>> per_year;
  for (const auto& n : anomaly.nodes) {
    locations.insert(n.s);
    auto& [count, sum] = per_year[n.t];
    ++count;
    sum += dataset.y(static_cast<std::size_t>(n.s), n.t);
  }
  double mu_sum = 0.0;
  for (const auto s : locations) {
    const auto& loc = dataset.grid.location(s);
    const double mu = stats.mu.at(static_cast<std::size_t>(s));
    r.sites.push_back({dataset.labels.at(static_cast<std::size_t>(s)), loc.lat, loc.lon, mu});
    mu_sum += mu;
  }
  r.long_term_mean = mu_sum / static_cast<double>(locations.size());
  for (const auto& [t, entry] : per_year) {
    r.years.push_back({dataset.years.at(t), entry.first,
                       entry.second / static_cast<double>(entry.first)});
  }
  r.intensity = anomaly_intensity(anomaly, dataset, stats);
  return r;
}

void write_anomalies_csv(std::span<const Anomaly> anomalies, const std::filesystem::path& path) {
  auto out = csv::open_output(path);
  out << "anomaly_id,sign,spatial_size,temporal_size,st_size,intensity\n";
  for (const auto& a : anomalies) {
    out << a.id << ',' << (a.sign == Sign::Positive ? '+' : '-') << ',' << a.spatial_size << ','
        << a.temporal_size << ',' << a.st_size << ',' << csv::format(a.intensity) << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

void write_membership_csv(std::span<const Anomaly> anomalies, const RainfallDataset& dataset,
                          const std::filesystem::path& path) {
  auto out = csv::open_output(path);
  out << "anomaly_id,location_id,year\n";
  for (const auto& a : anomalies) {
    for (const auto& n : a.nodes) {
      out << a.id << ',' << dataset.labels.at(static_cast<std::size_t>(n.s)) << ','
          << dataset.years.at(n.t) << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

StateField load_anomaly_field(const std::filesystem::path& anomalies_csv,
                              const std::filesystem::path& membership_csv,
                              const RainfallDataset& dataset) {
  std::unordered_map<long long, State> sign_of;
  {
    csv::Reader reader(anomalies_csv);
    reader.expect_header({"anomaly_id", "sign", "spatial_size", "temporal_size", "st_size",
                          "intensity"});
    while (reader.next()) {
      const auto sign = reader.fields()[1];
      if (sign != "+" && sign != "-") reader.fail("sign must be '+' or '-'");
      sign_of[reader.integer(0)] = sign == "+" ? State::Positive : State::Negative;
    }
  }
  std::unordered_map<std::int64_t, std::size_t> ids;
  for (std::size_t s = 0; s < dataset.labels.size(); ++s) ids.emplace(dataset.labels[s], s);

  StateField field(dataset.locations(), dataset.num_years());
  csv::Reader reader(membership_csv);
  reader.expect_header({"anomaly_id", "location_id", "year"});
  while (reader.next()) {
    const auto sign = sign_of.find(reader.integer(0));
    if (sign == sign_of.end()) reader.fail("unknown anomaly_id");
    const auto id = ids.find(reader.integer(1));
    if (id == ids.end()) reader.fail("unknown location_id");
    const int t = dataset.year_index(static_cast<int>(reader.integer(2)));
    if (t < 0) reader.fail("year outside the dataset's range");
    field.z(id->second, static_cast<std::size_t>(t)) = sign->second;
  }
  return field;
}

}  // namespace mrfanom
