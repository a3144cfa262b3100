#include "mrfanom/lwa.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

#include "mrfanom/csv.hpp"
#include "mrfanom/error.hpp"

namespace mrfanom {

MeanStd population_mean_std(std::span<const double> values) {
  if (values.empty()) return {};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

std::vector<LocationId> LocationStats::degenerate() const {
  std::vector<LocationId> out;
  for (std::size_t s = 0; s < sigma.size(); ++s) {
    if (sigma[s] == 0.0) out.push_back(static_cast<LocationId>(s));
  }
  return out;
}

LocationStats location_stats(const RainfallDataset& dataset) {
  if (dataset.num_years() < 2) {
    throw Error(ErrorCode::InsufficientYears,
                "need at least 2 years, got " + std::to_string(dataset.num_years()));
  }
  LocationStats stats;
  stats.mu.resize(dataset.locations());
  stats.sigma.resize(dataset.locations());
  for (std::size_t s = 0; s < dataset.locations(); ++s) {
    const auto ms = population_mean_std(dataset.y.series(s));
    stats.mu[s] = ms.mean;
    stats.sigma[s] = ms.std;
  }
  const auto aimr = population_mean_std(dataset.aimr);
  stats.mu_aimr = aimr.mean;
  stats.sigma_aimr = aimr.std;
  return stats;
}

namespace {

State threshold(double y, double mu, double sigma, double k) {
  if (sigma == 0.0) return State::Normal;
  if (y >= mu + k * sigma) return State::Positive;
  if (y <= mu - k * sigma) return State::Negative;
  return State::Normal;
}

}  // namespace

StateField lwa_assign(const RainfallDataset& dataset, const LocationStats& stats, double k) {
  if (stats.mu.size() != dataset.locations()) {
    throw Error(ErrorCode::ShapeError, "stats do not match dataset");
  }
  StateField z(dataset.locations(), dataset.num_years());
  for (std::size_t s = 0; s < dataset.locations(); ++s) {
    for (std::size_t t = 0; t < dataset.num_years(); ++t) {
      z.z(s, t) = threshold(dataset.y(s, t), stats.mu[s], stats.sigma[s], k);
    }
  }
  for (std::size_t t = 0; t < dataset.num_years(); ++t) {
    z.z_aimr[t] = threshold(dataset.aimr[t], stats.mu_aimr, stats.sigma_aimr, k);
  }
  return z;
}

std::vector<std::size_t> count_per_year(const StateField& z, State state) {
  std::vector<std::size_t> counts(z.years(), 0);
  for (std::size_t s = 0; s < z.locations(); ++s) {
    const auto series = z.z.series(s);
    for (std::size_t t = 0; t < series.size(); ++t) counts[t] += series[t] == state ? 1 : 0;
  }
  return counts;
}

YearSets widespread_year_sets(const StateField& z0) {
  YearSets sets;
  sets.n1 = count_per_year(z0, State::Positive);
  sets.n2 = count_per_year(z0, State::Negative);
  const std::vector<double> n1(sets.n1.begin(), sets.n1.end());
  const std::vector<double> n2(sets.n2.begin(), sets.n2.end());
  const auto m1 = population_mean_std(n1);
  const auto m2 = population_mean_std(n2);
  sets.mu_n1 = m1.mean;
  sets.sigma_n1 = m1.std;
  sets.mu_n2 = m2.mean;
  sets.sigma_n2 = m2.std;
  sets.hl_degenerate = m1.std == 0.0;
  sets.ll_degenerate = m2.std == 0.0;
  for (std::size_t t = 0; t < z0.years(); ++t) {
    if (z0.z_aimr[t] == State::Positive) sets.H.push_back(t);
    if (z0.z_aimr[t] == State::Negative) sets.L.push_back(t);
    if (n1[t] >= sets.hl_threshold()) sets.HL.push_back(t);
    if (n2[t] >= sets.ll_threshold()) sets.LL.push_back(t);
  }
  return sets;
}

void write_state_csv(const StateField& field, const RainfallDataset& dataset,
                     const std::filesystem::path& path, bool include_aimr) {
  if (field.locations() != dataset.locations() || field.years() != dataset.num_years()) {
    throw Error(ErrorCode::ShapeError, "state field does not match dataset");
  }
  auto out = csv::open_output(path);
  out << "location_id,year,state\n";
  for (std::size_t s = 0; s < field.locations(); ++s) {
    for (std::size_t t = 0; t < field.years(); ++t) {
      out << dataset.labels[s] << ',' << dataset.years[t] << ',' << code(field.z(s, t)) << '\n';
    }
  }
  if (include_aimr) {
    for (std::size_t t = 0; t < field.years(); ++t) {
      out << "aimr," << dataset.years[t] << ',' << code(field.z_aimr[t]) << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

StateField load_state_csv(const std::filesystem::path& path, const RainfallDataset& dataset) {
  csv::Reader reader(path);
  reader.expect_header({"location_id", "year", "state"});
  std::unordered_map<std::int64_t, std::size_t> ids;
  for (std::size_t s = 0; s < dataset.labels.size(); ++s) ids.emplace(dataset.labels[s], s);

  StateField field(dataset.locations(), dataset.num_years());
  Field<std::uint8_t> seen(dataset.locations(), dataset.num_years(), 0);
  while (reader.next()) {
    const int year_index = dataset.year_index(static_cast<int>(reader.integer(1)));
    if (year_index < 0) reader.fail("year outside the dataset's range");
    const auto state = state_from_code(reader.integer(2));
    if (!state) reader.fail("state must be 1, 2 or 3");
    const auto t = static_cast<std::size_t>(year_index);
    if (reader.fields()[0] == "aimr") {
      field.z_aimr[t] = *state;
      continue;
    }
    const auto it = ids.find(reader.integer(0));
    if (it == ids.end()) reader.fail("unknown location_id");
    if (seen(it->second, t)) reader.fail("duplicate row");
    seen(it->second, t) = 1;
    field.z(it->second, t) = *state;
  }
  for (std::size_t s = 0; s < dataset.locations(); ++s) {
    for (std::size_t t = 0; t < dataset.num_years(); ++t) {
      if (!seen(s, t)) {
        throw Error(ErrorCode::IncompleteGrid,
                    path.string() + ": no state for location " + std::to_string(dataset.labels[s]) +
                        ", year " + std::to_string(dataset.years[t]));
      }
    }
  }
  return field;
}

}  // namespace mrfanom
