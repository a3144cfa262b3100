#include "mrfanom/dataset.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "mrfanom/csv.hpp"
#include "mrfanom/error.hpp"

namespace mrfanom {

LocationId RainfallDataset::id_of_label(std::int64_t label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? -1 : static_cast<LocationId>(it - labels.begin());
}

int RainfallDataset::year_index(int year) const noexcept {
  if (years.empty() || year < years.front() || year > years.back()) return -1;
  return year - years.front();
}

std::vector<double> compute_aimr(const Field<double>& y) {
  std::vector<double> aimr(y.years(), 0.0);
  if (y.locations() == 0) return aimr;
  for (std::size_t s = 0; s < y.locations(); ++s) {
    const auto series = y.series(s);
    for (std::size_t t = 0; t < series.size(); ++t) aimr[t] += series[t];
  }
  for (auto& v : aimr) v /= static_cast<double>(y.locations());
  return aimr;
}

std::vector<double> compute_aimr(const RainfallDataset& dataset) { return compute_aimr(dataset.y); }

RainfallDataset make_dataset(std::span<const std::int64_t> labels,
                             std::span<const Coordinate> coords, std::vector<int> years,
                             const Field<double>& values, double spacing) {
  if (labels.size() != coords.size() || values.locations() != labels.size() ||
      values.years() != years.size()) {
    throw Error(ErrorCode::ShapeError, "labels, coordinates and values disagree in shape");
  }
  for (std::size_t t = 1; t < years.size(); ++t) {
    if (years[t] != years[t - 1] + 1) {
      throw Error(ErrorCode::ParseError, "years must be consecutive and increasing");
    }
  }
  {
    std::vector<std::int64_t> sorted(labels.begin(), labels.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::DuplicateLocation, "duplicate location label");
    }
  }
  for (double v : values.flat()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::InvalidValue, "rainfall must be finite and non-negative");
    }
  }

  RainfallDataset ds;
  ds.grid = build_grid(coords, spacing);
  ds.years = std::move(years);
  ds.labels.assign(labels.size(), 0);
  ds.y = Field<double>(labels.size(), ds.years.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto id = static_cast<std::size_t>(ds.grid.find(coords[i].lat, coords[i].lon));
    ds.labels[id] = labels[i];
    const auto src = values.series(i);
    std::copy(src.begin(), src.end(), ds.y.series(id).begin());
  }
  ds.aimr = compute_aimr(ds.y);
  return ds;
}

RainfallDataset load_csv(const std::filesystem::path& path, double spacing) {
  csv::Reader reader(path);
  reader.expect_header({"location_id", "lat", "lon", "year", "rain_mm_per_day"});

  struct Site {
    Coordinate coord;
    std::map<int, double> values;
  };
  std::map<std::int64_t, Site> sites;
  int min_year = 0;
  int max_year = 0;
  bool any = false;

  while (reader.next()) {
    const auto label = static_cast<std::int64_t>(reader.integer(0));
    const double lat = reader.number(1);
    const double lon = reader.number(2);
    const auto year = static_cast<int>(reader.integer(3));
    const double rain = reader.number(4);
    if (!std::isfinite(rain) || rain < 0.0) {
      throw Error(ErrorCode::InvalidValue, path.string() + ": line " +
                                               std::to_string(reader.line_number()) +
                                               ": rainfall must be finite and non-negative");
    }
    auto [it, inserted] = sites.try_emplace(label, Site{{lat, lon}, {}});
    if (!inserted && (it->second.coord.lat != lat || it->second.coord.lon != lon)) {
      reader.fail("location " + std::to_string(label) + " changes coordinates");
    }
    if (!it->second.values.emplace(year, rain).second) {
      reader.fail("duplicate row for location " + std::to_string(label) + ", year " +
                  std::to_string(year));
    }
    min_year = any ? std::min(min_year, year) : year;
    max_year = any ? std::max(max_year, year) : year;
    any = true;
  }
  if (!any) throw Error(ErrorCode::ParseError, path.string() + ": no data rows");

  std::vector<int> years;
  for (int y = min_year; y <= max_year; ++y) years.push_back(y);

  std::vector<std::int64_t> labels;
  std::vector<Coordinate> coords;
  Field<double> values(sites.size(), years.size());
  std::size_t i = 0;
  for (const auto& [label, site] : sites) {
    labels.push_back(label);
    coords.push_back(site.coord);
    for (std::size_t t = 0; t < years.size(); ++t) {
      const auto it = site.values.find(years[t]);
      if (it == site.values.end()) {
        throw Error(ErrorCode::IncompleteGrid, path.string() + ": location " +
                                                   std::to_string(label) + " has no value for " +
                                                   std::to_string(years[t]));
      }
      values(i, t) = it->second;
    }
    ++i;
  }
  return make_dataset(labels, coords, std::move(years), values, spacing);
}

void write_csv(const RainfallDataset& dataset, const std::filesystem::path& path) {
  auto out = csv::open_output(path);
  out << "location_id,lat,lon,year,rain_mm_per_day\n";
  for (std::size_t s = 0; s < dataset.locations(); ++s) {
    const auto& loc = dataset.grid.locations()[s];
    const std::string prefix = std::to_string(dataset.labels[s]) + ',' + csv::format(loc.lat) +
                               ',' + csv::format(loc.lon) + ',';
    for (std::size_t t = 0; t < dataset.num_years(); ++t) {
      out << prefix << dataset.years[t] << ',' << csv::format(dataset.y(s, t)) << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

int Calendar::days_in_year(int year) noexcept {
  return std::chrono::year{year}.is_leap() ? 366 : 365;
}

RainfallDataset aggregate_annual(std::span<const DailyObservation> daily, const Calendar& calendar,
                                 double spacing) {
  if (calendar.last_year < calendar.first_year) {
    throw Error(ErrorCode::InvalidParameter, "calendar has no years");
  }
  const auto n_years = static_cast<std::size_t>(calendar.last_year - calendar.first_year + 1);

  struct Site {
    Coordinate coord;
    std::vector<std::vector<bool>> seen;
    std::vector<double> sums;
  };
  std::map<std::int64_t, Site> sites;

  for (const auto& obs : daily) {
    if (obs.year < calendar.first_year || obs.year > calendar.last_year) continue;
    const auto t = static_cast<std::size_t>(obs.year - calendar.first_year);
    const int days = Calendar::days_in_year(obs.year);
    if (obs.day_of_year < 1 || obs.day_of_year > days) {
      throw Error(ErrorCode::InvalidValue, "day " + std::to_string(obs.day_of_year) +
                                               " out of range for " + std::to_string(obs.year));
    }
    if (!std::isfinite(obs.rain) || obs.rain < 0.0) {
      throw Error(ErrorCode::InvalidValue, "rainfall must be finite and non-negative");
    }
    auto [it, inserted] = sites.try_emplace(obs.label);
    auto& site = it->second;
    if (inserted) {
      site.coord = {obs.lat, obs.lon};
      site.sums.assign(n_years, 0.0);
      site.seen.resize(n_years);
      for (std::size_t k = 0; k < n_years; ++k) {
        site.seen[k].assign(
            static_cast<std::size_t>(Calendar::days_in_year(calendar.first_year + static_cast<int>(k))),
            false);
      }
    }
    auto&& flag = site.seen[t][static_cast<std::size_t>(obs.day_of_year - 1)];
    if (flag) {
      throw Error(ErrorCode::IncompleteSeries, "location " + std::to_string(obs.label) +
                                                   " repeats day " +
                                                   std::to_string(obs.day_of_year) + " of " +
                                                   std::to_string(obs.year));
    }
    flag = true;
    site.sums[t] += obs.rain;
  }
  if (sites.empty()) throw Error(ErrorCode::IncompleteSeries, "no observations in calendar range");

  std::vector<std::int64_t> labels;
  std::vector<Coordinate> coords;
  std::vector<int> years;
  for (int y = calendar.first_year; y <= calendar.last_year; ++y) years.push_back(y);
  Field<double> values(sites.size(), n_years);
  std::size_t i = 0;
  for (const auto& [label, site] : sites) {
    labels.push_back(label);
    coords.push_back(site.coord);
    for (std::size_t t = 0; t < n_years; ++t) {
      const auto& seen = site.seen[t];
      if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw Error(ErrorCode::IncompleteSeries, "location " + std::to_string(label) +
                                                     " is missing days in " +
                                                     std::to_string(years[t]));
      }
      values(i, t) = site.sums[t] / static_cast<double>(seen.size());
    }
    ++i;
  }
  return make_dataset(labels, coords, std::move(years), values, spacing);
}

}  // namespace mrfanom
