#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mrfanom/field.hpp"
#include "mrfanom/grid.hpp"

namespace mrfanom {

/// Annual mean rainfall (mm/day) on a grid, with the per-year spatial mean (AIMR).
struct RainfallDataset {
  GridIndex grid;
  /// External location label for each grid id (the CSV `location_id` column).
  std::vector<std::int64_t> labels;
  /// Consecutive, strictly increasing year labels.
  std::vector<int> years;
  Field<double> y;
  std::vector<double> aimr;

  std::size_t locations() const noexcept { return y.locations(); }
  std::size_t num_years() const noexcept { return years.size(); }

  /// Grid id for an external label, or -1.
  LocationId id_of_label(std::int64_t label) const;
  /// Year index for a year label, or -1.
  int year_index(int year) const noexcept;
};

/// Assembles a dataset and computes its AIMR series.
///
/// `labels`, `coords` and the rows of `values` are parallel (input order);
/// the result is reordered to grid order. Throws InvalidValue for negative or
/// non-finite rainfall, ParseError for non-consecutive years, plus any
/// build_grid error.
RainfallDataset make_dataset(std::span<const std::int64_t> labels,
                             std::span<const Coordinate> coords, std::vector<int> years,
                             const Field<double>& values, double spacing = 1.0);

/// Per-year mean over all locations.
std::vector<double> compute_aimr(const Field<double>& y);
std::vector<double> compute_aimr(const RainfallDataset& dataset);

/// Reads `location_id,lat,lon,year,rain_mm_per_day`.
///
/// Throws ParseError (with line number) for malformed rows, InvalidValue for
/// negative rainfall, IncompleteGrid when any (location, year) cell is
/// missing, IoError when the file cannot be opened.
RainfallDataset load_csv(const std::filesystem::path& path, double spacing = 1.0);

/// Writes the dataset in the schema read by load_csv (round-trip exact).
void write_csv(const RainfallDataset& dataset, const std::filesystem::path& path);

/// One day of rainfall at one location.
struct DailyObservation {
  std::int64_t label = 0;
  double lat = 0.0;
  double lon = 0.0;
  int year = 0;
  int day_of_year = 1;  // 1-based
  double rain = 0.0;    // mm/day
};

/// Inclusive range of Gregorian years to aggregate.
struct Calendar {
  int first_year = 0;
  int last_year = 0;

  static int days_in_year(int year) noexcept;
};

/// Annual mean of daily rainfall for each location and year of `calendar`.
///
/// Every day of every year must be present exactly once for every location;
/// otherwise IncompleteSeries.
RainfallDataset aggregate_annual(std::span<const DailyObservation> daily, const Calendar& calendar,
                                 double spacing = 1.0);

}  // namespace mrfanom
