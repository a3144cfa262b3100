#include "mrfanom/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mrfanom/error.hpp"

namespace mrfanom {

namespace {

constexpr double kLatticeTolerance = 1e-9;

std::int64_t cell_key(std::int32_t row, std::int32_t col) {
  return (static_cast<std::int64_t>(row) << 32) | static_cast<std::uint32_t>(col);
}

std::int32_t lattice_index(double offset, double spacing, double lat, double lon) {
  const double scaled = offset / spacing;
  const double rounded = std::round(scaled);
  if (!std::isfinite(scaled) || std::abs(scaled - rounded) > kLatticeTolerance ||
      rounded > static_cast<double>(std::numeric_limits<std::int32_t>::max() / 4)) {
    throw Error(ErrorCode::NonLatticeCoordinate,
                "(" + std::to_string(lat) + ", " + std::to_string(lon) +
                    ") is not on the lattice");
  }
  return static_cast<std::int32_t>(rounded);
}

}  // namespace

const Location& GridIndex::location(LocationId s) const {
  if (s < 0 || static_cast<std::size_t>(s) >= locations_.size()) {
    throw Error(ErrorCode::InvalidLocation, "location id " + std::to_string(s));
  }
  return locations_[static_cast<std::size_t>(s)];
}

std::span<const LocationId> GridIndex::neighbors(LocationId s) const {
  if (s < 0 || static_cast<std::size_t>(s) >= locations_.size()) {
    throw Error(ErrorCode::InvalidLocation, "location id " + std::to_string(s));
  }
  const auto i = static_cast<std::size_t>(s);
  return {adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

LocationId GridIndex::at(std::int32_t row, std::int32_t col) const noexcept {
  if (row < 0 || col < 0 || row >= rows_ || col >= cols_) return -1;
  const auto it = cells_.find(cell_key(row, col));
  return it == cells_.end() ? -1 : it->second;
}

LocationId GridIndex::find(double lat, double lon) const noexcept {
  const double r = (lat - lat0_) / spacing_;
  const double c = (lon - lon0_) / spacing_;
  const double rr = std::round(r);
  const double cr = std::round(c);
  if (std::abs(r - rr) > kLatticeTolerance || std::abs(c - cr) > kLatticeTolerance) return -1;
  if (rr < 0 || cr < 0 || rr >= rows_ || cr >= cols_) return -1;
  return at(static_cast<std::int32_t>(rr), static_cast<std::int32_t>(cr));
}

GridIndex build_grid(std::span<const Coordinate> coords, double spacing) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(ErrorCode::InvalidParameter, "grid spacing must be positive");
  }
  GridIndex grid;
  grid.spacing_ = spacing;
  if (coords.empty()) {
    grid.offsets_.assign(1, 0);
    return grid;
  }

  double lat0 = std::numeric_limits<double>::infinity();
  double lon0 = std::numeric_limits<double>::infinity();
  for (const auto& c : coords) {
    if (!std::isfinite(c.lat) || !std::isfinite(c.lon)) {
      throw Error(ErrorCode::NonLatticeCoordinate, "non-finite coordinate");
    }
    lat0 = std::min(lat0, c.lat);
    lon0 = std::min(lon0, c.lon);
  }
  grid.lat0_ = lat0;
  grid.lon0_ = lon0;

  std::vector<Location> locs;
  locs.reserve(coords.size());
  for (const auto& c : coords) {
    Location loc;
    loc.lat = c.lat;
    loc.lon = c.lon;
    loc.row = lattice_index(c.lat - lat0, spacing, c.lat, c.lon);
    loc.col = lattice_index(c.lon - lon0, spacing, c.lat, c.lon);
    locs.push_back(loc);
  }

  // Longitude first, latitude next.
  std::sort(locs.begin(), locs.end(), [](const Location& a, const Location& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  for (std::size_t i = 1; i < locs.size(); ++i) {
    if (locs[i].row == locs[i - 1].row && locs[i].col == locs[i - 1].col) {
      throw Error(ErrorCode::DuplicateLocation, "(" + std::to_string(locs[i].lat) + ", " +
                                                    std::to_string(locs[i].lon) + ")");
    }
  }

  std::int32_t max_row = 0;
  std::int32_t max_col = 0;
  for (std::size_t i = 0; i < locs.size(); ++i) {
    locs[i].id = static_cast<LocationId>(i);
    max_row = std::max(max_row, locs[i].row);
    max_col = std::max(max_col, locs[i].col);
  }
  grid.rows_ = max_row + 1;
  grid.cols_ = max_col + 1;
  grid.cells_.reserve(locs.size());
  for (const auto& loc : locs) grid.cells_.emplace(cell_key(loc.row, loc.col), loc.id);
  grid.locations_ = std::move(locs);

  grid.offsets_.assign(grid.locations_.size() + 1, 0);
  grid.adjacency_.reserve(grid.locations_.size() * 8);
  for (std::size_t i = 0; i < grid.locations_.size(); ++i) {
    const auto& loc = grid.locations_[i];
    const std::size_t begin = grid.adjacency_.size();
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const LocationId n = grid.at(loc.row + dr, loc.col + dc);
        if (n >= 0) grid.adjacency_.push_back(n);
      }
    }
    std::sort(grid.adjacency_.begin() + static_cast<std::ptrdiff_t>(begin), grid.adjacency_.end());
    grid.offsets_[i + 1] = grid.adjacency_.size();
  }
  return grid;
}

std::vector<LocationId> neighbors(const GridIndex& grid, LocationId s) {
  const auto span = grid.neighbors(s);
  return {span.begin(), span.end()};
}

}  // namespace mrfanom
