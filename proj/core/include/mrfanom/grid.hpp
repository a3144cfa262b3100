#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mrfanom {

using LocationId = std::int32_t;

struct Coordinate {
  double lat = 0.0;
  double lon = 0.0;
};

struct Location {
  LocationId id = 0;
  double lat = 0.0;
  double lon = 0.0;
  // Integer lattice position relative to the south-west corner of the grid.
  std::int32_t row = 0;
  std::int32_t col = 0;
};

/// Spatial locations on a regular lattice with 8-neighbour adjacency.
///
/// Locations are ordered by longitude, then latitude, and carry dense ids
/// 0..S-1 in that order. The neighbour table is stored in compressed form;
/// `neighbors(s)` returns the ids sorted ascending. Immutable once built.
class GridIndex {
 public:
  GridIndex() = default;

  std::size_t size() const noexcept { return locations_.size(); }
  const std::vector<Location>& locations() const noexcept { return locations_; }
  const Location& location(LocationId s) const;

  /// Throws InvalidLocation for ids outside [0, S).
  std::span<const LocationId> neighbors(LocationId s) const;

  double spacing() const noexcept { return spacing_; }
  std::int32_t rows() const noexcept { return rows_; }
  std::int32_t cols() const noexcept { return cols_; }

  /// Id at a lattice cell, or -1 when the cell is not part of the domain.
  LocationId at(std::int32_t row, std::int32_t col) const noexcept;

  /// Id of the location at (lat, lon), or -1.
  LocationId find(double lat, double lon) const noexcept;

 private:
  friend GridIndex build_grid(std::span<const Coordinate>, double);

  std::vector<Location> locations_;
  std::vector<std::size_t> offsets_;
  std::vector<LocationId> adjacency_;
  std::unordered_map<std::int64_t, LocationId> cells_;
  double spacing_ = 1.0;
  double lat0_ = 0.0;
  double lon0_ = 0.0;
  std::int32_t rows_ = 0;
  std::int32_t cols_ = 0;
};

/// Builds the grid from distinct lattice coordinates.
///
/// Coordinates must lie on a regular lattice of the given spacing: after
/// subtracting the minimum latitude/longitude, every offset divided by the
/// spacing must be within 1e-9 of an integer. Irregular (masked) domains are
/// fine; missing neighbours are simply absent.
///
/// Throws DuplicateLocation or NonLatticeCoordinate.
GridIndex build_grid(std::span<const Coordinate> coords, double spacing = 1.0);

/// Sorted ids of the neighbours of `s`. Throws InvalidLocation.
std::vector<LocationId> neighbors(const GridIndex& grid, LocationId s);

}  // namespace mrfanom
