#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mrfanom/dataset.hpp"
#include "mrfanom/keyvalue.hpp"
#include "mrfanom/state.hpp"

namespace mrfanom {

enum class Sign { Positive, Negative };

/// A mean-shifted box of cells. Ranges are inclusive, rows/cols are lattice
/// indices and years are 0-based offsets from the first year.
struct PlantedBlock {
  Sign sign = Sign::Positive;
  int row0 = 0, row1 = 0;
  int col0 = 0, col1 = 0;
  int year0 = 0, year1 = 0;
  double shift = 2.0;  // in units of background_sigma

  std::size_t volume() const noexcept {
    return static_cast<std::size_t>(row1 - row0 + 1) * static_cast<std::size_t>(col1 - col0 + 1) *
           static_cast<std::size_t>(year1 - year0 + 1);
  }
};

struct SyntheticSpec {
  int rows = 10;
  int cols = 10;
  int years = 30;
  int first_year = 1901;
  double lat0 = 0.0;
  double lon0 = 0.0;
  double spacing = 1.0;
  double background_mu = 10.0;
  double background_sigma = 1.0;
  std::vector<PlantedBlock> blocks;
  std::uint64_t seed = 1;
};

struct GroundTruth {
  Field<State> labels;
};

/// Draws y ~ Normal(mu, sigma) per cell, shifting the mean by +/- shift*sigma
/// inside planted blocks. Values below zero are clamped to zero.
///
/// Location labels are row-major (`row * cols + col`). Deterministic for a
/// fixed seed. Throws InvalidConfig for out-of-range blocks and
/// ConflictingBlocks when blocks of opposite sign overlap.
std::pair<RainfallDataset, GroundTruth> generate_synthetic(const SyntheticSpec& spec);

/// Parses the `key = value` synthetic spec. Keys: rows, cols, years,
/// first_year, lat0, lon0, spacing, background_mu, background_sigma, seed and
/// any number of `block = <+|-> rows=R0:R1 cols=C0:C1 years=Y0:Y1 shift=K`.
SyntheticSpec parse_synthetic_spec(const KeyValueConfig& config);
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);

std::string format_block(const PlantedBlock& block);

}  // namespace mrfanom
