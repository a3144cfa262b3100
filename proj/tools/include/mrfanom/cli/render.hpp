#pragma once

#include <span>
#include <string>

#include <mrfanom/grid.hpp>
#include <mrfanom/state.hpp>

namespace mrfanom::cli {

/// One year of states (indexed by location id) drawn on the grid's bounding
/// lattice, north up, `cell` pixels per location. Cells outside the domain are
/// gray.

/// SVG with one square per lattice cell: blue (1), red (2), white (3), gray (absent).
std::string render_svg(const GridIndex& grid, std::span<const State> states, int cell);

/// Binary PGM; gray level 85 * state code, 0 for absent cells.
std::string render_pgm(const GridIndex& grid, std::span<const State> states, int cell);

}  // namespace mrfanom::cli
