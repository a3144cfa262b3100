#include "mrfanom/cli/render.hpp"

#include <sstream>

#include <mrfanom/error.hpp>

namespace mrfanom::cli {

namespace {

void check(const GridIndex& grid, std::span<const State> states, int cell) {
  if (states.size() != grid.size()) {
    throw Error(ErrorCode::ShapeError, "state vector does not match the grid");
  }
  if (cell < 1) throw Error(ErrorCode::InvalidParameter, "cell size must be at least 1 pixel");
}

const char* colour(State s) {
  switch (s) {
    case State::Positive: return "#0000ff";
    case State::Negative: return "#ff0000";
    case State::Normal: return "#ffffff";
  }
  return "#ffffff";
}

}  // namespace

std::string render_svg(const GridIndex& grid, std::span<const State> states, int cell) {
  check(grid, states, cell);
  const int w = grid.cols() * cell;
  const int h = grid.rows() * cell;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\" shape-rendering=\"crispEdges\">\n";
  for (int r = grid.rows() - 1; r >= 0; --r) {
    for (int c = 0; c < grid.cols(); ++c) {
      const LocationId id = grid.at(r, c);
      const char* fill = id < 0 ? "#808080" : colour(states[static_cast<std::size_t>(id)]);
      out << "<rect x=\"" << c * cell << "\" y=\"" << (grid.rows() - 1 - r) * cell
          << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_pgm(const GridIndex& grid, std::span<const State> states, int cell) {
  check(grid, states, cell);
  const int w = grid.cols() * cell;
  const int h = grid.rows() * cell;
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) {
    const int r = grid.rows() - 1 - y / cell;
    for (int x = 0; x < w; ++x) {
      const LocationId id = grid.at(r, x / cell);
      const int level = id < 0 ? 0 : 85 * code(states[static_cast<std::size_t>(id)]);
      out[header + static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
          static_cast<std::size_t>(x)] = static_cast<char>(level);
    }
  }
  return out;
}

}  // namespace mrfanom::cli
