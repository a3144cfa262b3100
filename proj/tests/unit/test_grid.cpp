#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include <mrfanom/grid.hpp>

#include "support/fixtures.hpp"

using namespace mrfanom;
using mrfanom::test::error_of;

namespace {

std::vector<Coordinate> full_lattice(int rows, int cols) {
  std::vector<Coordinate> out;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out.push_back({double(r), double(c)});
  return out;
}

std::set<std::pair<double, double>> neighbour_coords(const GridIndex& g, double lat, double lon) {
  std::set<std::pair<double, double>> out;
  for (LocationId n : g.neighbors(g.find(lat, lon))) out.insert({g.location(n).lat, g.location(n).lon});
  return out;
}

}  // namespace

TEST_CASE("3x3 lattice: centre has 8 neighbours, corners 3") {
  const auto g = build_grid(full_lattice(3, 3));
  CHECK(g.size() == 9);
  CHECK(g.neighbors(g.find(1, 1)).size() == 8);
  for (auto [r, c] : std::initializer_list<std::pair<int, int>>{{0, 0}, {0, 2}, {2, 0}, {2, 2}}) CHECK(g.neighbors(g.find(r, c)).size() == 3);
  CHECK(g.neighbors(g.find(0, 1)).size() == 5);
}

TEST_CASE("single location has no neighbours") {
  const std::vector<Coordinate> one{{12.5, 77.5}};
  const auto g = build_grid(one);
  CHECK(g.neighbors(0).empty());
}

TEST_CASE("L-shaped domain") {
  const std::vector<Coordinate> l{{0, 0}, {0, 1}, {1, 0}, {2, 0}, {2, 1}};
  const auto g = build_grid(l);
  using P = std::set<std::pair<double, double>>;
  CHECK(neighbour_coords(g, 1, 0) == P{{0, 0}, {0, 1}, {2, 0}, {2, 1}});
  CHECK(neighbour_coords(g, 2, 1) == P{{2, 0}, {1, 0}});
  CHECK(g.at(1, 1) == -1);
}

TEST_CASE("ids follow longitude then latitude") {
  const std::vector<Coordinate> c{{5, 2}, {4, 1}, {4, 2}, {5, 1}};
  const auto g = build_grid(c);
  CHECK(g.location(0).lon == 1);
  CHECK(g.location(0).lat == 4);
  CHECK(g.location(1).lon == 1);
  CHECK(g.location(1).lat == 5);
  CHECK(g.location(2).lon == 2);
}

TEST_CASE("errors") {
  const std::vector<Coordinate> dup{{0, 0}, {0, 1}, {0, 0}};
  CHECK(error_of([&] { build_grid(dup); }) == ErrorCode::DuplicateLocation);
  const std::vector<Coordinate> off{{0, 0}, {0, 1.5}};
  CHECK(error_of([&] { build_grid(off); }) == ErrorCode::NonLatticeCoordinate);
  const auto g = build_grid(full_lattice(2, 2));
  CHECK(error_of([&] { g.neighbors(4); }) == ErrorCode::InvalidLocation);
  CHECK(error_of([&] { g.neighbors(-1); }) == ErrorCode::InvalidLocation);
}

TEST_CASE("half-degree spacing") {
  std::vector<Coordinate> c;
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k) c.push_back({8.25 + 0.5 * r, 70.75 + 0.5 * k});
  const auto g = build_grid(c, 0.5);
  CHECK(g.neighbors(g.find(8.75, 71.25)).size() == 8);
  CHECK(error_of([&] { build_grid(c, 1.0); }) == ErrorCode::NonLatticeCoordinate);
}

TEST_CASE("random masked domains: symmetric, irreflexive, bounded, even degree sum") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Coordinate> c;
    std::bernoulli_distribution keep(0.6);
    for (int r = 0; r < 12; ++r)
      for (int k = 0; k < 9; ++k)
        if (keep(rng)) c.push_back({double(r) - 3, double(k) + 60});
    if (c.empty()) continue;
    const auto g = build_grid(c);
    std::size_t degree_sum = 0;
    for (LocationId s = 0; s < LocationId(g.size()); ++s) {
      const auto nb = g.neighbors(s);
      degree_sum += nb.size();
      CHECK(nb.size() <= 8);
      CHECK(std::find(nb.begin(), nb.end(), s) == nb.end());
      for (LocationId n : nb) {
        const auto back = g.neighbors(n);
        CHECK(std::find(back.begin(), back.end(), s) != back.end());
        CHECK(std::abs(g.location(n).lat - g.location(s).lat) <= 1.0);
        CHECK(std::abs(g.location(n).lon - g.location(s).lon) <= 1.0);
      }
      // every lattice cell within one step that exists is a neighbour
      std::size_t expected = 0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          if ((dr || dc) && g.at(g.location(s).row + dr, g.location(s).col + dc) >= 0) ++expected;
      CHECK(nb.size() == expected);
    }
    CHECK(degree_sum % 2 == 0);
  }
}

TEST_CASE("adjacency does not depend on input order") {
  auto c = full_lattice(5, 4);
  c.erase(c.begin() + 7);
  c.erase(c.begin() + 2);
  const auto g1 = build_grid(c);
  std::mt19937_64 rng(3);
  std::shuffle(c.begin(), c.end(), rng);
  const auto g2 = build_grid(c);
  REQUIRE(g1.size() == g2.size());
  for (const auto& loc : g1.locations())
    CHECK(neighbour_coords(g1, loc.lat, loc.lon) == neighbour_coords(g2, loc.lat, loc.lon));
}

TEST_CASE("free neighbors() returns sorted ids") {
  const auto g = build_grid(full_lattice(4, 4));
  for (LocationId s = 0; s < 16; ++s) {
    const auto nb = neighbors(g, s);
    CHECK(std::is_sorted(nb.begin(), nb.end()));
  }
}
