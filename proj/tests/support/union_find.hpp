#pragma once

// Reference component labelling: materialise every same-state edge of the
// location-year graph, then merge with a disjoint-set forest.

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include <mrfanom/grid.hpp>
#include <mrfanom/state.hpp>

namespace mrfanom::test {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

/// Components as sets of (location, year) pairs, with their shared state.
struct RefComponent {
  State state;
  std::vector<std::pair<LocationId, std::size_t>> nodes;  // sorted
  friend bool operator<(const RefComponent& a, const RefComponent& b) {
    return a.nodes < b.nodes;
  }
  friend bool operator==(const RefComponent&, const RefComponent&) = default;
};

inline std::vector<RefComponent> union_find_components(const StateField& z, const GridIndex& grid) {
  const std::size_t S = z.locations(), T = z.years();
  auto node = [T](std::size_t s, std::size_t t) { return s * T + t; };
  DisjointSets sets(S * T);

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  const auto& locs = grid.locations();
  for (std::size_t a = 0; a < S; ++a) {
    for (std::size_t b = a + 1; b < S; ++b) {
      const auto dr = std::abs(locs[a].row - locs[b].row);
      const auto dc = std::abs(locs[a].col - locs[b].col);
      if (dr > 1 || dc > 1) continue;
      for (std::size_t t = 0; t < T; ++t) edges.emplace_back(node(a, t), node(b, t));
    }
    for (std::size_t t = 0; t + 1 < T; ++t) edges.emplace_back(node(a, t), node(a, t + 1));
  }
  const auto flat = z.z.flat();
  for (const auto& [u, v] : edges) {
    if (flat[u] == flat[v] && is_anomalous(flat[u])) sets.unite(u, v);
  }

  std::vector<std::vector<std::size_t>> groups(S * T);
  for (std::size_t u = 0; u < S * T; ++u)
    if (is_anomalous(flat[u])) groups[sets.find(u)].push_back(u);
  std::vector<RefComponent> out;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    RefComponent c{flat[g.front()], {}};
    for (std::size_t u : g) c.nodes.emplace_back(static_cast<LocationId>(u / T), u % T);
    std::sort(c.nodes.begin(), c.nodes.end());
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mrfanom::test
