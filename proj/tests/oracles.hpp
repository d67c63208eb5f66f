// Independent reference implementations used only by the tests. They favour
// obviousness over speed and share no code with the library beyond plain types.
#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "regionplan/grid.hpp"
#include "regionplan/rng.hpp"
#include "regionplan/topology.hpp"

namespace oracle {

using regionplan::Adjacency;
using regionplan::Cell;
using regionplan::GridMap;
using regionplan::Occupancy;
using regionplan::RegionMask;
using regionplan::ScalarField;

inline std::vector<Cell> neighbours(Cell c, Adjacency adj) {
  std::vector<Cell> out;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (adj == Adjacency::kFour && dr != 0 && dc != 0) continue;
      out.push_back({c.row + dr, c.col + dc});
    }
  }
  return out;
}

// Cells reachable from `from` through cells where include(cell) holds.
template <typename Include>
std::set<Cell> flood_fill(int width, int height, Cell from, Include include,
                          Adjacency adj = Adjacency::kEight) {
  std::set<Cell> seen;
  auto inside = [&](Cell c) { return c.row >= 0 && c.col >= 0 && c.row < height && c.col < width; };
  if (!inside(from) || !include(from)) return seen;
  std::deque<Cell> queue{from};
  seen.insert(from);
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (const Cell n : neighbours(c, adj)) {
      if (inside(n) && include(n) && seen.insert(n).second) queue.push_back(n);
    }
  }
  return seen;
}

inline std::set<Cell> flood_fill(const RegionMask& mask, Cell from, Adjacency adj = Adjacency::kEight) {
  return flood_fill(mask.width(), mask.height(), from, [&](Cell c) { return mask[c] != 0; }, adj);
}

inline std::set<Cell> flood_fill_free(const GridMap& map, Cell from, Adjacency adj = Adjacency::kEight) {
  return flood_fill(map.width(), map.height(), from,
                    [&](Cell c) { return map[c] == Occupancy::kFree; }, adj);
}

inline int count_components(const RegionMask& mask, Adjacency adj = Adjacency::kEight) {
  std::set<Cell> visited;
  int count = 0;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (mask[{r, c}] == 0 || visited.contains({r, c})) continue;
      ++count;
      for (const Cell x : flood_fill(mask, {r, c}, adj)) visited.insert(x);
    }
  }
  return count;
}

// Shortest 8-connected path cost over free cells (plain Dijkstra, no heuristic).
inline std::optional<double> dijkstra_cost(const GridMap& map, Cell start, Cell goal,
                                           Adjacency adj = Adjacency::kEight) {
  if (map[start] != Occupancy::kFree || map[goal] != Occupancy::kFree) return std::nullopt;
  std::map<Cell, double> dist;
  using Item = std::pair<double, Cell>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[start] = 0.0;
  open.push({0.0, start});
  while (!open.empty()) {
    const auto [d, c] = open.top();
    open.pop();
    if (d > dist[c]) continue;
    if (c == goal) return d;
    for (const Cell n : neighbours(c, adj)) {
      if (!map.in_bounds(n) || map[n] != Occupancy::kFree) continue;
      const double step = (n.row != c.row && n.col != c.col) ? std::sqrt(2.0) : 1.0;
      const auto it = dist.find(n);
      if (it == dist.end() || d + step < it->second) {
        dist[n] = d + step;
        open.push({d + step, n});
      }
    }
  }
  return std::nullopt;
}

// 0-dimensional superlevel persistence by sweeping every distinct value and
// recomputing the components of {f >= t} from scratch with flood fill.
inline regionplan::PersistenceDiagram persistence_sweep(const ScalarField& f,
                                                        Adjacency adj = Adjacency::kEight) {
  std::vector<double> levels(f.cells().begin(), f.cells().end());
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  regionplan::PersistenceDiagram diagram;
  // Each component of the previous level, keyed by a representative cell, with its birth.
  std::vector<std::pair<std::set<Cell>, double>> previous;
  for (const double t : levels) {
    RegionMask mask(f.width(), f.height(), 0);
    for (std::size_t i = 0; i < f.size(); ++i) mask.cells()[i] = f.cells()[i] >= t ? 1 : 0;
    std::vector<std::pair<std::set<Cell>, double>> current;
    std::set<Cell> visited;
    for (int r = 0; r < f.height(); ++r) {
      for (int c = 0; c < f.width(); ++c) {
        if (mask[{r, c}] == 0 || visited.contains({r, c})) continue;
        const std::set<Cell> comp = flood_fill(mask, {r, c}, adj);
        visited.insert(comp.begin(), comp.end());
        std::vector<double> births;
        for (const auto& [old, birth] : previous) {
          if (comp.contains(*old.begin())) births.push_back(birth);
        }
        if (births.empty()) {
          current.push_back({comp, t});
          continue;
        }
        std::sort(births.begin(), births.end(), std::greater<>());
        for (std::size_t k = 1; k < births.size(); ++k) diagram.points.push_back({births[k], t});
        current.push_back({comp, births[0]});
      }
    }
    previous = std::move(current);
  }
  if (!levels.empty()) diagram.points.push_back({levels.front(), levels.back()});
  regionplan::sort_diagram(diagram);
  return diagram;
}

inline double linf(const regionplan::PersistencePoint& a, const regionplan::PersistencePoint& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

// Symmetric Hausdorff distance by enumerating all pairs.
inline double hausdorff(const regionplan::PersistenceDiagram& a,
                        const regionplan::PersistenceDiagram& b) {
  auto directed = [](const auto& from, const auto& to) {
    double worst = 0.0;
    for (const auto& p : from.points) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to.points) best = std::min(best, linf(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

// Distance from each cell centre to the nearest site by scanning all sites.
// With border, the ring of cells just outside the grid counts as sites.
inline regionplan::Grid<double> brute_distance(int width, int height,
                                               const std::vector<Cell>& sites, bool border) {
  std::vector<Cell> all = sites;
  if (border) {
    for (int r = -1; r <= height; ++r) {
      all.push_back({r, -1});
      all.push_back({r, width});
    }
    for (int c = 0; c < width; ++c) {
      all.push_back({-1, c});
      all.push_back({height, c});
    }
  }
  regionplan::Grid<double> out(width, height, std::numeric_limits<double>::infinity());
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      for (const Cell s : all) out[{r, c}] = std::min(out[{r, c}], regionplan::euclidean({r, c}, s));
    }
  }
  return out;
}

inline GridMap random_map(regionplan::Rng& rng, int width, int height, double obstacle_prob) {
  GridMap map(width, height, Occupancy::kFree);
  for (auto& v : map.cells()) v = rng.uniform() < obstacle_prob ? Occupancy::kObstacle : Occupancy::kFree;
  return map;
}

inline RegionMask random_mask(regionplan::Rng& rng, int width, int height, double density) {
  RegionMask mask(width, height, 0);
  for (auto& v : mask.cells()) v = rng.uniform() < density ? 1 : 0;
  return mask;
}

// Field whose values come from a palette of at most `levels` distinct values.
inline ScalarField random_levels_field(regionplan::Rng& rng, int width, int height, int levels) {
  std::vector<double> palette;
  for (int i = 0; i < levels; ++i) palette.push_back(std::round(rng.uniform() * 1000.0) / 1000.0);
  ScalarField f(width, height, 0.0);
  for (auto& v : f.cells()) v = palette[rng.below(palette.size())];
  return f;
}

}  // namespace oracle
