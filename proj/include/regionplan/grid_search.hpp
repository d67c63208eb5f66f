#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "regionplan/grid.hpp"
#include "regionplan/plan_result.hpp"

namespace regionplan {

struct SearchOutcome {
  std::vector<Cell> path;  // empty when the goal is unreachable
  double cost = 0.0;
  std::size_t expanded = 0;
};

/// Best-first grid search with the octile heuristic (Manhattan under
/// 4-adjacency). `passable` must hold for both endpoints for a path to exist.
/// Ties on f are broken by larger g, then by smaller row-major index, so the
/// returned path is deterministic.
SearchOutcome astar_search(int width, int height, const std::function<bool(Cell)>& passable,
                           Cell start, Cell goal, Adjacency adjacency = Adjacency::kEight);

/// Octile A* over the free space of the problem's map, to the goal cell.
/// Throws NoPath if start and goal are disconnected.
PlanResult astar_grid(const PlanningProblem& problem, Adjacency adjacency = Adjacency::kEight);

}  // namespace regionplan
