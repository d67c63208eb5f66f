#include "regionplan/grid_search.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <queue>

namespace regionplan {

namespace {

struct OpenEntry {
  double f;
  double g;
  std::size_t index;
};

// priority_queue pops the "largest"; invert so the smallest f comes first.
struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.index > b.index;
  }
};

double heuristic(Cell a, Cell b, Adjacency adjacency) {
  if (adjacency == Adjacency::kFour) return std::abs(a.row - b.row) + std::abs(a.col - b.col);
  return octile(a, b);
}

}  // namespace

SearchOutcome astar_search(int width, int height, const std::function<bool(Cell)>& passable,
                           Cell start, Cell goal, Adjacency adjacency) {
  SearchOutcome out;
  const Grid<std::uint8_t> shape(width, height, 0);
  if (!shape.in_bounds(start) || !shape.in_bounds(goal) || !passable(start) || !passable(goal)) {
    return out;
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<double> g(shape.size(), kInf);
  std::vector<std::size_t> parent(shape.size(), kNone);
  std::vector<std::uint8_t> closed(shape.size(), 0);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;

  const std::size_t start_index = shape.index(start);
  const std::size_t goal_index = shape.index(goal);
  g[start_index] = 0.0;
  open.push({heuristic(start, goal, adjacency), 0.0, start_index});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed[top.index] != 0) continue;
    closed[top.index] = 1;
    ++out.expanded;
    if (top.index == goal_index) break;
    const Cell c = shape.cell(top.index);
    for (const Offset o : neighbor_offsets(adjacency)) {
      const Cell n{c.row + o.drow, c.col + o.dcol};
      if (!shape.in_bounds(n)) continue;
      const std::size_t ni = shape.index(n);
      if (closed[ni] != 0 || !passable(n)) continue;
      const double ng = top.g + step_length(o);
      if (ng < g[ni]) {
        g[ni] = ng;
        parent[ni] = top.index;
        open.push({ng + heuristic(n, goal, adjacency), ng, ni});
      }
    }
  }

  if (closed[goal_index] == 0) return out;
  for (std::size_t i = goal_index; i != kNone; i = parent[i]) out.path.push_back(shape.cell(i));
  std::reverse(out.path.begin(), out.path.end());
  out.cost = g[goal_index];
  return out;
}

PlanResult astar_grid(const PlanningProblem& problem, Adjacency adjacency) {
  validate_problem(problem);
  const auto t0 = std::chrono::steady_clock::now();
  const GridMap& map = problem.map;
  SearchOutcome found = astar_search(
      map.width(), map.height(), [&map](Cell c) { return map[c] == Occupancy::kFree; },
      problem.start, problem.goal, adjacency);
  const auto t1 = std::chrono::steady_clock::now();
  if (found.path.empty()) {
    throw Error(ErrorKind::kNoPath, "free space disconnects " + to_string(problem.start) +
                                        " and " + to_string(problem.goal));
  }
  PlanResult result;
  result.success = true;
  result.path = std::move(found.path);
  result.cost = found.cost;
  result.expanded = found.expanded;
  result.wall_time = std::chrono::duration<double>(t1 - t0).count();
  return result;
}

}  // namespace regionplan
