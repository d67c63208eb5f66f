#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "regionplan/grid.hpp"
#include "regionplan/plan_result.hpp"

namespace regionplan {

/// Continuous position in cell units; cell (r, c) covers [r-0.5, r+0.5) x [c-0.5, c+0.5).
struct Point {
  double row = 0.0;
  double col = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.row - b.row, a.col - b.col); }
inline Point center_of(Cell c) { return Point{static_cast<double>(c.row), static_cast<double>(c.col)}; }
Cell cell_of(Point p);

/// Every cell the segment touches, in traversal order. When the segment passes
/// exactly through a cell corner both side cells are included. Consecutive
/// cells are 8-adjacent.
std::vector<Cell> supercover_cells(Point a, Point b);

struct RrtParams {
  int max_iters = 10000;
  double step_size = 8.0;
  double goal_bias = 0.05;
  // Neighbourhood radius max(rewire_floor, gamma * sqrt(ln n / n)); gamma <= 0
  // selects the free-area based value 2 * sqrt(1.5 * free_area / pi).
  double rewire_gamma = 0.0;
  double rewire_floor = 16.0;
  // Iterations to keep refining after the first solution; negative = run to max_iters.
  int refine_iters = -1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct InformedSample {
  Point point;
  double c_best;
};

/// Optional per-run log.
struct RrtTrace {
  std::vector<double> best_cost;             // after each iteration, +inf before a solution
  std::vector<InformedSample> informed;      // samples drawn from the informed set
  std::size_t first_solution_iter = 0;
};

/// RRT* with goal bias, supercover collision checks, choose-parent and rewiring.
/// Solutions end at the goal cell when the final segment is clear. Failure is
/// reported through success == false.
PlanResult rrt_star(const PlanningProblem& problem, const RrtParams& params,
                    RrtTrace* trace = nullptr);

/// As rrt_star until the first solution; afterwards samples are drawn uniformly
/// from the ellipse with foci start/goal and transverse diameter c_best.
PlanResult informed_rrt_star(const PlanningProblem& problem, const RrtParams& params,
                             RrtTrace* trace = nullptr);

}  // namespace regionplan
