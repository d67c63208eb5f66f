#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "regionplan/grid.hpp"

namespace regionplan {

struct PlanResult {
  bool success = false;
  std::vector<Cell> path;
  double cost = 0.0;        // path length in cells
  double wall_time = 0.0;   // seconds, monotonic clock
  std::size_t expanded = 0; // nodes expanded (search) or vertices added (trees)
  std::size_t region_px = 0;
  std::string error;        // error tag when success == false
};

/// Checks the success invariant: starts at the start cell, ends in the goal
/// region, every cell free, consecutive cells 8-adjacent. On failure writes a
/// reason to `why` when given.
bool is_valid_path(const PlanningProblem& problem, const std::vector<Cell>& path,
                   std::string* why = nullptr);

}  // namespace regionplan
