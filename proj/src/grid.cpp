#include "regionplan/grid.hpp"

#include <algorithm>

#include "regionplan/plan_result.hpp"

namespace regionplan {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kMalformedGrid: return "MalformedGrid";
    case ErrorKind::kInfeasibleParams: return "InfeasibleParams";
    case ErrorKind::kNoConnectedPair: return "NoConnectedPair";
    case ErrorKind::kFormatError: return "FormatError";
    case ErrorKind::kValueError: return "ValueError";
    case ErrorKind::kOutOfBounds: return "OutOfBounds";
    case ErrorKind::kNonFiniteField: return "NonFiniteField";
    case ErrorKind::kEmptyDiagram: return "EmptyDiagram";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kNonFiniteInput: return "NonFiniteInput";
    case ErrorKind::kPathBlocked: return "PathBlocked";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kEmptyRegion: return "EmptyRegion";
    case ErrorKind::kDisconnectedRegion: return "DisconnectedRegion";
    case ErrorKind::kNoLocalPath: return "NoLocalPath";
    case ErrorKind::kNoPath: return "NoPath";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kMissingReference: return "MissingReference";
    case ErrorKind::kIoError: return "IoError";
  }
  return "Unknown";
}

std::size_t GridMap::free_count() const noexcept {
  return static_cast<std::size_t>(
      std::count(cells().begin(), cells().end(), Occupancy::kFree));
}

RegionMask RegionMask::of_free_space(const GridMap& map) {
  RegionMask mask(map.width(), map.height(), 0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    mask.cells()[i] = map.cells()[i] == Occupancy::kFree ? 1 : 0;
  }
  return mask;
}

std::size_t RegionMask::count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(cells().begin(), cells().end(), [](std::uint8_t v) { return v != 0; }));
}

ScalarField to_field(const ProbabilityMap& prob) {
  std::vector<double> values(prob.cells().begin(), prob.cells().end());
  return ScalarField(prob.width(), prob.height(), std::move(values));
}

ScalarField to_field(const RegionMask& mask) {
  std::vector<double> values(mask.size());
  std::transform(mask.cells().begin(), mask.cells().end(), values.begin(),
                 [](std::uint8_t v) { return v != 0 ? 1.0 : 0.0; });
  return ScalarField(mask.width(), mask.height(), std::move(values));
}

std::string to_string(Cell c) {
  return "(" + std::to_string(c.row) + ", " + std::to_string(c.col) + ")";
}

void validate_problem(const PlanningProblem& problem) {
  problem.map.require_in_bounds(problem.start);
  problem.map.require_in_bounds(problem.goal);
  if (!problem.map.is_free(problem.start)) {
    throw Error(ErrorKind::kInvalidArgument, "start " + to_string(problem.start) + " is an obstacle");
  }
  if (!problem.map.is_free(problem.goal)) {
    throw Error(ErrorKind::kInvalidArgument, "goal " + to_string(problem.goal) + " is an obstacle");
  }
  if (!(problem.epsilon >= 0.0) || !std::isfinite(problem.epsilon)) {
    throw Error(ErrorKind::kInvalidArgument, "epsilon must be finite and >= 0");
  }
}

double path_length(std::span<const Cell> path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += euclidean(path[i - 1], path[i]);
  return total;
}

bool is_valid_path(const PlanningProblem& problem, const std::vector<Cell>& path,
                   std::string* why) {
  auto fail = [&](std::string reason) {
    if (why != nullptr) *why = std::move(reason);
    return false;
  };
  if (path.empty()) return fail("empty path");
  if (path.front() != problem.start) return fail("path does not start at the start cell");
  if (!in_goal_region(problem, path.back())) {
    return fail("terminal cell " + to_string(path.back()) + " outside the goal region");
  }
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (!problem.map.is_free(path[i])) return fail("cell " + to_string(path[i]) + " not free");
    if (i > 0 && !are_adjacent(path[i - 1], path[i])) {
      return fail("cells " + to_string(path[i - 1]) + " and " + to_string(path[i]) +
                  " not 8-adjacent");
    }
  }
  return true;
}

}  // namespace regionplan
