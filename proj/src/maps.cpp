#include "regionplan/maps.hpp"

#include <algorithm>
#include <cmath>

#include "regionplan/rng.hpp"
#include "regionplan/topology.hpp"

namespace regionplan {

ValidationReport validate_map(const GridMap& map) {
  ValidationReport report{map.width(), map.height(), map.free_count(), 0};
  report.obstacle_cells = map.size() - report.free_cells;
  return report;
}

ValidationReport validate_map(int width, int height, std::span<const Occupancy> cells) {
  return validate_map(GridMap(width, height, std::vector<Occupancy>(cells.begin(), cells.end())));
}

ForestParams ForestParams::preset(DensityClass density, int width, int height) {
  constexpr double kReferenceArea = 480.0 * 480.0;
  ForestParams p;
  p.density = density;
  const int base_count = density == DensityClass::kDense ? 160 : 50;
  const double area_scale = static_cast<double>(width) * static_cast<double>(height) / kReferenceArea;
  p.obstacle_count = std::max(1, static_cast<int>(std::lround(base_count * area_scale)));
  const double shorter = std::min(width, height);
  const double radius_scale = std::min(1.0, shorter / 128.0);
  p.radius_min = std::max(1.0, 6.0 * radius_scale);
  p.radius_max = std::max(p.radius_min, 14.0 * radius_scale);
  p.min_start_goal_separation = 0.25 * shorter;
  return p;
}

void ForestParams::validate() const {
  if (obstacle_count < 0) throw Error(ErrorKind::kInvalidArgument, "obstacle_count must be >= 0");
  if (!(radius_min >= 0.0) || !(radius_min <= radius_max) || !std::isfinite(radius_max)) {
    throw Error(ErrorKind::kInvalidArgument, "need 0 <= radius_min <= radius_max");
  }
  if (!(min_start_goal_separation >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "min_start_goal_separation must be >= 0");
  }
}

std::vector<Disk> sample_forest_disks(const ForestParams& params, std::uint64_t seed, int width,
                                      int height) {
  params.validate();
  Rng rng(seed);
  std::vector<Disk> disks;
  disks.reserve(static_cast<std::size_t>(params.obstacle_count));
  for (int i = 0; i < params.obstacle_count; ++i) {
    Disk d{};
    d.row = rng.uniform(-0.5, height - 0.5);
    d.col = rng.uniform(-0.5, width - 0.5);
    d.radius = rng.uniform(params.radius_min, params.radius_max);
    disks.push_back(d);
  }
  return disks;
}

GridMap generate_forest_map(const ForestParams& params, std::uint64_t seed, int width, int height) {
  if (width < 16 || height < 16) {
    throw Error(ErrorKind::kInvalidArgument, "forest maps must be at least 16x16");
  }
  GridMap map(width, height, Occupancy::kFree);
  for (const Disk& d : sample_forest_disks(params, seed, width, height)) {
    const int r0 = std::max(0, static_cast<int>(std::floor(d.row - d.radius)));
    const int r1 = std::min(height - 1, static_cast<int>(std::ceil(d.row + d.radius)));
    const int c0 = std::max(0, static_cast<int>(std::floor(d.col - d.radius)));
    const int c1 = std::min(width - 1, static_cast<int>(std::ceil(d.col + d.radius)));
    const double r2 = d.radius * d.radius;
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        const double dr = r - d.row;
        const double dc = c - d.col;
        if (dr * dr + dc * dc <= r2) map[Cell{r, c}] = Occupancy::kObstacle;
      }
    }
  }
  const double free_fraction = static_cast<double>(map.free_count()) / static_cast<double>(map.size());
  if (free_fraction < 0.05) {
    throw Error(ErrorKind::kInfeasibleParams,
                "obstacles leave only " + std::to_string(free_fraction * 100.0) + "% free space");
  }
  return map;
}

PlanningProblem sample_problem(const GridMap& map, std::uint64_t seed, double epsilon,
                               const SampleOptions& options) {
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "epsilon must be >= 0");
  std::vector<Cell> free_cells;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map.cells()[i] == Occupancy::kFree) free_cells.push_back(map.cell(i));
  }
  if (free_cells.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "map needs at least two free cells");
  }
  const ComponentLabeling components =
      connected_components(RegionMask::of_free_space(map), options.adjacency);

  Rng rng(seed);
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    const Cell start = free_cells[rng.below(free_cells.size())];
    const Cell goal = free_cells[rng.below(free_cells.size())];
    if (start == goal) continue;
    if (euclidean(start, goal) < options.min_separation) continue;
    if (components.labels[start] != components.labels[goal]) continue;
    return PlanningProblem{map, start, goal, epsilon};
  }
  throw Error(ErrorKind::kNoConnectedPair,
              "no connected start/goal pair found in " + std::to_string(options.max_attempts) +
                  " attempts");
}

}  // namespace regionplan
