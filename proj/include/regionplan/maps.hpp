#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "regionplan/grid.hpp"

namespace regionplan {

struct ValidationReport {
  int width = 0;
  int height = 0;
  std::size_t free_cells = 0;
  std::size_t obstacle_cells = 0;
};

ValidationReport validate_map(const GridMap& map);

/// Validates a raw row-major buffer; throws MalformedGrid on length mismatch.
ValidationReport validate_map(int width, int height, std::span<const Occupancy> cells);

enum class DensityClass { kDense, kSparse };

struct ForestParams {
  int obstacle_count = 160;
  double radius_min = 6.0;
  double radius_max = 14.0;
  DensityClass density = DensityClass::kDense;
  double min_start_goal_separation = 120.0;

  /// Defaults for 480x480 (dense: 160 disks, sparse: 50, radius [6, 14]).
  /// Other sizes scale the count by area and the separation by the shorter side;
  /// radii shrink only below 128 cells.
  static ForestParams preset(DensityClass density, int width = 480, int height = 480);

  void validate() const;
};

struct Disk {
  double row;
  double col;
  double radius;
};

/// Disk centres uniform over the grid area, radii uniform in [radius_min, radius_max].
std::vector<Disk> sample_forest_disks(const ForestParams& params, std::uint64_t seed, int width,
                                      int height);

/// Rasterizes disks (cell centre within radius => obstacle) at uniformly sampled
/// centres. Deterministic in (params, seed, size).
GridMap generate_forest_map(const ForestParams& params, std::uint64_t seed, int width, int height);

struct SampleOptions {
  double min_separation = 1.0;
  int max_attempts = 10000;
  Adjacency adjacency = Adjacency::kEight;
};

/// Draws a start/goal pair of distinct free cells that are connected in free space
/// and at least `min_separation` apart. Throws NoConnectedPair after max_attempts.
PlanningProblem sample_problem(const GridMap& map, std::uint64_t seed, double epsilon,
                               const SampleOptions& options = {});

}  // namespace regionplan
