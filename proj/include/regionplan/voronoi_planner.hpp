#pragma once

#include <vector>

#include "regionplan/distance_transform.hpp"
#include "regionplan/grid.hpp"
#include "regionplan/plan_result.hpp"

namespace regionplan {

/// Ridge cells of the distance field, i.e. the discrete generalized Voronoi
/// diagram of the blocked cells.
///
/// A cell with positive clearance is a ridge cell when, along at least one of the
/// four lines through it (horizontal, vertical, both diagonals), neither neighbour
/// is strictly larger and at least one is strictly smaller. Out-of-grid
/// neighbours count as 0 with a virtual border and as +inf without one.
/// Endpoint cells hanging off a junction (one-cell spurs) are then removed.
///
/// Throws EmptyRegion if no cell has positive clearance.
RegionMask extract_skeleton(const DistanceField& dist);

struct SkeletonGraph {
  std::vector<Cell> nodes;               // row-major order
  std::vector<double> clearance;         // per node
  struct Edge {
    int to;
    double weight;                       // 1 or sqrt(2)
  };
  std::vector<std::vector<Edge>> edges;  // adjacency between skeleton cells
};

SkeletonGraph build_skeleton_graph(const RegionMask& skeleton, const DistanceField& dist,
                                   Adjacency adjacency = Adjacency::kEight);

/// Optimal path from a to b through free cells of `region_dilated` (octile A*).
/// Throws NoLocalPath if none exists, InvalidArgument if a or b is outside the region.
std::vector<Cell> repair_segment_astar(const GridMap& map, const RegionMask& region_dilated,
                                       Cell a, Cell b, Adjacency adjacency = Adjacency::kEight);

struct VoronoiOptions {
  double dilation = 2.0;
  bool virtual_border = true;
  Adjacency adjacency = Adjacency::kEight;
};

/// Plans inside a candidate region:
///   1. dilate the region (Euclidean, restricted to free space)
///   2. reject if start and goal are disconnected there (DisconnectedRegion)
///   3. distance transform and ridge skeleton of the dilated region
///   4. join skeleton fragments of the start's component with A* bridges
///   5. attach start and goal to their nearest skeleton cells with A*
///   6. Dijkstra along the skeleton graph
/// If the goal cell itself is not reachable, the nearest reachable cell of the
/// goal region is used. wall_time covers the whole call.
PlanResult plan_in_region(const PlanningProblem& problem, const RegionMask& region,
                          const VoronoiOptions& options = {});

}  // namespace regionplan
