#include <gtest/gtest.h>

#include "oracles.hpp"
#include "regionplan/distance_transform.hpp"
#include "regionplan/grid_search.hpp"
#include "regionplan/maps.hpp"
#include "regionplan/proposal.hpp"
#include "regionplan/voronoi_planner.hpp"

using namespace regionplan;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kIoError;
}

// L-shaped corridor nine cells wide: a horizontal arm (rows 1-9) joined to a
// vertical arm (columns 21-29); everything else is obstacle.
GridMap l_corridor() {
  GridMap map(31, 41, Occupancy::kObstacle);
  for (int r = 1; r <= 9; ++r) {
    for (int c = 1; c <= 29; ++c) map[{r, c}] = Occupancy::kFree;
  }
  for (int r = 1; r <= 39; ++r) {
    for (int c = 21; c <= 29; ++c) map[{r, c}] = Occupancy::kFree;
  }
  return map;
}

double min_clearance(const std::vector<Cell>& path, const DistanceField& dist) {
  double m = std::numeric_limits<double>::infinity();
  for (const Cell c : path) m = std::min(m, dist.values[c]);
  return m;
}

}  // namespace

TEST(Skeleton, StraightCorridorGivesMiddleRow) {
  GridMap map(12, 5, Occupancy::kFree);
  for (int c = 0; c < 12; ++c) {
    map[{0, c}] = Occupancy::kObstacle;
    map[{4, c}] = Occupancy::kObstacle;
  }
  const RegionMask skeleton = extract_skeleton(distance_transform(map, RegionMask::full(12, 5), false));
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 12; ++c) EXPECT_EQ(skeleton.contains({r, c}), r == 2) << r << "," << c;
  }
}

TEST(Skeleton, SingleCellRegion) {
  const GridMap map(6, 6, Occupancy::kFree);
  RegionMask region(6, 6, 0);
  region.set({3, 2}, true);
  const RegionMask skeleton = extract_skeleton(distance_transform(map, region));
  EXPECT_EQ(skeleton.count(), 1u);
  EXPECT_TRUE(skeleton.contains({3, 2}));
}

TEST(Skeleton, EmptySquareContainsCentre) {
  const GridMap map(5, 5, Occupancy::kFree);
  EXPECT_TRUE(extract_skeleton(distance_transform(map, RegionMask::full(5, 5), true)).contains({2, 2}));
}

TEST(Skeleton, FullyBlockedRegionIsEmpty) {
  const GridMap map(4, 4, Occupancy::kObstacle);
  EXPECT_EQ(kind_of([&] { extract_skeleton(distance_transform(map, RegionMask::full(4, 4))); }),
            ErrorKind::kEmptyRegion);
}

TEST(Skeleton, RidgeCellsAreLocalMaximaAlongSomeLine) {
  Rng rng(1);
  for (int i = 0; i < 30; ++i) {
    const GridMap map = oracle::random_map(rng, 20, 20, 0.1);
    const DistanceField dist = distance_transform(map, RegionMask::full(20, 20), true);
    const RegionMask skeleton = extract_skeleton(dist);
    for (int r = 0; r < 20; ++r) {
      for (int c = 0; c < 20; ++c) {
        if (!skeleton.contains({r, c})) continue;
        ASSERT_GT(dist.values[Cell(r, c)], 0.0);
        bool ridge = false;
        for (const auto [dr, dc] : {std::pair{0, 1}, {1, 0}, {1, 1}, {1, -1}}) {
          auto value = [&](Cell q) { return dist.values.in_bounds(q) ? dist.values[q] : 0.0; };
          const double here = dist.values[Cell(r, c)];
          const double a = value({r + dr, c + dc});
          const double b = value({r - dr, c - dc});
          ridge = ridge || (here >= a && here >= b && (here > a || here > b));
        }
        ASSERT_TRUE(ridge);
      }
    }
  }
}

TEST(SkeletonGraph, EdgesJoinAdjacentSkeletonCells) {
  const GridMap map(9, 9, Occupancy::kFree);
  const DistanceField dist = distance_transform(map, RegionMask::full(9, 9));
  const RegionMask skeleton = extract_skeleton(dist);
  const SkeletonGraph graph = build_skeleton_graph(skeleton, dist);
  ASSERT_EQ(graph.nodes.size(), skeleton.count());
  for (std::size_t k = 0; k < graph.nodes.size(); ++k) {
    EXPECT_EQ(graph.clearance[k], dist.values[graph.nodes[k]]);
    for (const auto& e : graph.edges[k]) {
      const Cell a = graph.nodes[k];
      const Cell b = graph.nodes[static_cast<std::size_t>(e.to)];
      EXPECT_TRUE(are_adjacent(a, b));
      EXPECT_DOUBLE_EQ(e.weight, euclidean(a, b));
    }
  }
}

TEST(RepairSegment, Examples) {
  const GridMap map(3, 3, Occupancy::kFree);
  const RegionMask all = RegionMask::full(3, 3);
  EXPECT_EQ(repair_segment_astar(map, all, {1, 1}, {1, 1}), std::vector<Cell>{Cell(1, 1)});
  const auto diag = repair_segment_astar(map, all, {0, 0}, {2, 2});
  EXPECT_NEAR(path_length(diag), 2.0 * std::sqrt(2.0), 1e-12);
  RegionMask walled = all;
  for (int r = 0; r < 3; ++r) walled.set({r, 1}, false);
  EXPECT_EQ(kind_of([&] { repair_segment_astar(map, walled, {0, 0}, {2, 2}); }), ErrorKind::kNoLocalPath);
  EXPECT_EQ(kind_of([&] { repair_segment_astar(map, walled, {0, 1}, {2, 2}); }), ErrorKind::kInvalidArgument);
}

TEST(PlanInRegion, EmptyMapDiagonal) {
  const GridMap map(64, 64, Occupancy::kFree);
  const PlanningProblem problem{map, {5, 5}, {58, 58}, 0.0};
  const PlanResult r = plan_in_region(problem, RegionMask::full(64, 64));
  ASSERT_TRUE(r.success);
  EXPECT_EQ(r.path.front(), problem.start);
  EXPECT_EQ(r.path.back(), problem.goal);
  EXPECT_GE(r.cost, 53.0 * std::sqrt(2.0) - 1e-9);
  EXPECT_NEAR(r.cost, path_length(r.path), 1e-9);
  EXPECT_TRUE(is_valid_path(problem, r.path));
  EXPECT_EQ(r.region_px, 64u * 64u);
}

TEST(PlanInRegion, SplitRegionIsDisconnected) {
  const GridMap map(10, 5, Occupancy::kFree);
  RegionMask region = RegionMask::full(10, 5);
  for (int r = 0; r < 5; ++r) region.set({r, 5}, false);
  VoronoiOptions opts;
  opts.dilation = 0.0;
  const PlanningProblem problem{map, {2, 1}, {2, 8}, 1.0};
  EXPECT_EQ(kind_of([&] { plan_in_region(problem, region, opts); }), ErrorKind::kDisconnectedRegion);
  // Dilation bridges the one-cell gap.
  opts.dilation = 1.0;
  EXPECT_TRUE(plan_in_region(problem, region, opts).success);
}

TEST(PlanInRegion, StartOutsideRegionIsDisconnected) {
  const GridMap map(10, 5, Occupancy::kFree);
  RegionMask region(10, 5, 0);
  region.set({2, 8}, true);
  VoronoiOptions opts;
  opts.dilation = 1.0;
  EXPECT_EQ(kind_of([&] { plan_in_region({map, {2, 1}, {2, 8}, 1.0}, region, opts); }),
            ErrorKind::kDisconnectedRegion);
}

TEST(PlanInRegion, DimensionMismatch) {
  const GridMap map(10, 5, Occupancy::kFree);
  EXPECT_EQ(kind_of([&] { plan_in_region({map, {2, 1}, {2, 8}, 1.0}, RegionMask::full(5, 10)); }),
            ErrorKind::kDimensionMismatch);
}

TEST(PlanInRegion, GoalReachedWithinEpsilonWhenGoalCellIsOutsideWorkRegion) {
  GridMap map(12, 7, Occupancy::kFree);
  RegionMask region = RegionMask::full(12, 7);
  for (int r = 0; r < 7; ++r) region.set({r, 10}, false);
  VoronoiOptions opts;
  opts.dilation = 0.0;
  const PlanningProblem problem{map, {3, 1}, {3, 11}, 2.0};
  const PlanResult r = plan_in_region(problem, region, opts);
  ASSERT_TRUE(r.success);
  EXPECT_TRUE(in_goal_region(problem, r.path.back()));
  EXPECT_TRUE(is_valid_path(problem, r.path));
}

TEST(PlanInRegion, SkeletonPathKeepsMaximalClearance) {
  const GridMap map = l_corridor();
  const PlanningProblem problem{map, {5, 5}, {35, 25}, 0.0};
  const DistanceField dist = distance_transform(map, RegionMask::full(31, 41), true);
  const PlanResult voronoi = plan_in_region(problem, RegionMask::of_free_space(map));
  const PlanResult astar = astar_grid(problem);
  ASSERT_TRUE(voronoi.success);
  EXPECT_EQ(min_clearance(voronoi.path, dist), 5.0);  // the corridor half-width
  EXPECT_LE(min_clearance(astar.path, dist), 2.0);
  EXPECT_TRUE(is_valid_path(problem, voronoi.path));
}

TEST(PlanInRegion, CorridorAroundAStarPathContainsResult) {
  const ForestParams params = ForestParams::preset(DensityClass::kDense, 96, 96);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GridMap map = generate_forest_map(params, seed, 96, 96);
    const PlanningProblem problem = sample_problem(map, seed, 2.0, {24.0, 10000, Adjacency::kEight});
    const RegionMask corridor = propose_corridor(map, {astar_grid(problem).path, 4.0});
    VoronoiOptions opts;
    const PlanResult r = plan_in_region(problem, corridor, opts);
    ASSERT_TRUE(r.success) << "seed " << seed;
    std::string why;
    ASSERT_TRUE(is_valid_path(problem, r.path, &why)) << why;
    const RegionMask dilated = dilate_in_free_space(map, corridor, opts.dilation);
    for (const Cell c : r.path) ASSERT_TRUE(dilated.contains(c)) << to_string(c);
    EXPECT_EQ(r.region_px, dilated.count());
    // Identical inputs, identical output.
    EXPECT_EQ(plan_in_region(problem, corridor, opts).path, r.path);
  }
}

TEST(PlanInRegion, SucceedsWheneverRegionConnectsEndpoints) {
  Rng rng(3);
  int connected = 0;
  int disconnected = 0;
  for (int i = 0; i < 150; ++i) {
    const GridMap map = generate_forest_map(ForestParams::preset(DensityClass::kDense, 64, 64), rng.below(1 << 30), 64, 64);
    RegionMask region = oracle::random_mask(rng, 64, 64, rng.uniform(0.3, 0.9));
    const PlanningProblem problem = sample_problem(map, rng.below(1 << 30), rng.uniform(0.0, 3.0));
    VoronoiOptions opts;
    opts.dilation = rng.uniform(0.0, 2.0);
    opts.virtual_border = rng.below(2) == 1;
    const RegionMask dilated = dilate_in_free_space(map, region, opts.dilation);
    const auto reach = oracle::flood_fill(dilated, problem.start);
    bool reachable = false;
    for (const Cell c : reach) reachable = reachable || in_goal_region(problem, c);
    if (reachable) {
      ++connected;
      const PlanResult r = plan_in_region(problem, region, opts);
      ASSERT_TRUE(r.success) << "case " << i;
      std::string why;
      ASSERT_TRUE(is_valid_path(problem, r.path, &why)) << why;
      for (const Cell c : r.path) ASSERT_TRUE(dilated.contains(c));
    } else {
      ++disconnected;
      ASSERT_EQ(kind_of([&] { plan_in_region(problem, region, opts); }), ErrorKind::kDisconnectedRegion);
    }
  }
  EXPECT_GT(connected, 10);
  EXPECT_GT(disconnected, 10);
}
