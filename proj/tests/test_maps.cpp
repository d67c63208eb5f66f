#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "regionplan/maps.hpp"
#include "regionplan/rng.hpp"

using namespace regionplan;

namespace {

constexpr auto F = Occupancy::kFree;
constexpr auto O = Occupancy::kObstacle;

}  // namespace

TEST(ValidateMap, CountsFreeAndObstacleCells) {
  const auto all_free = validate_map(GridMap(3, 3, F));
  EXPECT_EQ(all_free.free_cells, 9u);
  EXPECT_EQ(all_free.obstacle_cells, 0u);

  const std::vector<Occupancy> row = {O, F, F};
  const auto report = validate_map(3, 1, row);
  EXPECT_EQ(report.free_cells, 2u);
  EXPECT_EQ(report.obstacle_cells, 1u);
  EXPECT_EQ(report.width, 3);
  EXPECT_EQ(report.height, 1);
}

TEST(ValidateMap, RejectsBufferOfWrongLength) {
  const std::vector<Occupancy> cells(8, F);
  try {
    validate_map(3, 3, cells);
    FAIL() << "expected MalformedGrid";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedGrid);
  }
}

TEST(ForestMap, ZeroObstaclesGivesAllFreeMap) {
  ForestParams params;
  params.obstacle_count = 0;
  const GridMap map = generate_forest_map(params, 5, 64, 48);
  EXPECT_EQ(map.free_count(), map.size());
  EXPECT_EQ(map.width(), 64);
  EXPECT_EQ(map.height(), 48);
}

TEST(ForestMap, SameSeedGivesIdenticalGrid) {
  const ForestParams params = ForestParams::preset(DensityClass::kDense);
  EXPECT_EQ(generate_forest_map(params, 42, 480, 480), generate_forest_map(params, 42, 480, 480));
}

TEST(ForestMap, DifferentSeedsGiveDifferentGrids) {
  const ForestParams params = ForestParams::preset(DensityClass::kDense, 128, 128);
  EXPECT_NE(generate_forest_map(params, 1, 128, 128), generate_forest_map(params, 2, 128, 128));
}

TEST(ForestMap, ObstacleCellsMatchPerPixelDiskTest) {
  ForestParams params;
  params.obstacle_count = 20;
  params.radius_min = 3;
  params.radius_max = 6;
  const GridMap map = generate_forest_map(params, 7, 128, 128);
  const auto disks = sample_forest_disks(params, 7, 128, 128);
  ASSERT_EQ(disks.size(), 20u);
  std::size_t expected_obstacles = 0;
  for (int r = 0; r < 128; ++r) {
    for (int c = 0; c < 128; ++c) {
      bool inside = false;
      for (const auto& d : disks) {
        inside = inside || std::hypot(r - d.row, c - d.col) <= d.radius;
      }
      expected_obstacles += inside ? 1 : 0;
      ASSERT_EQ(map[Cell(r, c)] == O, inside) << "cell " << r << "," << c;
    }
  }
  EXPECT_EQ(map.size() - map.free_count(), expected_obstacles);
  EXPECT_GT(expected_obstacles, 0u);
}

TEST(ForestMap, CountsAlwaysAddUp) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto density = seed % 2 ? DensityClass::kDense : DensityClass::kSparse;
    const GridMap map = generate_forest_map(ForestParams::preset(density, 96, 80), seed, 96, 80);
    const auto report = validate_map(map);
    EXPECT_EQ(report.free_cells + report.obstacle_cells, 96u * 80u);
  }
}

TEST(ForestMap, PresetScalesWithSize) {
  const auto full = ForestParams::preset(DensityClass::kDense, 480, 480);
  EXPECT_EQ(full.obstacle_count, 160);
  EXPECT_DOUBLE_EQ(full.radius_min, 6.0);
  EXPECT_DOUBLE_EQ(full.radius_max, 14.0);
  EXPECT_EQ(ForestParams::preset(DensityClass::kSparse, 480, 480).obstacle_count, 50);
  const auto small = ForestParams::preset(DensityClass::kDense, 128, 128);
  EXPECT_EQ(small.obstacle_count, 11);
  EXPECT_DOUBLE_EQ(small.radius_max, 14.0);
  EXPECT_DOUBLE_EQ(small.min_start_goal_separation, 32.0);
}

TEST(ForestMap, RejectsBadParams) {
  ForestParams params;
  params.radius_min = 5;
  params.radius_max = 2;
  EXPECT_THROW(generate_forest_map(params, 0, 64, 64), Error);
  ForestParams crowded;
  crowded.obstacle_count = 400;
  crowded.radius_min = 20;
  crowded.radius_max = 20;
  try {
    generate_forest_map(crowded, 0, 32, 32);
    FAIL() << "expected InfeasibleParams";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasibleParams);
  }
}

TEST(SampleProblem, AllFreeMapGivesDistinctFreeEndpoints) {
  const GridMap map(10, 10, F);
  const PlanningProblem p = sample_problem(map, 1, 2.0);
  EXPECT_NE(p.start, p.goal);
  EXPECT_TRUE(map.is_free(p.start));
  EXPECT_TRUE(map.is_free(p.goal));
  EXPECT_DOUBLE_EQ(p.epsilon, 2.0);
}

TEST(SampleProblem, SealedRoomsWithFarSeparationFail) {
  // Two free rooms, each 3x2, separated by a wall; no pair inside one room is 5 apart.
  GridMap map(10, 3, O);
  for (int r = 0; r < 3; ++r) {
    for (int c : {0, 1, 8, 9}) map[{r, c}] = F;
  }
  SampleOptions opts;
  opts.min_separation = 5.0;
  opts.max_attempts = 500;
  try {
    sample_problem(map, 1, 1.0, opts);
    FAIL() << "expected NoConnectedPair";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoConnectedPair);
  }
}

TEST(SampleProblem, PairsAreConnectedByFloodFill) {
  const ForestParams params = ForestParams::preset(DensityClass::kDense, 128, 128);
  for (std::uint64_t seed = 3; seed < 23; ++seed) {
    const GridMap map = generate_forest_map(params, seed, 128, 128);
    SampleOptions opts;
    opts.min_separation = params.min_start_goal_separation;
    const PlanningProblem p = sample_problem(map, seed, 2.0, opts);
    EXPECT_GE(euclidean(p.start, p.goal), opts.min_separation);
    EXPECT_TRUE(oracle::flood_fill_free(map, p.start).contains(p.goal)) << "seed " << seed;
  }
}

TEST(SampleProblem, IsDeterministic) {
  const GridMap map = generate_forest_map(ForestParams::preset(DensityClass::kSparse, 64, 64), 9, 64, 64);
  const auto a = sample_problem(map, 11, 2.0);
  const auto b = sample_problem(map, 11, 2.0);
  EXPECT_EQ(a.start, b.start);
  EXPECT_EQ(a.goal, b.goal);
}

TEST(ValidateProblem, RejectsBlockedOrOutsideEndpoints) {
  GridMap map(4, 4, F);
  map[{1, 1}] = O;
  EXPECT_NO_THROW((validate_problem({map, {0, 0}, {3, 3}, 1.0})));
  EXPECT_THROW((validate_problem({map, {1, 1}, {3, 3}, 1.0})), Error);
  EXPECT_THROW((validate_problem({map, {0, 0}, {4, 3}, 1.0})), Error);
  EXPECT_THROW((validate_problem({map, {0, 0}, {3, 3}, -1.0})), Error);
}

TEST(Rng, DerivedStreamsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.below(7), 7u);
  }
}
