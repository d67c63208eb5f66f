#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "regionplan/maps.hpp"
#include "regionplan/rrt.hpp"
#include "regionplan/voronoi_planner.hpp"

namespace regionplan {

inline constexpr std::string_view kMethodAstar = "astar";
inline constexpr std::string_view kMethodRrtStar = "rrtstar";
inline constexpr std::string_view kMethodInformedRrtStar = "irrtstar";
inline constexpr std::string_view kMethodVoronoi = "voronoi";

bool is_known_method(std::string_view method);

struct BenchRecord {
  std::string env_id;
  std::string method;
  bool success = false;
  double time_s = 0.0;
  std::optional<double> path_cost;  // set iff success
  std::size_t region_px = 0;        // 0 when the method has no candidate region
  std::size_t expanded = 0;
  std::uint64_t seed = 0;
  std::string error;                // not part of the CSV

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct BenchProblem {
  std::string env_id;
  PlanningProblem problem;
  std::uint64_t seed = 0;
};

enum class ReferencePlanner { kAstar, kRrtStar };

/// RRT settings used by benchmarks: a short refinement of 100 iterations after
/// the first solution, capped at max_iters = 10000.
inline RrtParams bench_rrt_params() {
  RrtParams params;
  params.refine_iters = 100;
  return params;
}

struct BenchSuite {
  std::vector<BenchProblem> problems;
  std::vector<std::string> methods;
  RrtParams rrt = bench_rrt_params();  // seed is replaced per trial
  VoronoiOptions voronoi;
  double corridor_radius = 4.0;
  ReferencePlanner reference = ReferencePlanner::kAstar;
  int parallelism = 1;
};

/// Generates `map_count` forest maps and `problems_per_map` problems on each.
/// env ids are "m<map>_p<problem>", zero padded.
std::vector<BenchProblem> make_forest_problems(int map_count, int problems_per_map, int width,
                                               int height, DensityClass density,
                                               std::uint64_t seed, double epsilon = 2.0,
                                               Adjacency adjacency = Adjacency::kEight);

/// Candidate region used by the voronoi method: the reference planner's path
/// dilated by `radius`. Returns nullopt when the reference planner fails.
std::optional<RegionMask> corridor_proposal(const PlanningProblem& problem, double radius,
                                            ReferencePlanner reference, const RrtParams& rrt);

/// Runs one trial; planner exceptions become success == false with an error tag.
BenchRecord run_trial(const BenchProblem& problem, std::string_view method,
                      const BenchSuite& suite);

/// One record per (problem, method), ordered by (env_id, method).
std::vector<BenchRecord> run_benchmark(const BenchSuite& suite);

struct MethodSummary {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate_pct = 0.0;
  // Over successful trials; NaN when there are none. cv uses the sample std.
  double mean_time = 0.0;
  double median_time = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double cv = 0.0;
  double mean_region_px = 0.0;
};

struct BenchSummary {
  std::map<std::string, MethodSummary> methods;
};

/// Nearest-rank quantile of an ascending sample: element ceil(q * n), 1-based.
double nearest_rank(std::span<const double> sorted, double q);

/// Throws EmptyInput when there are no records.
BenchSummary summarize(std::span<const BenchRecord> records);

/// env ids in ascending order of the reference method's time, ties by env id.
/// Throws MissingReference if some environment has no reference record.
std::vector<std::string> sort_by_difficulty(std::span<const BenchRecord> records,
                                            std::string_view reference_method);

inline constexpr std::string_view kCsvHeader =
    "env_id,method,success,time_s,path_cost,region_px,expanded,seed";

std::string records_to_csv(std::span<const BenchRecord> records);
/// Throws FormatError on a malformed document.
std::vector<BenchRecord> records_from_csv(std::string_view text);

nlohmann::json summary_to_json(const BenchSummary& summary);
nlohmann::json records_to_json(std::span<const BenchRecord> records);

enum class ExportFormat { kCsv, kJson };

/// Writes records.csv and/or records.json plus summary.json into `dir`.
/// Throws IoError.
std::vector<std::filesystem::path> export_results(std::span<const BenchRecord> records,
                                                  const BenchSummary& summary,
                                                  const std::filesystem::path& dir,
                                                  std::span<const ExportFormat> formats);

}  // namespace regionplan
