// Command-line front end: map generation, region proposals, planning,
// benchmarking, loss evaluation and persistence diagrams.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "regionplan/bench.hpp"
#include "regionplan/distance_transform.hpp"
#include "regionplan/grid_search.hpp"
#include "regionplan/image_io.hpp"
#include "regionplan/losses.hpp"
#include "regionplan/maps.hpp"
#include "regionplan/proposal.hpp"
#include "regionplan/rng.hpp"
#include "regionplan/rrt.hpp"
#include "regionplan/topology.hpp"
#include "regionplan/voronoi_planner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace regionplan;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  int connectivity = 8;
  fs::path out_dir = ".";

  Adjacency adjacency() const { return connectivity == 4 ? Adjacency::kFour : Adjacency::kEight; }
};

void emit(const json& j, const fs::path& file) {
  const std::string text = j.dump(2) + "\n";
  write_file(file, text);
  std::cout << text;
}

json cells_to_json(const std::vector<Cell>& path) {
  json out = json::array();
  for (const Cell c : path) out.push_back({c.row, c.col});
  return out;
}

json plan_result_to_json(std::string_view method, const PlanResult& r) {
  json j;
  j["method"] = method;
  j["success"] = r.success;
  j["path"] = cells_to_json(r.path);
  j["cost"] = r.success ? json(r.cost) : json(nullptr);
  j["wall_time"] = r.wall_time;
  j["expanded"] = r.expanded;
  j["region_px"] = r.region_px;
  j["error"] = r.error;
  return j;
}

DensityClass parse_density(const std::string& s) {
  return s == "sparse" ? DensityClass::kSparse : DensityClass::kDense;
}

ReferencePlanner parse_reference(const std::string& s) {
  return s == "rrtstar" ? ReferencePlanner::kRrtStar : ReferencePlanner::kAstar;
}

// Grey map with the path drawn in black over free (white) and obstacle (dark grey) cells.
Grid<std::uint8_t> overlay_image(const GridMap& map, const RegionMask* region,
                                 const std::vector<Cell>& path) {
  Grid<std::uint8_t> img(map.width(), map.height(), 0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Cell c = map.cell(i);
    if (!map.is_free(c)) {
      img[c] = 64;
    } else {
      img[c] = region != nullptr && region->contains(c) ? 192 : 255;
    }
  }
  for (const Cell c : path) img[c] = 0;
  return img;
}

// ---------------------------------------------------------------- gen-maps

struct GenMapsOptions {
  int count = 10;
  int width = 480;
  int height = 480;
  std::string density = "dense";
  int problems_per_map = 1;
  double epsilon = 2.0;
};

int run_gen_maps(const GlobalOptions& g, const GenMapsOptions& o) {
  const ForestParams params = ForestParams::preset(parse_density(o.density), o.width, o.height);
  const auto problems = make_forest_problems(o.count, o.problems_per_map, o.width, o.height,
                                             parse_density(o.density), g.seed, o.epsilon,
                                             g.adjacency());
  json manifest;
  manifest["seed"] = g.seed;
  manifest["density"] = o.density;
  manifest["width"] = o.width;
  manifest["height"] = o.height;
  manifest["obstacle_count"] = params.obstacle_count;
  manifest["radius_range"] = {params.radius_min, params.radius_max};
  manifest["problems"] = json::array();
  std::string last_map;
  for (const auto& bp : problems) {
    const std::string map_name = "maps/" + bp.env_id.substr(0, bp.env_id.find('_')) + ".pgm";
    if (map_name != last_map) {
      write_map_pgm(g.out_dir / map_name, bp.problem.map);
      last_map = map_name;
    }
    const std::string problem_name = "problems/" + bp.env_id + ".json";
    write_problem_json(g.out_dir / problem_name,
                       {"../" + map_name, bp.problem.start, bp.problem.goal, bp.problem.epsilon});
    manifest["problems"].push_back({{"env_id", bp.env_id}, {"problem", problem_name}, {"seed", bp.seed}});
  }
  emit(manifest, g.out_dir / "manifest.json");
  return 0;
}

// ---------------------------------------------------------------- propose

struct ProposeOptions {
  std::string mode = "corridor";
  std::string problem;
  std::string map;
  std::string prediction;
  double theta = 0.5;
  double radius = 4.0;
  std::string ref = "astar";
  std::optional<std::size_t> baseline;
  std::string output = "region.pgm";
  double dilation = 2.0;
  RrtParams rrt;
};

int run_propose(const GlobalOptions& g, ProposeOptions o) {
  RegionMask mask;
  std::optional<GridMap> map;
  if (o.mode == "file") {
    if (o.prediction.empty()) throw Error(ErrorKind::kInvalidArgument, "--mode file needs --prediction");
    if (!o.map.empty()) map = read_map_pgm(o.map);
    if (!o.problem.empty()) map = load_problem(o.problem).map;
    const ProbabilityMap prob = load_prediction(o.prediction, map ? &*map : nullptr);
    mask = threshold_mask(prob, o.theta);
    if (map) {
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (map->cells()[i] != Occupancy::kFree) mask.cells()[i] = 0;
      }
    }
  } else {
    if (o.problem.empty()) throw Error(ErrorKind::kInvalidArgument, "--mode corridor needs --problem");
    const PlanningProblem problem = load_problem(o.problem);
    o.rrt.seed = g.seed;
    auto region = corridor_proposal(problem, o.radius, parse_reference(o.ref), o.rrt);
    if (!region) throw Error(ErrorKind::kNoPath, "reference planner found no path");
    mask = std::move(*region);
    map = problem.map;
  }
  write_mask_pgm(g.out_dir / o.output, mask);
  const RegionMetrics m = region_metrics(mask, o.baseline);
  json j;
  j["mask"] = (g.out_dir / o.output).string();
  j["size_px"] = m.size_px;
  j["reduction_pct"] = m.reduction_pct ? json(*m.reduction_pct) : json(nullptr);
  j["dilated_px"] = map ? json(dilate_in_free_space(*map, mask, o.dilation).count()) : json(nullptr);
  j["free_px"] = map ? json(map->free_count()) : json(nullptr);
  emit(j, g.out_dir / "proposal.json");
  return 0;
}

// ---------------------------------------------------------------- plan

struct PlanOptions {
  std::string problem;
  std::string method = "voronoi";
  std::string region;
  double dilation = 2.0;
  double radius = 4.0;
  std::string ref = "astar";
  bool no_border = false;
  std::string overlay;
  RrtParams rrt;
};

int run_plan(const GlobalOptions& g, PlanOptions o) {
  const PlanningProblem problem = load_problem(o.problem);
  o.rrt.seed = g.seed;
  std::optional<RegionMask> region;
  std::optional<double> proposal_time;
  PlanResult result;
  try {
    if (o.method == kMethodAstar) {
      result = astar_grid(problem, g.adjacency());
    } else if (o.method == kMethodRrtStar) {
      result = rrt_star(problem, o.rrt);
    } else if (o.method == kMethodInformedRrtStar) {
      result = informed_rrt_star(problem, o.rrt);
    } else {
      if (!o.region.empty()) {
        region = read_mask_pgm(o.region);
      } else {
        const auto t0 = std::chrono::steady_clock::now();
        region = corridor_proposal(problem, o.radius, parse_reference(o.ref), o.rrt);
        proposal_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!region) throw Error(ErrorKind::kNoPath, "reference planner found no path");
      }
      VoronoiOptions vo;
      vo.dilation = o.dilation;
      vo.virtual_border = !o.no_border;
      vo.adjacency = g.adjacency();
      result = plan_in_region(problem, *region, vo);
    }
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::kNoPath:
      case ErrorKind::kDisconnectedRegion:
      case ErrorKind::kNoLocalPath:
      case ErrorKind::kEmptyRegion:
        result = PlanResult{};
        result.error = std::string(to_string(e.kind()));
        std::cerr << "planning failed: " << e.what() << "\n";
        break;
      default:
        throw;
    }
  }
  json j = plan_result_to_json(o.method, result);
  if (o.method == kMethodVoronoi) {
    // region_px above counts the dilated region the planner searched.
    j["proposal_px"] = region ? json(region->count()) : json(nullptr);
    j["proposal_time"] = proposal_time ? json(*proposal_time) : json(nullptr);
  }
  emit(j, g.out_dir / "plan.json");
  if (!o.overlay.empty()) {
    write_gray_pgm(g.out_dir / o.overlay, overlay_image(problem.map, region ? &*region : nullptr, result.path));
  }
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchOptions {
  int maps = 20;
  int problems_per_map = 5;
  int width = 128;
  int height = 128;
  std::string density = "dense";
  std::vector<std::string> methods = {"astar", "rrtstar", "irrtstar", "voronoi"};
  double radius = 4.0;
  double dilation = 2.0;
  std::string ref = "astar";
  std::string difficulty_ref = "astar";
  double epsilon = 2.0;
  int parallelism = 1;
  std::vector<std::string> formats = {"csv", "json"};
  RrtParams rrt;
};

json difficulty_json(const std::vector<BenchRecord>& records, const std::vector<std::string>& order,
                     const std::string& reference) {
  std::map<std::pair<std::string, std::string>, const BenchRecord*> index;
  std::set<std::string> methods;
  for (const auto& r : records) {
    index[{r.env_id, r.method}] = &r;
    methods.insert(r.method);
  }
  json j;
  j["reference"] = reference;
  j["env_ids"] = order;
  for (const auto& m : methods) {
    json times = json::array();
    for (const auto& env : order) {
      const auto it = index.find({env, m});
      times.push_back(it != index.end() && it->second->success ? json(it->second->time_s) : json(nullptr));
    }
    j["time_s"][m] = std::move(times);
  }
  return j;
}

int run_bench(const GlobalOptions& g, BenchOptions o) {
  std::vector<std::string> densities = {o.density};
  if (o.density == "both") densities = {"dense", "sparse"};
  BenchSuite suite;
  for (const auto& d : densities) {
    auto problems = make_forest_problems(o.maps, o.problems_per_map, o.width, o.height,
                                         parse_density(d),
                                         densities.size() > 1 ? derive_seed(g.seed, d == "sparse") : g.seed,
                                         o.epsilon, g.adjacency());
    for (auto& p : problems) {
      if (densities.size() > 1) p.env_id = d + "_" + p.env_id;
      suite.problems.push_back(std::move(p));
    }
  }
  suite.methods = o.methods;
  suite.rrt = o.rrt;
  suite.voronoi.dilation = o.dilation;
  suite.voronoi.adjacency = g.adjacency();
  suite.corridor_radius = o.radius;
  suite.reference = parse_reference(o.ref);
  suite.parallelism = o.parallelism;

  const auto records = run_benchmark(suite);
  const BenchSummary summary = summarize(records);
  std::vector<ExportFormat> formats;
  for (const auto& f : o.formats) formats.push_back(f == "csv" ? ExportFormat::kCsv : ExportFormat::kJson);
  export_results(records, summary, g.out_dir, formats);

  if (std::find(o.methods.begin(), o.methods.end(), o.difficulty_ref) != o.methods.end()) {
    const auto order = sort_by_difficulty(records, o.difficulty_ref);
    write_file(g.out_dir / "difficulty.json", difficulty_json(records, order, o.difficulty_ref).dump(2) + "\n");
  }
  if (densities.size() > 1) {
    for (const auto& d : densities) {
      std::vector<BenchRecord> subset;
      for (const auto& r : records) {
        if (r.env_id.starts_with(d + "_")) subset.push_back(r);
      }
      write_file(g.out_dir / ("summary_" + d + ".json"), summary_to_json(summarize(subset)).dump(2) + "\n");
    }
  }

  std::printf("%-10s %8s %9s %11s %11s %11s %8s %12s\n", "method", "trials", "success%", "mean_s",
              "median_s", "p99_s", "cv", "region_px");
  for (const auto& [name, s] : summary.methods) {
    std::printf("%-10s %8zu %9.2f %11.6f %11.6f %11.6f %8.3f %12.1f\n", name.c_str(), s.trials,
                s.success_rate_pct, s.mean_time, s.median_time, s.p99, s.cv, s.mean_region_px);
  }
  return 0;
}

// ---------------------------------------------------------------- losses

struct LossOptions {
  std::string prediction;
  std::string label;
  LossWeights weights;
};

int run_losses(const GlobalOptions& g, const LossOptions& o) {
  o.weights.validate();
  const ProbabilityMap prob = read_pfm(o.prediction);
  const RegionMask label = read_mask_pgm(o.label);
  require_same_shape(prob, label, ErrorKind::kShapeMismatch, "prediction vs label");
  const ScalarField p = to_field(prob);
  CrossEntropyOptions ce_opts;
  ce_opts.clamp = o.weights.ce_clamp;
  const double ce = ce_loss(ClassTensor::from_free_probability(p), ClassTensor::from_free_mask(label), ce_opts).value;
  const double conn = conn_loss(p, o.weights.tau).value;
  const double topo = topo_loss(p, label, g.adjacency());
  json j;
  j["ce"] = ce;
  j["conn"] = conn;
  j["topo"] = topo;
  j["total"] = total_loss(ce, conn, topo, o.weights);
  j["weights"] = {{"lambda_conn", o.weights.lambda_conn},
                  {"lambda_topo", o.weights.lambda_topo},
                  {"tau", o.weights.tau},
                  {"ce_clamp", o.weights.ce_clamp}};
  emit(j, g.out_dir / "losses.json");
  return 0;
}

// ---------------------------------------------------------------- ph

struct PhOptions {
  std::string field;
  std::string mask;
};

int run_ph(const GlobalOptions& g, const PhOptions& o) {
  if (o.field.empty() == o.mask.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "give exactly one of --field or --mask");
  }
  const ScalarField f = o.field.empty() ? to_field(read_mask_pgm(o.mask)) : to_field(read_pfm(o.field));
  const PersistenceDiagram d = persistence_diagram_0d(f, g.adjacency());
  json points = json::array();
  for (const auto& p : d.points) points.push_back({p.birth, p.death});
  emit(json{{"points", points}}, g.out_dir / "diagram.json");
  return 0;
}

void add_rrt_options(CLI::App* cmd, RrtParams& rrt) {
  cmd->add_option("--max-iters", rrt.max_iters, "RRT* iteration cap")->capture_default_str();
  cmd->add_option("--refine-iters", rrt.refine_iters,
                  "iterations after the first solution (-1: run to --max-iters)")->capture_default_str();
  cmd->add_option("--step", rrt.step_size, "RRT* steering step in cells")->capture_default_str();
  cmd->add_option("--goal-bias", rrt.goal_bias, "probability of sampling the goal")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Region-constrained path planning toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "base random seed")->capture_default_str();
  app.add_option("--connectivity", g.connectivity, "grid connectivity")
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "directory for output files")->capture_default_str();

  const std::vector<std::string> method_names = {"astar", "rrtstar", "irrtstar", "voronoi"};

  GenMapsOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-maps", "generate forest maps and start/goal problems");
  gen_cmd->add_option("--count", gen.count, "number of maps")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--width", gen.width)->check(CLI::Range(16, 1 << 14))->capture_default_str();
  gen_cmd->add_option("--height", gen.height)->check(CLI::Range(16, 1 << 14))->capture_default_str();
  gen_cmd->add_option("--density", gen.density)->check(CLI::IsMember({"dense", "sparse"}))->capture_default_str();
  gen_cmd->add_option("--problems-per-map", gen.problems_per_map)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--epsilon", gen.epsilon, "goal region radius")->check(CLI::NonNegativeNumber)->capture_default_str();

  ProposeOptions prop;
  auto* prop_cmd = app.add_subcommand("propose", "build a candidate region mask");
  prop_cmd->add_option("--mode", prop.mode)->check(CLI::IsMember({"file", "corridor"}))->capture_default_str();
  prop_cmd->add_option("--problem", prop.problem, "problem JSON (corridor mode, or map for file mode)");
  prop_cmd->add_option("--map", prop.map, "map PGM used to mask obstacles in file mode");
  prop_cmd->add_option("--prediction", prop.prediction, "free-space probability PFM (file mode)");
  prop_cmd->add_option("--theta", prop.theta, "probability threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  prop_cmd->add_option("--radius", prop.radius, "corridor radius in cells")->check(CLI::NonNegativeNumber)->capture_default_str();
  prop_cmd->add_option("--ref", prop.ref, "reference planner")->check(CLI::IsMember({"astar", "rrtstar"}))->capture_default_str();
  prop_cmd->add_option("--baseline", prop.baseline, "baseline region size for the reduction percentage");
  prop_cmd->add_option("--dilation", prop.dilation, "dilation used for dilated_px")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  prop_cmd->add_option("--output", prop.output, "mask file name inside --out-dir")->capture_default_str();
  add_rrt_options(prop_cmd, prop.rrt);

  PlanOptions plan;
  auto* plan_cmd = app.add_subcommand("plan", "solve one planning problem");
  plan_cmd->add_option("--problem", plan.problem, "problem JSON")->required();
  plan_cmd->add_option("--method", plan.method)->check(CLI::IsMember(method_names))->capture_default_str();
  plan_cmd->add_option("--region", plan.region, "candidate region PGM (voronoi); default: corridor proposal");
  plan_cmd->add_option("--dilation", plan.dilation, "region dilation in cells")->check(CLI::NonNegativeNumber)->capture_default_str();
  plan_cmd->add_option("--radius", plan.radius, "corridor radius when no --region is given")->capture_default_str();
  plan_cmd->add_option("--ref", plan.ref)->check(CLI::IsMember({"astar", "rrtstar"}))->capture_default_str();
  plan_cmd->add_flag("--no-border", plan.no_border, "no virtual obstacle ring around the grid");
  plan_cmd->add_option("--overlay", plan.overlay, "write the path drawn over the map to this PGM");
  add_rrt_options(plan_cmd, plan.rrt);

  BenchOptions bench;
  bench.rrt = bench_rrt_params();
  auto* bench_cmd = app.add_subcommand("bench", "run the planner benchmark");
  bench_cmd->add_option("--maps", bench.maps)->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--problems-per-map", bench.problems_per_map)->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--width", bench.width)->check(CLI::Range(16, 1 << 14))->capture_default_str();
  bench_cmd->add_option("--height", bench.height)->check(CLI::Range(16, 1 << 14))->capture_default_str();
  bench_cmd->add_option("--density", bench.density)->check(CLI::IsMember({"dense", "sparse", "both"}))->capture_default_str();
  bench_cmd->add_option("--methods", bench.methods)->delimiter(',')->check(CLI::IsMember(method_names))->capture_default_str();
  bench_cmd->add_option("--radius", bench.radius, "corridor radius for voronoi")->capture_default_str();
  bench_cmd->add_option("--dilation", bench.dilation)->check(CLI::NonNegativeNumber)->capture_default_str();
  bench_cmd->add_option("--ref", bench.ref)->check(CLI::IsMember({"astar", "rrtstar"}))->capture_default_str();
  bench_cmd->add_option("--difficulty-ref", bench.difficulty_ref, "method whose time orders environments")
      ->check(CLI::IsMember(method_names))->capture_default_str();
  bench_cmd->add_option("--epsilon", bench.epsilon)->check(CLI::NonNegativeNumber)->capture_default_str();
  bench_cmd->add_option("--parallelism", bench.parallelism)->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--format", bench.formats)->delimiter(',')->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  add_rrt_options(bench_cmd, bench.rrt);

  LossOptions loss;
  auto* loss_cmd = app.add_subcommand("losses", "evaluate the training losses on one prediction");
  loss_cmd->add_option("--prediction", loss.prediction, "free-space probability PFM")->required();
  loss_cmd->add_option("--label", loss.label, "free-space label PGM")->required();
  loss_cmd->add_option("--tau", loss.weights.tau)->capture_default_str();
  loss_cmd->add_option("--lambda-conn", loss.weights.lambda_conn)->capture_default_str();
  loss_cmd->add_option("--lambda-topo", loss.weights.lambda_topo)->capture_default_str();

  PhOptions ph;
  auto* ph_cmd = app.add_subcommand("ph", "0-dimensional persistence diagram of a field or mask");
  ph_cmd->add_option("--field", ph.field, "PFM scalar field");
  ph_cmd->add_option("--mask", ph.mask, "binary PGM mask");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return run_gen_maps(g, gen);
    if (*prop_cmd) return run_propose(g, prop);
    if (*plan_cmd) return run_plan(g, plan);
    if (*bench_cmd) return run_bench(g, bench);
    if (*loss_cmd) return run_losses(g, loss);
    if (*ph_cmd) return run_ph(g, ph);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
