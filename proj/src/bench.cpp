#include "regionplan/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <thread>

#include "regionplan/grid_search.hpp"
#include "regionplan/image_io.hpp"
#include "regionplan/proposal.hpp"
#include "regionplan/rng.hpp"

namespace regionplan {

bool is_known_method(std::string_view method) {
  return method == kMethodAstar || method == kMethodRrtStar || method == kMethodInformedRrtStar ||
         method == kMethodVoronoi;
}

namespace {

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

std::vector<BenchProblem> make_forest_problems(int map_count, int problems_per_map, int width,
                                               int height, DensityClass density,
                                               std::uint64_t seed, double epsilon,
                                               Adjacency adjacency) {
  const ForestParams params = ForestParams::preset(density, width, height);
  std::vector<BenchProblem> out;
  out.reserve(static_cast<std::size_t>(map_count) * static_cast<std::size_t>(problems_per_map));
  for (int m = 0; m < map_count; ++m) {
    // A map that cannot host a connected pair is replaced by the next seed in its stream.
    for (int attempt = 0;; ++attempt) {
      const std::uint64_t map_seed = derive_seed(seed, static_cast<std::uint64_t>(m) * 1000 + attempt);
      const GridMap map = generate_forest_map(params, map_seed, width, height);
      std::vector<BenchProblem> batch;
      try {
        for (int p = 0; p < problems_per_map; ++p) {
          SampleOptions opts;
          opts.min_separation = params.min_start_goal_separation;
          opts.adjacency = adjacency;
          BenchProblem bp;
          bp.env_id = "m" + zero_pad(m, 4) + "_p" + zero_pad(p, 2);
          bp.problem = sample_problem(map, derive_seed(map_seed, static_cast<std::uint64_t>(p)), epsilon, opts);
          bp.seed = derive_seed(map_seed, static_cast<std::uint64_t>(p) + 0x10000);
          batch.push_back(std::move(bp));
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNoConnectedPair || attempt >= 100) throw;
        continue;
      }
      for (auto& bp : batch) out.push_back(std::move(bp));
      break;
    }
  }
  return out;
}

std::optional<RegionMask> corridor_proposal(const PlanningProblem& problem, double radius,
                                            ReferencePlanner reference, const RrtParams& rrt) {
  std::vector<Cell> path;
  try {
    if (reference == ReferencePlanner::kAstar) {
      path = astar_grid(problem).path;
    } else {
      PlanResult r = rrt_star(problem, rrt);
      if (!r.success) return std::nullopt;
      path = std::move(r.path);
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  return propose_corridor(problem.map, CorridorSpec{std::move(path), radius});
}

BenchRecord run_trial(const BenchProblem& bp, std::string_view method, const BenchSuite& suite) {
  BenchRecord rec;
  rec.env_id = bp.env_id;
  rec.method = std::string(method);
  rec.seed = bp.seed;
  try {
    PlanResult result;
    if (method == kMethodAstar) {
      result = astar_grid(bp.problem, suite.voronoi.adjacency);
    } else if (method == kMethodRrtStar || method == kMethodInformedRrtStar) {
      RrtParams params = suite.rrt;
      params.seed = bp.seed;
      result = method == kMethodRrtStar ? rrt_star(bp.problem, params)
                                        : informed_rrt_star(bp.problem, params);
    } else if (method == kMethodVoronoi) {
      RrtParams params = suite.rrt;
      params.seed = bp.seed;
      const std::optional<RegionMask> region =
          corridor_proposal(bp.problem, suite.corridor_radius, suite.reference, params);
      if (!region) {
        rec.error = "NoReference";
        return rec;
      }
      rec.region_px = region->count();
      result = plan_in_region(bp.problem, *region, suite.voronoi);
    } else {
      throw Error(ErrorKind::kInvalidArgument, "unknown method '" + rec.method + "'");
    }
    rec.success = result.success;
    rec.time_s = result.wall_time;
    rec.expanded = result.expanded;
    if (result.success) {
      rec.path_cost = result.cost;
    } else {
      rec.error = result.error.empty() ? "Failed" : result.error;
    }
  } catch (const Error& e) {
    rec.success = false;
    rec.path_cost.reset();
    rec.error = std::string(to_string(e.kind()));
  }
  return rec;
}

std::vector<BenchRecord> run_benchmark(const BenchSuite& suite) {
  for (const auto& m : suite.methods) {
    if (!is_known_method(m)) throw Error(ErrorKind::kInvalidArgument, "unknown method '" + m + "'");
  }
  struct Task {
    std::size_t problem;
    std::size_t method;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < suite.problems.size(); ++p) {
    for (std::size_t m = 0; m < suite.methods.size(); ++m) tasks.push_back({p, m});
  }
  std::vector<BenchRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      records[i] = run_trial(suite.problems[tasks[i].problem], suite.methods[tasks[i].method], suite);
    }
  };
  const int threads = std::max(1, suite.parallelism);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::stable_sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
    if (a.env_id != b.env_id) return a.env_id < b.env_id;
    return a.method < b.method;
  });
  return records;
}

double nearest_rank(std::span<const double> sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(sorted.size());
  const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(q * n)));
  return sorted[std::min(rank, sorted.size()) - 1];
}

BenchSummary summarize(std::span<const BenchRecord> records) {
  if (records.empty()) throw Error(ErrorKind::kEmptyInput, "no records to summarize");
  struct Acc {
    std::size_t trials = 0;
    std::vector<double> times;
    std::size_t region_total = 0;
  };
  std::map<std::string, Acc> by_method;
  for (const auto& r : records) {
    Acc& acc = by_method[r.method];
    ++acc.trials;
    acc.region_total += r.region_px;
    if (r.success) acc.times.push_back(r.time_s);
  }
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  BenchSummary summary;
  for (auto& [method, acc] : by_method) {
    MethodSummary s;
    s.trials = acc.trials;
    s.successes = acc.times.size();
    s.success_rate_pct = 100.0 * static_cast<double>(s.successes) / static_cast<double>(s.trials);
    s.mean_region_px = static_cast<double>(acc.region_total) / static_cast<double>(s.trials);
    std::sort(acc.times.begin(), acc.times.end());
    if (acc.times.empty()) {
      s.mean_time = s.median_time = s.p95 = s.p99 = s.min = s.max = s.cv = kNaN;
    } else {
      const double n = static_cast<double>(acc.times.size());
      s.mean_time = std::accumulate(acc.times.begin(), acc.times.end(), 0.0) / n;
      s.median_time = nearest_rank(acc.times, 0.5);
      s.p95 = nearest_rank(acc.times, 0.95);
      s.p99 = nearest_rank(acc.times, 0.99);
      s.min = acc.times.front();
      s.max = acc.times.back();
      if (acc.times.size() < 2 || s.mean_time == 0.0) {
        s.cv = 0.0;
      } else {
        double ss = 0.0;
        for (const double t : acc.times) ss += (t - s.mean_time) * (t - s.mean_time);
        s.cv = std::sqrt(ss / (n - 1.0)) / s.mean_time;
      }
    }
    summary.methods.emplace(method, s);
  }
  return summary;
}

std::vector<std::string> sort_by_difficulty(std::span<const BenchRecord> records,
                                            std::string_view reference_method) {
  std::set<std::string> envs;
  std::map<std::string, double> reference_time;
  for (const auto& r : records) {
    envs.insert(r.env_id);
    if (r.method == reference_method) reference_time.try_emplace(r.env_id, r.time_s);
  }
  std::vector<std::string> order(envs.begin(), envs.end());
  for (const auto& env : order) {
    if (!reference_time.contains(env)) {
      throw Error(ErrorKind::kMissingReference,
                  "no '" + std::string(reference_method) + "' record for " + env);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    return reference_time.at(a) < reference_time.at(b);
  });
  return order;
}

std::string records_to_csv(std::span<const BenchRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    for (const std::string* field : {&r.env_id, &r.method}) {
      if (field->find_first_of(",\"\r\n") != std::string::npos) {
        throw Error(ErrorKind::kInvalidArgument, "CSV field contains a separator: " + *field);
      }
    }
    out += r.env_id;
    out += ',';
    out += r.method;
    out += ',';
    out += r.success ? "1" : "0";
    out += ',';
    out += format_double(r.time_s);
    out += ',';
    if (r.path_cost) out += format_double(*r.path_cost);
    out += ',';
    out += std::to_string(r.region_px);
    out += ',';
    out += std::to_string(r.expanded);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

namespace {

template <typename T>
T parse_number(std::string_view text, std::size_t line) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw Error(ErrorKind::kFormatError,
                "line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<BenchRecord> records_from_csv(std::string_view text) {
  std::vector<BenchRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kCsvHeader) throw Error(ErrorKind::kFormatError, "unexpected CSV header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t comma; (comma = line.find(',', start)) != std::string_view::npos; start = comma + 1) {
      fields.push_back(line.substr(start, comma - start));
    }
    fields.push_back(line.substr(start));
    if (fields.size() != 8) {
      throw Error(ErrorKind::kFormatError, "line " + std::to_string(line_no) + ": expected 8 fields");
    }
    BenchRecord r;
    r.env_id = std::string(fields[0]);
    r.method = std::string(fields[1]);
    if (fields[2] != "0" && fields[2] != "1") {
      throw Error(ErrorKind::kFormatError, "line " + std::to_string(line_no) + ": bad success flag");
    }
    r.success = fields[2] == "1";
    r.time_s = parse_number<double>(fields[3], line_no);
    if (!fields[4].empty()) r.path_cost = parse_number<double>(fields[4], line_no);
    r.region_px = parse_number<std::size_t>(fields[5], line_no);
    r.expanded = parse_number<std::size_t>(fields[6], line_no);
    r.seed = parse_number<std::uint64_t>(fields[7], line_no);
    records.push_back(std::move(r));
  }
  if (line_no == 0) throw Error(ErrorKind::kFormatError, "empty CSV document");
  return records;
}

namespace {

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json summary_to_json(const BenchSummary& summary) {
  nlohmann::ordered_json methods = nlohmann::ordered_json::object();
  for (const auto& [name, s] : summary.methods) {
    nlohmann::ordered_json m;
    m["trials"] = s.trials;
    m["successes"] = s.successes;
    m["success_rate_pct"] = s.success_rate_pct;
    m["mean_time"] = number_or_null(s.mean_time);
    m["median_time"] = number_or_null(s.median_time);
    m["p95"] = number_or_null(s.p95);
    m["p99"] = number_or_null(s.p99);
    m["min"] = number_or_null(s.min);
    m["max"] = number_or_null(s.max);
    m["cv"] = number_or_null(s.cv);
    m["mean_region_px"] = s.mean_region_px;
    methods[name] = std::move(m);
  }
  nlohmann::ordered_json root;
  root["schema"] = "regionplan.bench.summary/1";
  root["methods"] = std::move(methods);
  return nlohmann::json::parse(root.dump());
}

nlohmann::json records_to_json(std::span<const BenchRecord> records) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["env_id"] = r.env_id;
    j["method"] = r.method;
    j["success"] = r.success;
    j["time_s"] = r.time_s;
    j["path_cost"] = r.path_cost ? nlohmann::json(*r.path_cost) : nlohmann::json(nullptr);
    j["region_px"] = r.region_px;
    j["expanded"] = r.expanded;
    j["seed"] = r.seed;
    j["error"] = r.error;
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<std::filesystem::path> export_results(std::span<const BenchRecord> records,
                                                  const BenchSummary& summary,
                                                  const std::filesystem::path& dir,
                                                  std::span<const ExportFormat> formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIoError, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const ExportFormat f : formats) {
    if (f == ExportFormat::kCsv) {
      written.push_back(dir / "records.csv");
      write_file(written.back(), records_to_csv(records));
    } else {
      written.push_back(dir / "records.json");
      write_file(written.back(), records_to_json(records).dump(2) + "\n");
    }
  }
  written.push_back(dir / "summary.json");
  write_file(written.back(), summary_to_json(summary).dump(2) + "\n");
  return written;
}

}  // namespace regionplan
