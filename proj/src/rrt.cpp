#include "regionplan/rrt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>

#include "regionplan/rng.hpp"

namespace regionplan {

Cell cell_of(Point p) {
  return Cell{static_cast<int>(std::floor(p.row + 0.5)), static_cast<int>(std::floor(p.col + 0.5))};
}

std::vector<Cell> supercover_cells(Point a, Point b) {
  // Shift so that cell (r, c) is [r, r+1) x [c, c+1).
  const double ar = a.row + 0.5, ac = a.col + 0.5;
  const double br = b.row + 0.5, bc = b.col + 0.5;
  int r = static_cast<int>(std::floor(ar));
  int c = static_cast<int>(std::floor(ac));
  const int r_end = static_cast<int>(std::floor(br));
  const int c_end = static_cast<int>(std::floor(bc));
  const double dr = br - ar;
  const double dc = bc - ac;
  const int step_r = r_end > r ? 1 : (r_end < r ? -1 : 0);
  const int step_c = c_end > c ? 1 : (c_end < c ? -1 : 0);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double delta_r = step_r != 0 ? 1.0 / std::abs(dr) : kInf;
  const double delta_c = step_c != 0 ? 1.0 / std::abs(dc) : kInf;
  double next_r = step_r > 0 ? (r + 1 - ar) / dr : (step_r < 0 ? (ar - r) / -dr : kInf);
  double next_c = step_c > 0 ? (c + 1 - ac) / dc : (step_c < 0 ? (ac - c) / -dc : kInf);

  std::vector<Cell> cells{{r, c}};
  cells.reserve(static_cast<std::size_t>(std::abs(r_end - r) + std::abs(c_end - c) + 1));
  while (r != r_end || c != c_end) {
    const bool can_r = r != r_end;
    const bool can_c = c != c_end;
    if (can_r && can_c && std::abs(next_r - next_c) <= 1e-12) {
      cells.push_back({r + step_r, c});
      cells.push_back({r, c + step_c});
      r += step_r;
      c += step_c;
      next_r += delta_r;
      next_c += delta_c;
    } else if (can_r && (!can_c || next_r < next_c)) {
      r += step_r;
      next_r += delta_r;
    } else {
      c += step_c;
      next_c += delta_c;
    }
    cells.push_back({r, c});
  }
  return cells;
}

void RrtParams::validate() const {
  if (max_iters < 1) throw Error(ErrorKind::kInvalidArgument, "max_iters must be >= 1");
  if (!(step_size > 0.0)) throw Error(ErrorKind::kInvalidArgument, "step_size must be > 0");
  if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "goal_bias must lie in [0, 1]");
  }
  if (!(rewire_floor > 0.0)) throw Error(ErrorKind::kInvalidArgument, "rewire_floor must be > 0");
}

namespace {

// Uniform bucket grid over tree vertices; vertices never move.
class PointIndex {
 public:
  PointIndex(int width, int height, double bucket)
      : bucket_(bucket),
        cols_(static_cast<int>(std::ceil((width + 1) / bucket)) + 1),
        rows_(static_cast<int>(std::ceil((height + 1) / bucket)) + 1),
        buckets_(static_cast<std::size_t>(cols_) * static_cast<std::size_t>(rows_)) {}

  void insert(int id, Point p) { buckets_[slot(bucket_row(p), bucket_col(p))].push_back(id); }

  template <typename PointsFn>
  int nearest(Point p, const PointsFn& position) const {
    const int br = bucket_row(p);
    const int bc = bucket_col(p);
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring <= std::max(rows_, cols_); ++ring) {
      for (int r = br - ring; r <= br + ring; ++r) {
        for (int c = bc - ring; c <= bc + ring; ++c) {
          if (std::max(std::abs(r - br), std::abs(c - bc)) != ring) continue;
          if (r < 0 || c < 0 || r >= rows_ || c >= cols_) continue;
          for (const int id : buckets_[slot(r, c)]) {
            const double d = distance(p, position(id));
            if (d < best_d || (d == best_d && id < best)) {
              best_d = d;
              best = id;
            }
          }
        }
      }
      if (best >= 0 && best_d <= ring * bucket_) break;
    }
    return best;
  }

  template <typename PointsFn>
  void within(Point p, double radius, const PointsFn& position, std::vector<int>& out) const {
    out.clear();
    const int reach = static_cast<int>(std::ceil(radius / bucket_));
    const int br = bucket_row(p);
    const int bc = bucket_col(p);
    for (int r = std::max(0, br - reach); r <= std::min(rows_ - 1, br + reach); ++r) {
      for (int c = std::max(0, bc - reach); c <= std::min(cols_ - 1, bc + reach); ++c) {
        for (const int id : buckets_[slot(r, c)]) {
          if (distance(p, position(id)) <= radius) out.push_back(id);
        }
      }
    }
    std::sort(out.begin(), out.end());
  }

 private:
  int bucket_row(Point p) const {
    return std::clamp(static_cast<int>(std::floor((p.row + 0.5) / bucket_)), 0, rows_ - 1);
  }
  int bucket_col(Point p) const {
    return std::clamp(static_cast<int>(std::floor((p.col + 0.5) / bucket_)), 0, cols_ - 1);
  }
  std::size_t slot(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
  }

  double bucket_;
  int cols_;
  int rows_;
  std::vector<std::vector<int>> buckets_;
};

struct Vertex {
  Point p;
  int parent;
  double cost;
  std::vector<int> children;
};

class TreePlanner {
 public:
  TreePlanner(const PlanningProblem& problem, const RrtParams& params, bool informed, RrtTrace* trace)
      : problem_(problem),
        params_(params),
        informed_(informed),
        trace_(trace),
        rng_(params.seed),
        index_(problem.map.width(), problem.map.height(), std::max(1.0, params.rewire_floor)) {}

  PlanResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    PlanResult result;
    const GridMap& map = problem_.map;
    const Point start = center_of(problem_.start);
    const Point goal = center_of(problem_.goal);

    if (euclidean(problem_.start, problem_.goal) <= problem_.epsilon) {
      result.success = true;
      result.path = {problem_.start};
      result.expanded = 1;
      result.wall_time = elapsed(t0);
      return result;
    }

    const double gamma = params_.rewire_gamma > 0.0
                             ? params_.rewire_gamma
                             : 2.0 * std::sqrt(1.5 * static_cast<double>(map.free_count()) / std::numbers::pi);
    const double c_min = distance(start, goal);
    add_vertex(start, -1, 0.0);

    std::vector<int> near;
    bool solved = false;
    std::size_t first_iter = 0;
    for (int iter = 0; iter < params_.max_iters; ++iter) {
      const Point sample = draw_sample(goal, start, c_min);
      const int nearest = index_.nearest(sample, position());
      const Point from = tree_[static_cast<std::size_t>(nearest)].p;
      const Point fresh = steer(from, sample);
      if (segment_free(from, fresh)) {
        const std::size_t n = tree_.size() + 1;
        const double radius = std::max(params_.rewire_floor,
                                       gamma * std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n)));
        index_.within(fresh, radius, position(), near);

        int parent = nearest;
        double cost = tree_[static_cast<std::size_t>(nearest)].cost + distance(from, fresh);
        for (const int cand : near) {
          if (cand == nearest) continue;
          const Vertex& v = tree_[static_cast<std::size_t>(cand)];
          const double c = v.cost + distance(v.p, fresh);
          if (c < cost && segment_free(v.p, fresh)) {
            cost = c;
            parent = cand;
          }
        }
        const int id = add_vertex(fresh, parent, cost);

        for (const int cand : near) {
          if (cand == parent) continue;
          Vertex& v = tree_[static_cast<std::size_t>(cand)];
          const double c = cost + distance(fresh, v.p);
          if (c < v.cost && segment_free(fresh, v.p)) reparent(cand, id, c);
        }

        if (distance(fresh, goal) <= problem_.epsilon && segment_free(fresh, goal)) {
          goal_vertices_.push_back(id);
        }
        update_best(goal);
        if (!solved && best_vertex_ >= 0) {
          solved = true;
          first_iter = static_cast<std::size_t>(iter);
          if (trace_ != nullptr) trace_->first_solution_iter = first_iter;
        }
      }
      if (trace_ != nullptr) trace_->best_cost.push_back(best_cost_);
      if (solved && params_.refine_iters >= 0 &&
          static_cast<std::size_t>(iter) - first_iter >= static_cast<std::size_t>(params_.refine_iters)) {
        break;
      }
    }

    result.expanded = tree_.size();
    if (best_vertex_ >= 0) {
      result.success = true;
      result.cost = best_cost_;
      result.path = extract_path(goal);
    } else {
      result.error = "NoPath";
    }
    result.wall_time = elapsed(t0);
    return result;
  }

 private:
  static double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  std::function<Point(int)> position() const {
    return [this](int id) { return tree_[static_cast<std::size_t>(id)].p; };
  }

  int add_vertex(Point p, int parent, double cost) {
    const int id = static_cast<int>(tree_.size());
    tree_.push_back({p, parent, cost, {}});
    if (parent >= 0) tree_[static_cast<std::size_t>(parent)].children.push_back(id);
    index_.insert(id, p);
    return id;
  }

  void reparent(int id, int new_parent, double new_cost) {
    Vertex& v = tree_[static_cast<std::size_t>(id)];
    auto& siblings = tree_[static_cast<std::size_t>(v.parent)].children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), id));
    tree_[static_cast<std::size_t>(new_parent)].children.push_back(id);
    const double delta = new_cost - v.cost;
    v.parent = new_parent;
    std::vector<int> stack{id};
    while (!stack.empty()) {
      const int top = stack.back();
      stack.pop_back();
      Vertex& t = tree_[static_cast<std::size_t>(top)];
      t.cost += delta;
      stack.insert(stack.end(), t.children.begin(), t.children.end());
    }
  }

  void update_best(Point goal) {
    for (const int id : goal_vertices_) {
      const Vertex& v = tree_[static_cast<std::size_t>(id)];
      const double c = v.cost + distance(v.p, goal);
      if (c < best_cost_) {
        best_cost_ = c;
        best_vertex_ = id;
      }
    }
  }

  Point draw_sample(Point goal, Point start, double c_min) {
    const GridMap& map = problem_.map;
    const double u = rng_.uniform();
    if (u < params_.goal_bias) return goal;
    if (informed_ && best_vertex_ >= 0) {
      const Point p = sample_informed(start, goal, c_min);
      if (trace_ != nullptr) trace_->informed.push_back({p, best_cost_});
      return p;
    }
    return Point{rng_.uniform(-0.5, map.height() - 0.5), rng_.uniform(-0.5, map.width() - 0.5)};
  }

  // Uniform over the ellipse {x : |x - start| + |x - goal| <= c_best}, restricted
  // to the map rectangle by rejection.
  Point sample_informed(Point start, Point goal, double c_min) {
    const GridMap& map = problem_.map;
    const double c_best = best_cost_;
    const Point center{(start.row + goal.row) / 2.0, (start.col + goal.col) / 2.0};
    const double semi_major = c_best / 2.0;
    const double semi_minor = std::sqrt(std::max(0.0, c_best * c_best - c_min * c_min)) / 2.0;
    const double ur = (goal.row - start.row) / c_min;
    const double uc = (goal.col - start.col) / c_min;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const double rad = std::sqrt(rng_.uniform());
      const double theta = 2.0 * std::numbers::pi * rng_.uniform();
      const double x = semi_major * rad * std::cos(theta);
      const double y = semi_minor * rad * std::sin(theta);
      const Point p{center.row + ur * x - uc * y, center.col + uc * x + ur * y};
      if (p.row >= -0.5 && p.row < map.height() - 0.5 && p.col >= -0.5 && p.col < map.width() - 0.5) {
        return p;
      }
    }
    return center;
  }

  Point steer(Point from, Point to) const {
    const double d = distance(from, to);
    if (d <= params_.step_size) return to;
    const double t = params_.step_size / d;
    return Point{from.row + (to.row - from.row) * t, from.col + (to.col - from.col) * t};
  }

  bool segment_free(Point a, Point b) const {
    for (const Cell c : supercover_cells(a, b)) {
      if (!problem_.map.is_free(c)) return false;
    }
    return true;
  }

  std::vector<Cell> extract_path(Point goal) const {
    std::vector<Point> points;
    for (int id = best_vertex_; id >= 0; id = tree_[static_cast<std::size_t>(id)].parent) {
      points.push_back(tree_[static_cast<std::size_t>(id)].p);
    }
    std::reverse(points.begin(), points.end());
    const Point last = points.back();
    if (last.row != goal.row || last.col != goal.col) points.push_back(goal);

    std::vector<Cell> cells{problem_.start};
    for (std::size_t i = 1; i < points.size(); ++i) {
      const std::vector<Cell> seg = supercover_cells(points[i - 1], points[i]);
      for (const Cell c : seg) {
        if (c != cells.back()) cells.push_back(c);
      }
    }
    return cells;
  }

  const PlanningProblem& problem_;
  const RrtParams& params_;
  bool informed_;
  RrtTrace* trace_;
  Rng rng_;
  PointIndex index_;
  std::vector<Vertex> tree_;
  std::vector<int> goal_vertices_;
  int best_vertex_ = -1;
  double best_cost_ = std::numeric_limits<double>::infinity();
};

PlanResult plan_tree(const PlanningProblem& problem, const RrtParams& params, bool informed,
                     RrtTrace* trace) {
  validate_problem(problem);
  params.validate();
  if (trace != nullptr) *trace = RrtTrace{};
  return TreePlanner(problem, params, informed, trace).run();
}

}  // namespace

PlanResult rrt_star(const PlanningProblem& problem, const RrtParams& params, RrtTrace* trace) {
  return plan_tree(problem, params, false, trace);
}

PlanResult informed_rrt_star(const PlanningProblem& problem, const RrtParams& params, RrtTrace* trace) {
  return plan_tree(problem, params, true, trace);
}

}  // namespace regionplan
