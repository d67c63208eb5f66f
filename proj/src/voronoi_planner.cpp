#include "regionplan/voronoi_planner.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "regionplan/grid_search.hpp"
#include "regionplan/topology.hpp"

namespace regionplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

constexpr std::array<Offset, 4> kRidgeDirections = {{{0, 1}, {1, 0}, {1, 1}, {1, -1}}};

// Beyond the grid edge: the virtual obstacle ring, or open space that only gets farther away.
double value_or_outside(const Grid<double>& values, Cell c, double outside) {
  return values.in_bounds(c) ? values[c] : outside;
}

struct HeapEntry {
  double dist;
  std::size_t index;
  bool operator>(const HeapEntry& o) const {
    if (dist != o.dist) return dist > o.dist;
    return index > o.index;
  }
};
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

SearchOutcome search_in_region(const GridMap& map, const RegionMask& region, Cell a, Cell b,
                               Adjacency adjacency) {
  require_same_shape(map, region, ErrorKind::kDimensionMismatch, "region vs map");
  for (const Cell c : {a, b}) {
    if (!region.contains(c) || !map.is_free(c)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "segment endpoint " + to_string(c) + " outside the free region");
    }
  }
  SearchOutcome found = astar_search(
      map.width(), map.height(),
      [&](Cell c) { return map[c] == Occupancy::kFree && region[c] != 0; }, a, b, adjacency);
  if (found.path.empty()) {
    throw Error(ErrorKind::kNoLocalPath, "no path from " + to_string(a) + " to " + to_string(b) +
                                             " inside the region");
  }
  return found;
}

// Cells reachable from `from` inside `mask`.
RegionMask reachable_from(const RegionMask& mask, Cell from, Adjacency adjacency) {
  RegionMask reach(mask.width(), mask.height(), 0);
  std::deque<Cell> queue{from};
  reach.set(from, true);
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (const Offset o : neighbor_offsets(adjacency)) {
      const Cell n{c.row + o.drow, c.col + o.dcol};
      if (mask.contains(n) && !reach.contains(n)) {
        reach.set(n, true);
        queue.push_back(n);
      }
    }
  }
  return reach;
}

Cell nearest_member(const RegionMask& mask, Cell to) {
  Cell best{-1, -1};
  double best_d = kInf;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask.cells()[i] == 0) continue;
    const Cell c = mask.cell(i);
    const double d = euclidean(c, to);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// Links skeleton fragments inside the connected region `work` into a single
// component. A multi-source Dijkstra from all skeleton cells partitions the
// region by nearest fragment; the cheapest crossing between each pair of
// touching partitions is a candidate bridge, and a minimum spanning tree over
// the fragments picks which ones to realise with A*.
std::size_t bridge_fragments(const GridMap& map, const RegionMask& work, RegionMask& skeleton,
                             Adjacency adjacency) {
  const ComponentLabeling fragments = connected_components(skeleton, adjacency);
  if (fragments.count <= 1) return 0;

  const std::size_t n = work.size();
  std::vector<double> dist(n, kInf);
  std::vector<int> owner(n, -1);
  std::vector<std::size_t> seed(n, kNone);
  MinHeap heap;
  for (std::size_t i = 0; i < n; ++i) {
    if (skeleton.cells()[i] == 0) continue;
    dist[i] = 0.0;
    owner[i] = fragments.labels.cells()[i];
    seed[i] = i;
    heap.push({0.0, i});
  }
  std::size_t expanded = 0;
  std::vector<std::uint8_t> done(n, 0);
  while (!heap.empty()) {
    const HeapEntry top = heap.top();
    heap.pop();
    if (done[top.index] != 0) continue;
    done[top.index] = 1;
    ++expanded;
    const Cell c = work.cell(top.index);
    for (const Offset o : neighbor_offsets(adjacency)) {
      const Cell nb{c.row + o.drow, c.col + o.dcol};
      if (!work.contains(nb)) continue;
      const std::size_t ni = work.index(nb);
      const double nd = top.dist + step_length(o);
      if (nd < dist[ni]) {
        dist[ni] = nd;
        owner[ni] = owner[top.index];
        seed[ni] = seed[top.index];
        heap.push({nd, ni});
      }
    }
  }

  struct Bridge {
    double cost;
    int a;
    int b;
    std::size_t seed_a;
    std::size_t seed_b;
  };
  std::map<std::pair<int, int>, Bridge> best;
  for (std::size_t i = 0; i < n; ++i) {
    if (owner[i] < 0) continue;
    const Cell c = work.cell(i);
    for (const Offset o : neighbor_offsets(adjacency)) {
      const Cell nb{c.row + o.drow, c.col + o.dcol};
      if (!work.contains(nb)) continue;
      const std::size_t ni = work.index(nb);
      if (owner[ni] < 0 || owner[ni] <= owner[i]) continue;
      const Bridge candidate{dist[i] + step_length(o) + dist[ni], owner[i], owner[ni], seed[i], seed[ni]};
      auto [it, inserted] = best.try_emplace({owner[i], owner[ni]}, candidate);
      if (!inserted && candidate.cost < it->second.cost) it->second = candidate;
    }
  }

  std::vector<Bridge> bridges;
  bridges.reserve(best.size());
  for (const auto& [key, bridge] : best) bridges.push_back(bridge);
  std::stable_sort(bridges.begin(), bridges.end(),
                   [](const Bridge& x, const Bridge& y) { return x.cost < y.cost; });

  std::vector<int> parent(static_cast<std::size_t>(fragments.count));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Bridge& bridge : bridges) {
    const int ra = find(bridge.a);
    const int rb = find(bridge.b);
    if (ra == rb) continue;
    parent[ra] = rb;
    const SearchOutcome link =
        search_in_region(map, work, work.cell(bridge.seed_a), work.cell(bridge.seed_b), adjacency);
    expanded += link.expanded;
    for (const Cell c : link.path) skeleton.set(c, true);
  }
  return expanded;
}

struct GraphPath {
  std::vector<Cell> cells;
  std::size_t expanded = 0;
};

GraphPath dijkstra_on_graph(const SkeletonGraph& graph, int from, int to) {
  GraphPath out;
  const std::size_t n = graph.nodes.size();
  std::vector<double> dist(n, kInf);
  std::vector<int> parent(n, -1);
  std::vector<std::uint8_t> done(n, 0);
  MinHeap heap;
  dist[static_cast<std::size_t>(from)] = 0.0;
  heap.push({0.0, static_cast<std::size_t>(from)});
  while (!heap.empty()) {
    const HeapEntry top = heap.top();
    heap.pop();
    if (done[top.index] != 0) continue;
    done[top.index] = 1;
    ++out.expanded;
    if (top.index == static_cast<std::size_t>(to)) break;
    for (const auto& e : graph.edges[top.index]) {
      const auto ti = static_cast<std::size_t>(e.to);
      const double nd = top.dist + e.weight;
      if (nd < dist[ti]) {
        dist[ti] = nd;
        parent[ti] = static_cast<int>(top.index);
        heap.push({nd, ti});
      }
    }
  }
  if (done[static_cast<std::size_t>(to)] == 0) return out;
  for (int i = to; i >= 0; i = parent[static_cast<std::size_t>(i)]) {
    out.cells.push_back(graph.nodes[static_cast<std::size_t>(i)]);
  }
  std::reverse(out.cells.begin(), out.cells.end());
  return out;
}

// Cuts any loop where the concatenated path revisits a cell.
std::vector<Cell> remove_loops(const std::vector<Cell>& path, int width) {
  auto key_of = [width](Cell c) {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(c.col);
  };
  std::vector<Cell> out;
  std::unordered_map<std::size_t, std::size_t> position;
  for (const Cell c : path) {
    const std::size_t key = key_of(c);
    if (auto it = position.find(key); it != position.end()) {
      for (std::size_t k = it->second + 1; k < out.size(); ++k) position.erase(key_of(out[k]));
      out.resize(it->second + 1);
      continue;
    }
    position.emplace(key, out.size());
    out.push_back(c);
  }
  return out;
}

}  // namespace

RegionMask extract_skeleton(const DistanceField& dist) {
  const Grid<double>& v = dist.values;
  RegionMask ridge(v.width(), v.height(), 0);
  const double outside = dist.virtual_border ? 0.0 : std::numeric_limits<double>::infinity();
  bool any_positive = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double here = v.cells()[i];
    if (!(here > 0.0)) continue;
    any_positive = true;
    const Cell c = v.cell(i);
    for (const Offset d : kRidgeDirections) {
      const double a = value_or_outside(v, Cell{c.row + d.drow, c.col + d.dcol}, outside);
      const double b = value_or_outside(v, Cell{c.row - d.drow, c.col - d.dcol}, outside);
      if (here >= a && here >= b && (here > a || here > b)) {
        ridge.cells()[i] = 1;
        break;
      }
    }
  }
  if (!any_positive) throw Error(ErrorKind::kEmptyRegion, "region has no free cells");

  // One-cell spurs: endpoints whose single neighbour is a junction.
  Grid<int> degree(v.width(), v.height(), 0);
  for (std::size_t i = 0; i < ridge.size(); ++i) {
    if (ridge.cells()[i] == 0) continue;
    const Cell c = ridge.cell(i);
    for (const Offset o : neighbor_offsets(Adjacency::kEight)) {
      if (ridge.contains(Cell{c.row + o.drow, c.col + o.dcol})) ++degree[c];
    }
  }
  RegionMask pruned = ridge;
  for (std::size_t i = 0; i < ridge.size(); ++i) {
    const Cell c = ridge.cell(i);
    if (ridge.cells()[i] == 0 || degree[c] != 1) continue;
    for (const Offset o : neighbor_offsets(Adjacency::kEight)) {
      const Cell n{c.row + o.drow, c.col + o.dcol};
      if (ridge.contains(n) && degree[n] >= 3) pruned.set(c, false);
    }
  }
  return pruned;
}

SkeletonGraph build_skeleton_graph(const RegionMask& skeleton, const DistanceField& dist,
                                   Adjacency adjacency) {
  SkeletonGraph graph;
  Grid<int> id(skeleton.width(), skeleton.height(), -1);
  for (std::size_t i = 0; i < skeleton.size(); ++i) {
    if (skeleton.cells()[i] == 0) continue;
    id.cells()[i] = static_cast<int>(graph.nodes.size());
    graph.nodes.push_back(skeleton.cell(i));
    graph.clearance.push_back(dist.values.cells()[i]);
  }
  graph.edges.resize(graph.nodes.size());
  for (std::size_t k = 0; k < graph.nodes.size(); ++k) {
    const Cell c = graph.nodes[k];
    for (const Offset o : neighbor_offsets(adjacency)) {
      const Cell n{c.row + o.drow, c.col + o.dcol};
      if (skeleton.contains(n)) graph.edges[k].push_back({id[n], step_length(o)});
    }
  }
  return graph;
}

std::vector<Cell> repair_segment_astar(const GridMap& map, const RegionMask& region_dilated,
                                       Cell a, Cell b, Adjacency adjacency) {
  return search_in_region(map, region_dilated, a, b, adjacency).path;
}

PlanResult plan_in_region(const PlanningProblem& problem, const RegionMask& region,
                          const VoronoiOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  validate_problem(problem);
  const GridMap& map = problem.map;
  require_same_shape(map, region, ErrorKind::kDimensionMismatch, "region vs map");

  const RegionMask dilated = dilate_in_free_space(map, region, options.dilation);
  if (!dilated.contains(problem.start)) {
    throw Error(ErrorKind::kDisconnectedRegion,
                "start " + to_string(problem.start) + " lies outside the dilated region");
  }
  const RegionMask work = reachable_from(dilated, problem.start, options.adjacency);

  Cell target = problem.goal;
  if (!work.contains(target)) {
    target = Cell{-1, -1};
    double best = kInf;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (work.cells()[i] == 0) continue;
      const Cell c = work.cell(i);
      const double d = euclidean(c, problem.goal);
      if (in_goal_region(problem, c) && d < best) {
        best = d;
        target = c;
      }
    }
    if (best == kInf) {
      throw Error(ErrorKind::kDisconnectedRegion,
                  "start and goal are not connected inside the dilated region");
    }
  }

  PlanResult result;
  result.region_px = dilated.count();

  const DistanceField dist = distance_transform(map, work, options.virtual_border);
  RegionMask skeleton = extract_skeleton(dist);
  for (std::size_t i = 0; i < skeleton.size(); ++i) skeleton.cells()[i] &= work.cells()[i];
  if (skeleton.count() == 0) {
    const auto it = std::max_element(dist.values.cells().begin(), dist.values.cells().end());
    skeleton.cells()[static_cast<std::size_t>(it - dist.values.cells().begin())] = 1;
  }
  result.expanded += bridge_fragments(map, work, skeleton, options.adjacency);

  const Cell start_anchor = nearest_member(skeleton, problem.start);
  const Cell goal_anchor = nearest_member(skeleton, target);
  const SearchOutcome head = search_in_region(map, work, problem.start, start_anchor, options.adjacency);
  const SearchOutcome tail = search_in_region(map, work, goal_anchor, target, options.adjacency);

  const SkeletonGraph graph = build_skeleton_graph(skeleton, dist, options.adjacency);
  Grid<int> node_id(map.width(), map.height(), -1);
  for (std::size_t k = 0; k < graph.nodes.size(); ++k) node_id[graph.nodes[k]] = static_cast<int>(k);
  const GraphPath middle = dijkstra_on_graph(graph, node_id[start_anchor], node_id[goal_anchor]);
  result.expanded += middle.expanded + head.expanded + tail.expanded;
  if (middle.cells.empty()) {
    throw Error(ErrorKind::kNoLocalPath, "skeleton does not connect the attachment points");
  }

  std::vector<Cell> joined = head.path;
  joined.insert(joined.end(), middle.cells.begin() + 1, middle.cells.end());
  joined.insert(joined.end(), tail.path.begin() + 1, tail.path.end());
  result.path = remove_loops(joined, map.width());
  result.cost = path_length(result.path);
  result.success = true;
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace regionplan
