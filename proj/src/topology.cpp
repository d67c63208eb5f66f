#include "regionplan/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace regionplan {

ComponentLabeling connected_components(const RegionMask& mask, Adjacency adjacency) {
  ComponentLabeling out{Grid<int>(mask.width(), mask.height(), -1), 0};
  std::deque<Cell> queue;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const Cell seed = mask.cell(i);
    if (!mask.contains(seed) || out.labels[seed] >= 0) continue;
    const int label = out.count++;
    out.labels[seed] = label;
    queue.push_back(seed);
    while (!queue.empty()) {
      const Cell c = queue.front();
      queue.pop_front();
      for (const Offset o : neighbor_offsets(adjacency)) {
        const Cell n{c.row + o.drow, c.col + o.dcol};
        if (mask.contains(n) && out.labels[n] < 0) {
          out.labels[n] = label;
          queue.push_back(n);
        }
      }
    }
  }
  return out;
}

bool is_connected(const RegionMask& mask, Cell a, Cell b, Adjacency adjacency) {
  mask.require_in_bounds(a);
  mask.require_in_bounds(b);
  if (!mask.contains(a) || !mask.contains(b)) return false;
  if (a == b) return true;
  Grid<std::uint8_t> seen(mask.width(), mask.height(), 0);
  std::deque<Cell> queue{a};
  seen[a] = 1;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (const Offset o : neighbor_offsets(adjacency)) {
      const Cell n{c.row + o.drow, c.col + o.dcol};
      if (!mask.contains(n) || seen[n] != 0) continue;
      if (n == b) return true;
      seen[n] = 1;
      queue.push_back(n);
    }
  }
  return false;
}

void sort_diagram(PersistenceDiagram& diagram) {
  std::sort(diagram.points.begin(), diagram.points.end(),
            [](const PersistencePoint& x, const PersistencePoint& y) {
              if (x.birth != y.birth) return x.birth > y.birth;
              return x.death > y.death;
            });
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void attach(std::size_t child_root, std::size_t parent_root) { parent_[child_root] = parent_root; }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

PersistenceDiagram persistence_diagram_0d(const ScalarField& field, Adjacency adjacency) {
  if (field.empty()) throw Error(ErrorKind::kInvalidArgument, "empty field");
  const auto values = field.cells();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::kNonFiniteField, "non-finite value at " + to_string(field.cell(i)));
    }
  }

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });

  UnionFind sets(values.size());
  std::vector<std::uint8_t> added(values.size(), 0);
  // Per root: index of the component's maximal cell. Its value is the birth.
  std::vector<std::size_t> max_cell(values.size());
  auto elder_first = [&](std::size_t ra, std::size_t rb) {
    const std::size_t ma = max_cell[ra];
    const std::size_t mb = max_cell[rb];
    if (values[ma] != values[mb]) return values[ma] > values[mb];
    return ma < mb;
  };

  PersistenceDiagram diagram;
  std::vector<std::size_t> roots;
  for (const std::size_t v : order) {
    const Cell c = field.cell(v);
    roots.clear();
    for (const Offset o : neighbor_offsets(adjacency)) {
      const Cell n{c.row + o.drow, c.col + o.dcol};
      if (!field.in_bounds(n)) continue;
      const std::size_t ni = field.index(n);
      if (added[ni] == 0) continue;
      const std::size_t r = sets.find(ni);
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }
    added[v] = 1;
    if (roots.empty()) {
      max_cell[v] = v;
      continue;
    }
    const std::size_t elder = *std::min_element(roots.begin(), roots.end(), elder_first);
    for (const std::size_t r : roots) {
      if (r == elder) continue;
      const double birth = values[max_cell[r]];
      if (birth > values[v]) diagram.points.push_back({birth, values[v]});
      sets.attach(r, elder);
    }
    sets.attach(v, elder);
  }

  const std::size_t root = sets.find(order.front());
  diagram.points.push_back({values[max_cell[root]], values[order.back()]});
  sort_diagram(diagram);
  return diagram;
}

double hausdorff_distance(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) {
    throw Error(ErrorKind::kEmptyDiagram, "Hausdorff distance to an empty diagram is undefined");
  }
  auto directed = [](const PersistenceDiagram& from, const PersistenceDiagram& to) {
    double worst = 0.0;
    for (const auto& p : from.points) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& q : to.points) {
        nearest = std::min(nearest, std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death)));
      }
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace regionplan
