#pragma once

#include <vector>

#include "regionplan/grid.hpp"

namespace regionplan {

struct ComponentLabeling {
  Grid<int> labels;  // -1 for excluded cells, otherwise 0..count-1 in row-major order of first cell
  int count = 0;
};

ComponentLabeling connected_components(const RegionMask& mask,
                                       Adjacency adjacency = Adjacency::kEight);

/// True iff both cells are included and share a component. Throws OutOfBounds.
bool is_connected(const RegionMask& mask, Cell a, Cell b,
                  Adjacency adjacency = Adjacency::kEight);

struct PersistencePoint {
  double birth = 0.0;
  double death = 0.0;

  friend bool operator==(const PersistencePoint&, const PersistencePoint&) = default;
};

struct PersistenceDiagram {
  // Sorted by (-birth, -death).
  std::vector<PersistencePoint> points;

  bool empty() const noexcept { return points.empty(); }
  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

void sort_diagram(PersistenceDiagram& diagram);

/// 0-dimensional persistence of the superlevel filtration {f >= t}.
///
/// Cells enter in decreasing value order (row-major index breaks ties). When
/// components merge the elder rule applies: the component with the larger birth
/// survives, ties going to the one whose maximal cell has the smaller row-major
/// index. Zero-persistence pairs are dropped. The essential component dies at the
/// global minimum, so a nonempty field always yields exactly one point with
/// death == min(f).
///
/// Throws NonFiniteField if any value is NaN or infinite.
PersistenceDiagram persistence_diagram_0d(const ScalarField& field,
                                          Adjacency adjacency = Adjacency::kEight);

/// Symmetric Hausdorff distance between the point sets of two diagrams under the
/// L-infinity ground metric on (birth, death). Returns 0 when both are empty and
/// throws EmptyDiagram when exactly one is.
double hausdorff_distance(const PersistenceDiagram& a, const PersistenceDiagram& b);

}  // namespace regionplan
