#pragma once

#include <span>

#include "regionplan/grid.hpp"

namespace regionplan {

struct DistanceField {
  // Euclidean distance (cell-centre metric) to the nearest blocked cell; 0 on
  // blocked cells, +inf when no blocked cell exists at all.
  Grid<double> values;
  bool virtual_border = false;
};

/// Exact squared Euclidean distance transform of a binary grid: for every cell,
/// the squared distance to the nearest site. Separable lower-envelope algorithm,
/// O(width * height). Cells with no site get +inf.
Grid<double> squared_distance_to_sites(int width, int height, std::span<const std::uint8_t> is_site);

/// Distance to the nearest obstacle or region-excluded cell. With virtual_border,
/// a ring of obstacle cells is assumed just outside the grid.
DistanceField distance_transform(const GridMap& map, const RegionMask& region,
                                 bool virtual_border = true);

/// Cells of `region` together with every cell within Euclidean distance `radius`
/// of it, intersected with free space.
RegionMask dilate_in_free_space(const GridMap& map, const RegionMask& region, double radius);

}  // namespace regionplan
