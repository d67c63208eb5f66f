#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "regionplan/grid.hpp"
#include "regionplan/image_io.hpp"

namespace regionplan {

/// Included iff prob >= theta. Throws InvalidArgument when theta is outside [0, 1].
RegionMask threshold_mask(const ProbabilityMap& prob, double theta = 0.5);

struct CorridorSpec {
  std::vector<Cell> reference_path;
  double radius = 4.0;
};

/// Free cells within Euclidean distance `radius` of some reference-path cell.
/// Throws InvalidArgument (empty path, negative radius), OutOfBounds, PathBlocked.
RegionMask propose_corridor(const GridMap& map, const CorridorSpec& spec);

/// Reads a PFM prediction; values are clamped to [0, 1]. When `expected` is given
/// the dimensions must match it (DimensionMismatch otherwise).
ProbabilityMap load_prediction(const std::filesystem::path& path,
                               const GridMap* expected = nullptr, PfmLoadInfo* info = nullptr);

struct RegionMetrics {
  std::size_t size_px = 0;
  std::optional<double> reduction_pct;  // 100 * (1 - size / baseline)
};

RegionMetrics region_metrics(std::size_t size_px, std::optional<std::size_t> baseline_px = {});
RegionMetrics region_metrics(const RegionMask& mask, std::optional<std::size_t> baseline_px = {});

}  // namespace regionplan
