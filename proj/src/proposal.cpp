#include "regionplan/proposal.hpp"

#include "regionplan/distance_transform.hpp"

namespace regionplan {

RegionMask threshold_mask(const ProbabilityMap& prob, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "theta must lie in [0, 1]");
  }
  RegionMask mask(prob.width(), prob.height(), 0);
  for (std::size_t i = 0; i < prob.size(); ++i) {
    mask.cells()[i] = static_cast<double>(prob.cells()[i]) >= theta ? 1 : 0;
  }
  return mask;
}

RegionMask propose_corridor(const GridMap& map, const CorridorSpec& spec) {
  if (spec.reference_path.empty()) throw Error(ErrorKind::kInvalidArgument, "empty reference path");
  if (!(spec.radius >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "corridor radius must be >= 0");
  RegionMask path_cells(map.width(), map.height(), 0);
  for (const Cell c : spec.reference_path) {
    map.require_in_bounds(c);
    if (map[c] != Occupancy::kFree) {
      throw Error(ErrorKind::kPathBlocked, "reference path cell " + to_string(c) + " is an obstacle");
    }
    path_cells.set(c, true);
  }
  return dilate_in_free_space(map, path_cells, spec.radius);
}

ProbabilityMap load_prediction(const std::filesystem::path& path, const GridMap* expected,
                               PfmLoadInfo* info) {
  ProbabilityMap prob = read_pfm(path, info);
  if (expected != nullptr) {
    require_same_shape(prob, *expected, ErrorKind::kDimensionMismatch, "prediction vs map");
  }
  return prob;
}

RegionMetrics region_metrics(std::size_t size_px, std::optional<std::size_t> baseline_px) {
  RegionMetrics m;
  m.size_px = size_px;
  if (baseline_px) {
    if (*baseline_px == 0) throw Error(ErrorKind::kInvalidArgument, "baseline must be positive");
    m.reduction_pct =
        100.0 * (1.0 - static_cast<double>(size_px) / static_cast<double>(*baseline_px));
  }
  return m;
}

RegionMetrics region_metrics(const RegionMask& mask, std::optional<std::size_t> baseline_px) {
  return region_metrics(mask.count(), baseline_px);
}

}  // namespace regionplan
