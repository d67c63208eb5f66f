#include "regionplan/distance_transform.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace regionplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform of a sampled function (lower envelope of
// parabolas rooted at finite samples). Writes into `out`; `v`/`z` are scratch.
void envelope_1d(const std::vector<double>& f, std::vector<double>& out, std::vector<int>& v,
                 std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(out.begin(), out.end(), kInf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double d = q - v[j];
    out[q] = d * d + f[v[j]];
  }
}

}  // namespace

Grid<double> squared_distance_to_sites(int width, int height, std::span<const std::uint8_t> is_site) {
  Grid<double> out(width, height, kInf);
  const int longest = std::max(width, height);
  std::vector<double> f(static_cast<std::size_t>(longest));
  std::vector<double> d(static_cast<std::size_t>(longest));
  std::vector<int> v(static_cast<std::size_t>(longest));
  std::vector<double> z(static_cast<std::size_t>(longest) + 1);

  // Columns: 1-D transform of the site indicator.
  f.resize(static_cast<std::size_t>(height));
  d.resize(static_cast<std::size_t>(height));
  for (int c = 0; c < width; ++c) {
    for (int r = 0; r < height; ++r) f[r] = is_site[out.index(Cell{r, c})] != 0 ? 0.0 : kInf;
    envelope_1d(f, d, v, z);
    for (int r = 0; r < height; ++r) out[Cell{r, c}] = d[r];
  }
  // Rows: combine column results.
  f.resize(static_cast<std::size_t>(width));
  d.resize(static_cast<std::size_t>(width));
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) f[c] = out[Cell{r, c}];
    envelope_1d(f, d, v, z);
    for (int c = 0; c < width; ++c) out[Cell{r, c}] = d[c];
  }
  return out;
}

DistanceField distance_transform(const GridMap& map, const RegionMask& region, bool virtual_border) {
  require_same_shape(map, region, ErrorKind::kDimensionMismatch, "region vs map");
  const int pad = virtual_border ? 1 : 0;
  const int w = map.width() + 2 * pad;
  const int h = map.height() + 2 * pad;
  std::vector<std::uint8_t> sites(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 1);
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      const Cell cell{r, c};
      const bool open = map[cell] == Occupancy::kFree && region[cell] != 0;
      sites[static_cast<std::size_t>(r + pad) * static_cast<std::size_t>(w) +
            static_cast<std::size_t>(c + pad)] = open ? 0 : 1;
    }
  }
  const Grid<double> sq = squared_distance_to_sites(w, h, sites);
  DistanceField field{Grid<double>(map.width(), map.height(), 0.0), virtual_border};
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      field.values[Cell{r, c}] = std::sqrt(sq[Cell{r + pad, c + pad}]);
    }
  }
  return field;
}

RegionMask dilate_in_free_space(const GridMap& map, const RegionMask& region, double radius) {
  require_same_shape(map, region, ErrorKind::kDimensionMismatch, "region vs map");
  if (!(radius >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "dilation radius must be >= 0");
  const Grid<double> sq = squared_distance_to_sites(map.width(), map.height(), region.cells());
  const double limit = radius * radius + 1e-9;
  RegionMask out(map.width(), map.height(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.cells()[i] = (sq.cells()[i] <= limit && map.cells()[i] == Occupancy::kFree) ? 1 : 0;
  }
  return out;
}

}  // namespace regionplan
