#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "regionplan/error.hpp"

namespace regionplan {

struct Cell {
  int row = 0;
  int col = 0;

  friend constexpr bool operator==(const Cell&, const Cell&) = default;
  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

inline double euclidean(Cell a, Cell b) {
  return std::hypot(static_cast<double>(a.row - b.row), static_cast<double>(a.col - b.col));
}

// Admissible distance for 8-connected motion with unit/sqrt(2) steps.
inline double octile(Cell a, Cell b) {
  const double dr = std::abs(a.row - b.row);
  const double dc = std::abs(a.col - b.col);
  return std::max(dr, dc) + (std::sqrt(2.0) - 1.0) * std::min(dr, dc);
}

enum class Adjacency { kFour = 4, kEight = 8 };

struct Offset {
  int drow;
  int dcol;
};

// Orthogonal offsets first, diagonals after.
inline constexpr std::array<Offset, 8> kNeighborOffsets = {{
    {-1, 0}, {0, -1}, {0, 1}, {1, 0}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};

inline std::span<const Offset> neighbor_offsets(Adjacency adjacency) {
  return std::span<const Offset>(kNeighborOffsets)
      .first(adjacency == Adjacency::kFour ? 4 : 8);
}

inline double step_length(Offset o) { return (o.drow != 0 && o.dcol != 0) ? std::sqrt(2.0) : 1.0; }

inline bool are_adjacent(Cell a, Cell b, Adjacency adjacency = Adjacency::kEight) {
  const int dr = std::abs(a.row - b.row);
  const int dc = std::abs(a.col - b.col);
  if (adjacency == Adjacency::kFour) return dr + dc == 1;
  return std::max(dr, dc) == 1;
}

/// Row-major 2-D grid. Every constructed grid has width >= 1 and height >= 1;
/// only a default-constructed grid is empty.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    check_dims(width, height);
    cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Grid(int width, int height, std::vector<T> cells)
      : width_(width), height_(height), cells_(std::move(cells)) {
    check_dims(width, height);
    if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(ErrorKind::kMalformedGrid,
                  "buffer of " + std::to_string(cells_.size()) + " cells declared " +
                      std::to_string(width) + "x" + std::to_string(height));
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return cells_.size(); }
  bool empty() const noexcept { return cells_.empty(); }

  bool in_bounds(Cell c) const noexcept {
    return c.row >= 0 && c.col >= 0 && c.row < height_ && c.col < width_;
  }
  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell(std::size_t index) const noexcept {
    return Cell{static_cast<int>(index / static_cast<std::size_t>(width_)),
                static_cast<int>(index % static_cast<std::size_t>(width_))};
  }

  const T& operator[](Cell c) const noexcept { return cells_[index(c)]; }
  T& operator[](Cell c) noexcept { return cells_[index(c)]; }

  const T& at(Cell c) const {
    require_in_bounds(c);
    return cells_[index(c)];
  }

  void require_in_bounds(Cell c) const {
    if (!in_bounds(c)) {
      throw Error(ErrorKind::kOutOfBounds, "cell (" + std::to_string(c.row) + ", " +
                                               std::to_string(c.col) + ") outside " +
                                               std::to_string(width_) + "x" +
                                               std::to_string(height_) + " grid");
    }
  }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  std::span<const T> cells() const noexcept { return cells_; }
  std::span<T> cells() noexcept { return cells_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static void check_dims(int width, int height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorKind::kMalformedGrid, "grid dimensions must be positive, got " +
                                                 std::to_string(width) + "x" +
                                                 std::to_string(height));
    }
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> cells_;
};

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, ErrorKind kind,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw Error(kind, std::string(what) + ": " + std::to_string(a.width()) + "x" +
                          std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                          "x" + std::to_string(b.height()));
  }
}

enum class Occupancy : std::uint8_t { kFree = 0, kObstacle = 1 };

class GridMap : public Grid<Occupancy> {
 public:
  using Grid<Occupancy>::Grid;

  bool is_free(Cell c) const noexcept { return in_bounds(c) && (*this)[c] == Occupancy::kFree; }
  std::size_t free_count() const noexcept;
};

/// Binary candidate region; 1 = included.
class RegionMask : public Grid<std::uint8_t> {
 public:
  using Grid<std::uint8_t>::Grid;

  static RegionMask full(int width, int height) { return RegionMask(width, height, 1); }
  static RegionMask of_free_space(const GridMap& map);

  bool contains(Cell c) const noexcept { return in_bounds(c) && (*this)[c] != 0; }
  void set(Cell c, bool included) noexcept { (*this)[c] = included ? 1 : 0; }
  std::size_t count() const noexcept;
};

/// Per-pixel free-space probability, stored as 32-bit floats (PFM payload).
using ProbabilityMap = Grid<float>;

/// Double-precision scalar field used by the persistence and loss code.
using ScalarField = Grid<double>;

ScalarField to_field(const ProbabilityMap& prob);
ScalarField to_field(const RegionMask& mask);

struct PlanningProblem {
  GridMap map;
  Cell start;
  Cell goal;
  double epsilon = 2.0;
};

/// Throws unless start and goal are free, in-bounds cells and epsilon >= 0.
void validate_problem(const PlanningProblem& problem);

/// Membership in the goal region: free cells within Euclidean distance epsilon of the goal.
inline bool in_goal_region(const PlanningProblem& problem, Cell c) {
  return problem.map.is_free(c) && euclidean(c, problem.goal) <= problem.epsilon + 1e-12;
}

double path_length(std::span<const Cell> path);

std::string to_string(Cell c);

}  // namespace regionplan
