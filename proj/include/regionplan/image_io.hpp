#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "regionplan/grid.hpp"

// File formats:
//   grids and masks  binary PGM ("P5", maxval 255), 0 = obstacle/excluded,
//                    255 = free/included, rows top to bottom
//   probability maps grayscale PFM ("Pf", scale -1.0 => little-endian float32),
//                    rows bottom to top as in every PFM reader
//   problems         JSON {"map": path, "start": [row, col], "goal": [row, col], "epsilon": x}

namespace regionplan {

namespace fs = std::filesystem;

std::string encode_map_pgm(const GridMap& map);
std::string encode_mask_pgm(const RegionMask& mask);
GridMap decode_map_pgm(std::string_view bytes);
RegionMask decode_mask_pgm(std::string_view bytes);

/// Arbitrary 8-bit image, used for path overlays. No value restriction.
std::string encode_gray_pgm(const Grid<std::uint8_t>& image);

struct PfmLoadInfo {
  std::size_t clamped = 0;   // values moved into [0, 1]
  double max_excess = 0.0;   // largest distance outside [0, 1]
  bool warned = false;       // a warning was written to std::clog
};

std::string encode_pfm(const ProbabilityMap& prob);
ProbabilityMap decode_pfm(std::string_view bytes, PfmLoadInfo* info = nullptr);

void write_map_pgm(const fs::path& path, const GridMap& map);
void write_mask_pgm(const fs::path& path, const RegionMask& mask);
void write_gray_pgm(const fs::path& path, const Grid<std::uint8_t>& image);
void write_pfm(const fs::path& path, const ProbabilityMap& prob);
GridMap read_map_pgm(const fs::path& path);
RegionMask read_mask_pgm(const fs::path& path);
ProbabilityMap read_pfm(const fs::path& path, PfmLoadInfo* info = nullptr);

struct ProblemFile {
  std::string map;
  Cell start;
  Cell goal;
  double epsilon = 2.0;
};

std::string encode_problem_json(const ProblemFile& problem);
ProblemFile decode_problem_json(std::string_view text);
void write_problem_json(const fs::path& path, const ProblemFile& problem);
ProblemFile read_problem_json(const fs::path& path);

/// Reads a problem file and its map. Relative map paths resolve against the
/// problem file's directory. The result is validated.
PlanningProblem load_problem(const fs::path& path);

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view bytes);

}  // namespace regionplan
