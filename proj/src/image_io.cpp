#include "regionplan/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace regionplan {

namespace {

// Netpbm-style header tokenizer: whitespace separated, '#' starts a comment.
class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view token() {
    skip_space_and_comments();
    const std::size_t begin = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (begin == pos_) throw Error(ErrorKind::kFormatError, "truncated header");
    return bytes_.substr(begin, pos_ - begin);
  }

  int positive_int(const char* what) {
    const std::string_view t = token();
    int value = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || end != t.data() + t.size() || value <= 0) {
      throw Error(ErrorKind::kFormatError, std::string("bad ") + what + " '" + std::string(t) + "'");
    }
    return value;
  }

  double real(const char* what) {
    const std::string t(token());
    char* end = nullptr;
    const double value = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(value)) {
      throw Error(ErrorKind::kFormatError, std::string("bad ") + what + " '" + t + "'");
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::string_view payload() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(ErrorKind::kFormatError, "missing raster separator");
    }
    return bytes_.substr(pos_ + 1);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

struct Raster8 {
  int width;
  int height;
  std::string_view pixels;
};

Raster8 parse_pgm(std::string_view bytes) {
  HeaderReader header(bytes);
  if (header.token() != "P5") throw Error(ErrorKind::kFormatError, "not a binary PGM (magic P5)");
  const int width = header.positive_int("width");
  const int height = header.positive_int("height");
  const int maxval = header.positive_int("maxval");
  if (maxval != 255) {
    throw Error(ErrorKind::kFormatError, "maxval must be 255, got " + std::to_string(maxval));
  }
  const std::string_view payload = header.payload();
  const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (payload.size() < need) {
    throw Error(ErrorKind::kFormatError, "raster truncated: " + std::to_string(payload.size()) +
                                             " of " + std::to_string(need) + " bytes");
  }
  return {width, height, payload.substr(0, need)};
}

template <typename GridT>
GridT decode_binary_pgm(std::string_view bytes, typename GridT::value_type off,
                        typename GridT::value_type on) {
  const Raster8 raster = parse_pgm(bytes);
  std::vector<typename GridT::value_type> cells(raster.pixels.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto v = static_cast<unsigned char>(raster.pixels[i]);
    if (v != 0 && v != 255) {
      throw Error(ErrorKind::kValueError, "pixel " + std::to_string(i) + " has value " +
                                              std::to_string(v) + "; only 0 and 255 allowed");
    }
    cells[i] = v == 255 ? on : off;
  }
  return GridT(raster.width, raster.height, std::move(cells));
}

std::string pgm_header(int width, int height) {
  return "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
}

std::uint32_t byteswap32(std::uint32_t v) {
  return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
}

}  // namespace

std::string encode_map_pgm(const GridMap& map) {
  std::string out = pgm_header(map.width(), map.height());
  for (const Occupancy v : map.cells()) out.push_back(v == Occupancy::kFree ? '\xff' : '\0');
  return out;
}

std::string encode_mask_pgm(const RegionMask& mask) {
  std::string out = pgm_header(mask.width(), mask.height());
  for (const std::uint8_t v : mask.cells()) out.push_back(v != 0 ? '\xff' : '\0');
  return out;
}

std::string encode_gray_pgm(const Grid<std::uint8_t>& image) {
  std::string out = pgm_header(image.width(), image.height());
  for (const std::uint8_t v : image.cells()) out.push_back(static_cast<char>(v));
  return out;
}

GridMap decode_map_pgm(std::string_view bytes) {
  return decode_binary_pgm<GridMap>(bytes, Occupancy::kObstacle, Occupancy::kFree);
}

RegionMask decode_mask_pgm(std::string_view bytes) {
  return decode_binary_pgm<RegionMask>(bytes, 0, 1);
}

std::string encode_pfm(const ProbabilityMap& prob) {
  std::string out = "Pf\n" + std::to_string(prob.width()) + " " + std::to_string(prob.height()) + "\n-1.0\n";
  const std::size_t row_bytes = static_cast<std::size_t>(prob.width()) * 4;
  out.reserve(out.size() + row_bytes * static_cast<std::size_t>(prob.height()));
  for (int r = prob.height() - 1; r >= 0; --r) {
    for (int c = 0; c < prob.width(); ++c) {
      std::uint32_t bits = std::bit_cast<std::uint32_t>(prob[Cell{r, c}]);
      if constexpr (std::endian::native == std::endian::big) bits = byteswap32(bits);
      char buf[4];
      std::memcpy(buf, &bits, 4);
      out.append(buf, 4);
    }
  }
  return out;
}

ProbabilityMap decode_pfm(std::string_view bytes, PfmLoadInfo* info) {
  HeaderReader header(bytes);
  if (header.token() != "Pf") throw Error(ErrorKind::kFormatError, "not a grayscale PFM (magic Pf)");
  const int width = header.positive_int("width");
  const int height = header.positive_int("height");
  const double scale = header.real("scale");
  if (scale == 0.0) throw Error(ErrorKind::kFormatError, "PFM scale must be nonzero");
  const bool little = scale < 0.0;
  const std::string_view payload = header.payload();
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (payload.size() < count * 4) {
    throw Error(ErrorKind::kFormatError, "raster truncated: " + std::to_string(payload.size()) +
                                             " of " + std::to_string(count * 4) + " bytes");
  }

  PfmLoadInfo stats;
  ProbabilityMap prob(width, height, 0.0f);
  std::size_t offset = 0;
  for (int r = height - 1; r >= 0; --r) {
    for (int c = 0; c < width; ++c, offset += 4) {
      std::uint32_t bits = 0;
      std::memcpy(&bits, payload.data() + offset, 4);
      if ((std::endian::native == std::endian::little) != little) bits = byteswap32(bits);
      float v = std::bit_cast<float>(bits);
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::kValueError, "non-finite probability at " + to_string(Cell{r, c}));
      }
      const double excess = v < 0.0f ? -static_cast<double>(v) : static_cast<double>(v) - 1.0;
      if (excess > 0.0) {
        ++stats.clamped;
        stats.max_excess = std::max(stats.max_excess, excess);
        v = std::clamp(v, 0.0f, 1.0f);
      }
      prob[Cell{r, c}] = v;
    }
  }
  if (stats.clamped > 0) {
    stats.warned = true;
    std::clog << "warning: " << stats.clamped << " probability values outside [0, 1] (max excess "
              << stats.max_excess << ") were clamped\n";
  }
  if (info != nullptr) *info = stats;
  return prob;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIoError, "short write to " + path.string());
}

void write_map_pgm(const fs::path& path, const GridMap& map) { write_file(path, encode_map_pgm(map)); }
void write_mask_pgm(const fs::path& path, const RegionMask& mask) { write_file(path, encode_mask_pgm(mask)); }
void write_gray_pgm(const fs::path& path, const Grid<std::uint8_t>& image) {
  write_file(path, encode_gray_pgm(image));
}
void write_pfm(const fs::path& path, const ProbabilityMap& prob) { write_file(path, encode_pfm(prob)); }
GridMap read_map_pgm(const fs::path& path) { return decode_map_pgm(read_file(path)); }
RegionMask read_mask_pgm(const fs::path& path) { return decode_mask_pgm(read_file(path)); }
ProbabilityMap read_pfm(const fs::path& path, PfmLoadInfo* info) { return decode_pfm(read_file(path), info); }

std::string encode_problem_json(const ProblemFile& problem) {
  nlohmann::ordered_json j;
  j["map"] = problem.map;
  j["start"] = {problem.start.row, problem.start.col};
  j["goal"] = {problem.goal.row, problem.goal.col};
  j["epsilon"] = problem.epsilon;
  return j.dump(2) + "\n";
}

ProblemFile decode_problem_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    auto cell = [&](const char* key) {
      const auto& a = j.at(key);
      if (!a.is_array() || a.size() != 2) {
        throw Error(ErrorKind::kFormatError, std::string(key) + " must be [row, col]");
      }
      return Cell{a[0].get<int>(), a[1].get<int>()};
    };
    ProblemFile p;
    p.map = j.at("map").get<std::string>();
    p.start = cell("start");
    p.goal = cell("goal");
    p.epsilon = j.at("epsilon").get<double>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormatError, std::string("problem file: ") + e.what());
  }
}

void write_problem_json(const fs::path& path, const ProblemFile& problem) {
  write_file(path, encode_problem_json(problem));
}

ProblemFile read_problem_json(const fs::path& path) { return decode_problem_json(read_file(path)); }

PlanningProblem load_problem(const fs::path& path) {
  const ProblemFile file = read_problem_json(path);
  fs::path map_path(file.map);
  if (map_path.is_relative()) map_path = path.parent_path() / map_path;
  PlanningProblem problem{read_map_pgm(map_path), file.start, file.goal, file.epsilon};
  validate_problem(problem);
  return problem;
}

}  // namespace regionplan
