#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>

#include "oracles.hpp"
#include "regionplan/image_io.hpp"
#include "regionplan/proposal.hpp"

using namespace regionplan;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidArgument;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("regionplan_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Pgm, SmallMapRoundtrip) {
  GridMap map(2, 2, Occupancy::kFree);
  map[{0, 1}] = Occupancy::kObstacle;
  map[{1, 0}] = Occupancy::kObstacle;
  const std::string bytes = encode_map_pgm(map);
  EXPECT_EQ(bytes.substr(0, 11), "P5\n2 2\n255\n");
  ASSERT_EQ(bytes.size(), 15u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[11]), 255);
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 0);
  EXPECT_EQ(decode_map_pgm(bytes), map);
}

TEST(Pgm, RandomMapsAndMasksRoundtrip) {
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const int w = 1 + static_cast<int>(rng.below(40));
    const int h = 1 + static_cast<int>(rng.below(40));
    const GridMap map = oracle::random_map(rng, w, h, 0.4);
    EXPECT_EQ(decode_map_pgm(encode_map_pgm(map)), map);
    const RegionMask mask = oracle::random_mask(rng, w, h, 0.5);
    EXPECT_EQ(decode_mask_pgm(encode_mask_pgm(mask)), mask);
  }
}

TEST(Pgm, HeaderCommentsAreSkipped) {
  std::string bytes = "P5 # comment\n# another\n2 1\n255\n";
  bytes += '\xff';
  bytes += '\0';
  const GridMap map = decode_map_pgm(bytes);
  EXPECT_EQ(map[Cell(0, 0)], Occupancy::kFree);
  EXPECT_EQ(map[Cell(0, 1)], Occupancy::kObstacle);
}

TEST(Pgm, IntermediatePixelValueIsRejected) {
  std::string bytes = "P5\n2 1\n255\n";
  bytes += '\xff';
  bytes += static_cast<char>(127);
  EXPECT_EQ(kind_of([&] { decode_mask_pgm(bytes); }), ErrorKind::kValueError);
  EXPECT_EQ(kind_of([&] { decode_map_pgm(bytes); }), ErrorKind::kValueError);
}

TEST(Pgm, MalformedInputsAreFormatErrors) {
  EXPECT_EQ(kind_of([] { decode_map_pgm("P2\n1 1\n255\n0"); }), ErrorKind::kFormatError);
  EXPECT_EQ(kind_of([] { decode_map_pgm("P5\n2 2\n255\n\xff"); }), ErrorKind::kFormatError);
  EXPECT_EQ(kind_of([] { decode_map_pgm("P5\n2 2\n65535\n"); }), ErrorKind::kFormatError);
  EXPECT_EQ(kind_of([] { decode_map_pgm("P5\n2"); }), ErrorKind::kFormatError);
  EXPECT_EQ(kind_of([] { decode_map_pgm(""); }), ErrorKind::kFormatError);
}

TEST(Pfm, ConstantFieldRoundtripsExactly) {
  const ProbabilityMap prob(5, 3, 0.25f);
  EXPECT_EQ(decode_pfm(encode_pfm(prob)), prob);
}

TEST(Pfm, RandomFieldsRoundtripBitExact) {
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    const int w = 1 + static_cast<int>(rng.below(30));
    const int h = 1 + static_cast<int>(rng.below(30));
    ProbabilityMap prob(w, h, 0.0f);
    for (auto& v : prob.cells()) v = static_cast<float>(rng.uniform());
    const std::string bytes = encode_pfm(prob);
    EXPECT_EQ(decode_pfm(bytes), prob);
    EXPECT_EQ(encode_pfm(decode_pfm(bytes)), bytes);
  }
}

TEST(Pfm, RowsAreStoredBottomToTop) {
  ProbabilityMap prob(1, 2, 0.0f);
  prob[{0, 0}] = 1.0f;  // top row
  const std::string bytes = encode_pfm(prob);
  const std::string header = "Pf\n1 2\n-1.0\n";
  ASSERT_EQ(bytes.substr(0, header.size()), header);
  float first = -1.0f;
  std::memcpy(&first, bytes.data() + header.size(), sizeof(float));
  EXPECT_EQ(first, 0.0f);
}

TEST(Pfm, BigEndianPayloadIsAccepted) {
  std::string bytes = "Pf\n1 1\n1.0\n";
  const float value = 0.5f;
  unsigned char raw[4];
  std::memcpy(raw, &value, 4);
  for (int i = 3; i >= 0; --i) bytes += static_cast<char>(raw[i]);
  EXPECT_EQ(decode_pfm(bytes)[Cell(0, 0)], 0.5f);
}

TEST(Pfm, SlightExcessIsClampedWithWarning) {
  ProbabilityMap prob(2, 1, 0.5f);
  prob[{0, 0}] = 1.0f + 1e-6f * 4;
  PfmLoadInfo info;
  const ProbabilityMap loaded = decode_pfm(encode_pfm(prob), &info);
  EXPECT_EQ(loaded[Cell(0, 0)], 1.0f);
  EXPECT_EQ(info.clamped, 1u);
  EXPECT_TRUE(info.warned);
}

TEST(Pfm, SmallestRepresentableExcessIsClampedWithWarning) {
  ProbabilityMap prob(1, 1, std::nextafter(1.0f, 2.0f));
  PfmLoadInfo info;
  const ProbabilityMap loaded = decode_pfm(encode_pfm(prob), &info);
  EXPECT_EQ(loaded[Cell(0, 0)], 1.0f);
  EXPECT_EQ(info.clamped, 1u);
  EXPECT_TRUE(info.warned);
  EXPECT_GT(info.max_excess, 0.0);
}

TEST(Pfm, InRangeValuesProduceNoWarning) {
  PfmLoadInfo info;
  decode_pfm(encode_pfm(ProbabilityMap(3, 3, 1.0f)), &info);
  EXPECT_EQ(info.clamped, 0u);
  EXPECT_FALSE(info.warned);
}

TEST(Pfm, NonFiniteAndTruncatedInputsAreRejected) {
  ProbabilityMap prob(2, 2, 0.5f);
  prob[{1, 1}] = std::numeric_limits<float>::quiet_NaN();
  EXPECT_EQ(kind_of([&] { decode_pfm(encode_pfm(prob)); }), ErrorKind::kValueError);
  const std::string good = encode_pfm(ProbabilityMap(4, 4, 0.1f));
  EXPECT_EQ(kind_of([&] { decode_pfm(good.substr(0, good.size() - 3)); }), ErrorKind::kFormatError);
  EXPECT_EQ(kind_of([] { decode_pfm("PF\n1 1\n-1.0\n0000"); }), ErrorKind::kFormatError);
}

TEST(ProblemJson, RoundtripAndRelativeMapPath) {
  const fs::path dir = scratch_dir("problem");
  GridMap map(6, 4, Occupancy::kFree);
  map[{2, 3}] = Occupancy::kObstacle;
  write_map_pgm(dir / "maps" / "m.pgm", map);
  const ProblemFile file{"maps/m.pgm", {0, 1}, {3, 5}, 1.5};
  write_problem_json(dir / "p.json", file);
  const ProblemFile back = read_problem_json(dir / "p.json");
  EXPECT_EQ(back.map, file.map);
  EXPECT_EQ(back.start, file.start);
  EXPECT_EQ(back.goal, file.goal);
  EXPECT_EQ(back.epsilon, file.epsilon);
  EXPECT_EQ(encode_problem_json(back), encode_problem_json(file));

  const PlanningProblem problem = load_problem(dir / "p.json");
  EXPECT_EQ(problem.map, map);
  EXPECT_EQ(problem.goal, Cell(3, 5));
}

TEST(ProblemJson, InvalidDocumentsAreRejected) {
  EXPECT_EQ(kind_of([] { decode_problem_json("{"); }), ErrorKind::kFormatError);
  EXPECT_EQ(kind_of([] { decode_problem_json(R"({"map": "a.pgm", "start": [1], "goal": [0, 0]})"); }),
            ErrorKind::kFormatError);
  const fs::path dir = scratch_dir("blocked");
  GridMap map(3, 3, Occupancy::kFree);
  map[{1, 1}] = Occupancy::kObstacle;
  write_map_pgm(dir / "m.pgm", map);
  write_problem_json(dir / "p.json", {"m.pgm", {1, 1}, {0, 0}, 1.0});
  EXPECT_THROW(load_problem(dir / "p.json"), Error);
}

TEST(Files, MissingFileIsIoError) {
  EXPECT_EQ(kind_of([] { read_map_pgm("/nonexistent/regionplan/x.pgm"); }), ErrorKind::kIoError);
}

TEST(Files, MaskSizeSurvivesPgmRoundtrip) {
  const fs::path dir = scratch_dir("mask");
  Rng rng(8);
  const RegionMask mask = oracle::random_mask(rng, 33, 21, 0.3);
  write_mask_pgm(dir / "mask.pgm", mask);
  const std::string bytes = read_file(dir / "mask.pgm");
  std::size_t white = 0;
  for (std::size_t i = bytes.size() - mask.size(); i < bytes.size(); ++i) {
    white += static_cast<unsigned char>(bytes[i]) == 255 ? 1 : 0;
  }
  EXPECT_EQ(region_metrics(read_mask_pgm(dir / "mask.pgm")).size_px, white);
  EXPECT_EQ(white, mask.count());
}
