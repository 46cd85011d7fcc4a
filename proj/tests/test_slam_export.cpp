#include <doctest.h>

#include "oracles.hpp"
#include "semmap/errors.hpp"
#include "semmap/slam_export.hpp"
#include "semmap/synth.hpp"

#include <random>
#include <sstream>

using namespace semmap;

namespace {

const std::string kMinimal =
    "SEMMAP_SLAM 1\n"
    "# one frame, one point\n"
    "keyframe 0 0 0 0 0\n"
    "pose 0 1 0 0 0 0 1 0 0 0 0 1 0\n"
    "point 7 0.5 -0.25 4\n"
    "observe 0 7\n";

SlamExport parse(const std::string& text) {
  std::istringstream in(text);
  return read_slam_export(in, "slam.txt");
}

}  // namespace

TEST_CASE("minimal export") {
  const auto s = parse(kMinimal);
  REQUIRE(s.keyframes.size() == 1);
  REQUIRE(s.points.size() == 1);
  CHECK(s.points[0].id == 7);
  CHECK(s.points[0].position == Vec3(0.5, -0.25, 4));
  CHECK(s.keyframes[0].camera_matrix(2, 2) == 1.0);
  CHECK(s.visibility.at(0) == std::vector<PointId>{7});
  const auto map = s.to_semantic_map();
  CHECK(map.point(7).belief == LabelDistribution::uniform());
}

TEST_CASE("pose line with eleven values names its line") {
  const std::string text =
      "SEMMAP_SLAM 1\n"
      "keyframe 0 0 0 0 0\n"
      "pose 0 1 0 0 0 0 1 0 0 0 0 1\n";
  try {
    parse(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    const std::string msg = e.what();
    CHECK(msg.find("slam.txt:3") != std::string::npos);
    CHECK(msg.find("11") != std::string::npos);
  }
}

TEST_CASE("format violations") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("SEMMAP_SLAM 2\n"), ParseError);
  CHECK_THROWS_AS(parse("keyframe 0 0 0 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse("SEMMAP_SLAM 1\nkeyframe 0 0 0 0 0\n"), ParseError);                 // no pose
  CHECK_THROWS_AS(parse("SEMMAP_SLAM 1\npose 0 1 0 0 0 0 1 0 0 0 0 1 0\n"), ParseError);   // undeclared frame
  CHECK_THROWS_AS(parse("SEMMAP_SLAM 1\nfoo 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse("SEMMAP_SLAM 1\npoint 1 a 2 3\n"), ParseError);
  CHECK_THROWS_AS(parse(kMinimal + "keyframe 0 1 1 1 0\n"), ParseError);                   // not increasing

  // Dangling and inconsistent references are validation errors.
  CHECK_THROWS_AS(parse(kMinimal + "observe 0 8\n"), ValidationError);
  CHECK_THROWS_AS(parse(kMinimal + "observe 5 7\n"), ValidationError);
  CHECK_THROWS_AS(parse(kMinimal + "point 7 1 1 1\n"), ValidationError);
  CHECK_THROWS_AS(parse(kMinimal + "observe 0 7\n"), ValidationError);  // listed twice
  CHECK_THROWS_AS(parse("SEMMAP_SLAM 1\nkeyframe 0 0 0 0 0\npose 0 1 0 0 0 1 0 0 0 0 0 0 0\n"),
                  ValidationError);  // rank 2
  CHECK_THROWS_AS(parse("SEMMAP_SLAM 1\nkeyframe 0 0 0 0 4\npose 0 1 0 0 0 0 1 0 0 0 0 1 0\n"),
                  ValidationError);  // heading out of range
}

TEST_CASE("generated bundles round trip") {
  for (auto shape : {TrajectoryShape::straight, TrajectoryShape::l_shape, TrajectoryShape::figure_eight}) {
    WorldSpec spec;
    spec.shape = shape;
    spec.n_points = 60;
    spec.n_frames = 61;
    spec.image_width = 32;
    spec.image_height = 24;
    const auto world = generate_world(spec);
    std::ostringstream out;
    write_slam_export(out, world.bundle.slam);
    CHECK(parse(out.str()) == world.bundle.slam);
  }
}

TEST_CASE("mutated exports are rejected with a diagnostic or parse to a valid export") {
  WorldSpec spec;
  spec.n_points = 10;
  spec.n_frames = 6;
  spec.image_width = 16;
  spec.image_height = 12;
  std::ostringstream out;
  write_slam_export(out, generate_world(spec).bundle.slam);
  const std::string good = out.str();
  std::mt19937_64 rng(71);
  const std::string alphabet = "0123456789 .-e\nxk#";
  int rejected = 0;
  for (int t = 0; t < 3000; ++t) {
    auto text = good;
    for (int e = 0; e < 1 + t % 4; ++e) text[rng() % text.size()] = alphabet[rng() % alphabet.size()];
    try {
      parse(text).validate();
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).rfind("slam.txt:", 0) == 0);
      ++rejected;
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).rfind("slam.txt", 0) == 0);
      ++rejected;
    }
  }
  CHECK(rejected > 1000);
}
