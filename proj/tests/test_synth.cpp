#include <doctest.h>

#include "oracles.hpp"
#include "semmap/errors.hpp"
#include "semmap/pipeline.hpp"
#include "semmap/raster_io.hpp"
#include "semmap/slam_export.hpp"
#include "semmap/synth.hpp"
#include "semmap/text_io.hpp"

#include <json.hpp>

#include <random>
#include <sstream>

using namespace semmap;

namespace {

WorldSpec small_spec() {
  WorldSpec spec;
  spec.n_points = 40;
  spec.n_frames = 41;
  spec.image_width = 32;
  spec.image_height = 24;
  return spec;
}

}  // namespace

TEST_CASE("rng transforms") {
  SynthRng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

  SynthRng r(9);
  double sum = 0.0, sq = 0.0, gsum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE((u > 0.0 && u < 1.0));
    const double z = r.normal();
    sum += z;
    sq += z * z;
    gsum += r.gamma(0.7);
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(gsum / n == doctest::Approx(0.7).epsilon(0.02));
  for (int i = 0; i < 1000; ++i) REQUIRE(r.index(7) < 7);
  CHECK_THROWS_AS(r.index(0), InvalidArgumentError);
}

TEST_CASE("shape names") {
  for (auto s : {TrajectoryShape::straight, TrajectoryShape::l_shape, TrajectoryShape::loop,
                 TrajectoryShape::figure_eight})
    CHECK(trajectory_shape_from_string(to_string(s)) == s);
  CHECK_FALSE(trajectory_shape_from_string("zigzag"));
}

TEST_CASE("spec validation") {
  auto spec = small_spec();
  spec.label_margin = 0.0;
  CHECK_THROWS_AS(generate_world(spec), InvalidArgumentError);
  spec = small_spec();
  spec.n_points = 0;
  CHECK_THROWS_AS(generate_world(spec), InvalidArgumentError);
  spec = small_spec();
  spec.true_transform.scale = -1.0;
  CHECK_THROWS_AS(generate_world(spec), InvalidArgumentError);
}

TEST_CASE("same seed gives byte-identical bundles") {
  const auto spec = small_spec();
  const auto d1 = semmap::testing::scratch_dir("synth_a");
  const auto d2 = semmap::testing::scratch_dir("synth_b");
  write_world(generate_world(spec), d1);
  write_world(generate_world(spec), d2);
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(d1)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), d1);
    REQUIRE(std::filesystem::exists(d2 / rel));
    CHECK(semmap::testing::slurp(entry.path()) == semmap::testing::slurp(d2 / rel));
    ++files;
  }
  CHECK(files == 5 + spec.n_frames);

  auto other = spec;
  other.seed = 2;
  const auto w1 = generate_world(spec);
  const auto w2 = generate_world(other);
  CHECK_FALSE(w1.bundle.rasters.at(0) == w2.bundle.rasters.at(0));
}

TEST_CASE("written bundle loads back unchanged") {
  const auto world = generate_world(small_spec());
  const auto dir = semmap::testing::scratch_dir("synth_roundtrip");
  write_world(world, dir);
  CHECK(read_slam_export(dir / "slam.txt") == world.bundle.slam);
  CHECK(read_gps_csv(dir / "gps.csv") == world.bundle.fixes);
  CHECK(read_landmark_csv(dir / "landmarks.csv") == world.bundle.landmarks);
  for (const auto& [frame, raster] : world.bundle.rasters) CHECK(read_raster(raster_path(dir / "rasters", frame)) == raster);

  const auto cfg = load_pipeline_config(dir / "pipeline.json");
  CHECK(cfg.slam == dir / "slam.txt");
  CHECK(cfg.rasters == dir / "rasters");
  CHECK(cfg.allow_partial);

  const auto truth = nlohmann::json::parse(semmap::testing::slurp(dir / "ground_truth.json"));
  CHECK(truth["generator_version"] == kGeneratorVersion);
  CHECK(truth["labels"].size() == world.truth.labels.size());
}

TEST_CASE("generated rasters are valid and visibility is consistent") {
  for (auto shape : {TrajectoryShape::straight, TrajectoryShape::l_shape, TrajectoryShape::loop}) {
    auto spec = small_spec();
    spec.shape = shape;
    const auto w = generate_world(spec);
    CHECK_NOTHROW(w.bundle.slam.validate());
    CHECK(w.bundle.rasters.size() == spec.n_frames);
    for (const auto& [frame, r] : w.bundle.rasters) {
      CHECK(r.height() == spec.image_height);
      CHECK(r.width() == spec.image_width);
      for (float v : r.data()) REQUIRE((std::isfinite(v) && v >= 0.0f));
    }
    // Every visible point projects inside its frame.
    for (const auto& [frame, ids] : w.bundle.slam.visibility) {
      const auto& kf = w.bundle.slam.keyframes.at(static_cast<std::size_t>(frame));
      for (PointId id : ids) {
        const auto px = project_point(w.bundle.slam.points.at(static_cast<std::size_t>(id)).position, kf.camera_matrix);
        REQUIRE(px);
        CHECK(sample_scores(w.bundle.rasters.at(frame), *px));
      }
    }
  }
}

TEST_CASE("unit margin gives one-hot rasters and one-frame convergence") {
  auto spec = small_spec();
  spec.label_margin = 1.0;
  const auto w = generate_world(spec);
  for (const auto& [frame, r] : w.bundle.rasters) {
    for (std::size_t i = 0; i < r.data().size(); i += kNumLabels) {
      int ones = 0, zeros = 0;
      for (std::size_t c = 0; c < kNumLabels; ++c) {
        ones += r.data()[i + c] == 1.0f;
        zeros += r.data()[i + c] == 0.0f;
      }
      REQUIRE(ones == 1);
      REQUIRE(zeros == 18);
    }
  }
  for (const auto& [frame, ids] : w.bundle.slam.visibility) {
    SemanticMap map = w.bundle.slam.to_semantic_map();
    fuse_frame(map, w.bundle.slam.keyframes.at(static_cast<std::size_t>(frame)), w.bundle.rasters.at(frame), ids);
    for (PointId id : ids) CHECK(map.point(id).label() == w.truth.labels.at(id));
  }
}

TEST_CASE("trajectory ground truth") {
  auto spec = small_spec();
  spec.shape = TrajectoryShape::l_shape;
  auto w = generate_world(spec);
  CHECK(w.truth.turn_frames.size() == 1);
  CHECK(w.truth.turn_locations == 1);
  CHECK(w.truth.junctions == 0);

  spec.shape = TrajectoryShape::straight;
  CHECK(generate_world(spec).truth.turn_frames.empty());

  spec.shape = TrajectoryShape::figure_eight;
  spec.n_frames = 171;
  w = generate_world(spec);
  CHECK(w.truth.turn_frames.size() == 8);
  CHECK(w.truth.turn_locations == 7);
  CHECK(w.truth.junctions == 1);
}

TEST_CASE("oracle_fuse") {
  std::mt19937_64 rng(91);
  const auto o = LabelDistribution::from_scores(std::span<const double>(semmap::testing::random_simplex(rng)));
  const std::vector<LabelDistribution> one{o};
  CHECK(semmap::testing::linf(oracle_fuse(one, LabelDistribution::uniform()), clamp_observation(o)) < 1e-15);

  std::vector<LabelDistribution> seq;
  for (int i = 0; i < 30; ++i)
    seq.push_back(LabelDistribution::from_scores(std::span<const double>(semmap::testing::random_simplex(rng, 0.3))));
  const auto prior = LabelDistribution::from_scores(std::span<const double>(semmap::testing::random_simplex(rng)));
  const auto a = oracle_fuse(seq, prior);
  for (int t = 0; t < 20; ++t) {
    std::shuffle(seq.begin(), seq.end(), rng);
    CHECK(semmap::testing::linf(oracle_fuse(seq, prior), a) < 1e-15);
  }
  std::vector<std::array<double, kNumLabels>> raw;
  for (const auto& d : seq) raw.push_back(d.probs());
  const auto brute = semmap::testing::brute_force_product(raw, prior.probs());
  for (std::size_t i = 0; i < kNumLabels; ++i) CHECK(std::abs(a[i] - brute[i]) < 1e-12);
}
