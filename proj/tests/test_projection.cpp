#include <doctest.h>

#include "oracles.hpp"
#include "semmap/errors.hpp"
#include "semmap/projection.hpp"
#include "semmap/synth.hpp"

#include <random>

using namespace semmap;

namespace {

CameraMatrix identity_camera() {
  CameraMatrix m = CameraMatrix::Zero();
  m.leftCols<3>() = Eigen::Matrix3d::Identity();
  return m;
}

KeyframeRecord identity_frame(FrameId id = 0) {
  KeyframeRecord kf;
  kf.frame_id = id;
  kf.camera_matrix = identity_camera();
  return kf;
}

ScoreRaster uniform_raster(std::size_t h, std::size_t w) {
  return ScoreRaster(h, w, std::vector<float>(h * w * kNumLabels, 0.25f));
}

}  // namespace

TEST_CASE("project_point examples") {
  const auto m = identity_camera();
  auto p = project_point({0, 0, 1}, m);
  REQUIRE(p);
  CHECK(p->u == 0.0);
  CHECK(p->v == 0.0);
  p = project_point({2, 3, 2}, m);
  REQUIRE(p);
  CHECK(p->u == 1.0);
  CHECK(p->v == 1.5);
  CHECK_FALSE(project_point({1, 1, -1}, m));
  CHECK_FALSE(project_point({1, 1, 0}, m));
  CHECK_FALSE(project_point({1, 1, 1e-7}, m));
}

TEST_CASE("projection ignores a positive rescaling of the matrix") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  int compared = 0;
  for (int t = 0; t < 5000; ++t) {
    CameraMatrix m;
    for (int i = 0; i < 12; ++i) m(i / 4, i % 4) = u(rng);
    const Vec3 x(u(rng), u(rng), u(rng));
    const double c = scale(rng);
    const auto a = project_point(x, m);
    const auto b = project_point(x, c * m);
    // Points near the depth cutoff can flip sides under rounding; skip them.
    const double w = m.row(2).head<3>().dot(x) + m(2, 3);
    if (std::abs(w) < 1e-3) continue;
    REQUIRE(a.has_value() == b.has_value());
    if (a) {
      CHECK(b->u == doctest::Approx(a->u).epsilon(1e-9));
      CHECK(b->v == doctest::Approx(a->v).epsilon(1e-9));
      ++compared;
    }
  }
  CHECK(compared > 1000);
}

TEST_CASE("sample_scores") {
  ScoreRaster r(30, 40);
  for (std::size_t i = 0; i < kNumLabels; ++i) r.pixel(20, 10)[i] = static_cast<float>(i + 1);
  for (std::size_t row = 0; row < 30; ++row)
    for (std::size_t col = 0; col < 40; ++col)
      if (!(row == 20 && col == 10)) r.pixel(row, col)[0] = 1.0f;

  // u is the column, v the row.
  const auto d = sample_scores(r, {10.0, 20.0});
  REQUIRE(d);
  const double total = 19.0 * 20.0 / 2.0;
  for (std::size_t i = 0; i < kNumLabels; ++i) CHECK((*d)[i] == doctest::Approx((i + 1) / total));

  CHECK_FALSE(sample_scores(r, {-0.6, 5.0}));
  CHECK_FALSE(sample_scores(r, {5.0, 29.5}));
  CHECK_FALSE(sample_scores(r, {39.5, 5.0}));
  CHECK(sample_scores(r, {-0.4, 5.0}));
  CHECK(sample_scores(r, {39.49, 29.49}));
  // Rounds half away from zero.
  CHECK(sample_scores(r, {9.5, 20.0})->probs() == d->probs());

  const auto uni = sample_scores(uniform_raster(4, 4), {2.2, 1.7});
  REQUIRE(uni);
  CHECK(semmap::testing::linf(*uni, LabelDistribution::uniform()) < 1e-15);

  ScoreRaster zeros(2, 2);
  CHECK_THROWS_AS(sample_scores(zeros, {1, 1}), DegenerateDistributionError);
}

TEST_CASE("ScoreRaster construction checks") {
  CHECK_THROWS_AS(ScoreRaster(2, 2, std::vector<float>(3)), InvalidArgumentError);
  std::vector<float> neg(2 * 2 * kNumLabels, 0.0f);
  neg[7] = -0.1f;
  CHECK_THROWS_AS(ScoreRaster(2, 2, neg), InvalidArgumentError);
  neg[7] = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS(ScoreRaster(2, 2, neg), InvalidArgumentError);
}

TEST_CASE("fuse_frame basics") {
  SemanticMap map;
  map.add_point(1, {0.5, 0.5, 1.0});
  map.add_point(2, {1, 1, -1});
  map.add_point(3, {50, 50, 1});
  const auto frame = identity_frame();

  SUBCASE("empty id list") {
    const auto before = map.points();
    const auto rep = fuse_frame(map, frame, uniform_raster(4, 4), {});
    CHECK(rep == FusionReport{});
    CHECK(map.points() == before);
  }
  SUBCASE("uniform raster leaves the belief alone") {
    const std::vector<PointId> ids{1};
    const auto rep = fuse_frame(map, frame, uniform_raster(4, 4), ids);
    CHECK(rep.updated == 1);
    CHECK(semmap::testing::linf(map.point(1).belief, LabelDistribution::uniform()) < 1e-15);
    CHECK(map.point(1).observation_count == 1);
  }
  SUBCASE("counts partition the id list") {
    const std::vector<PointId> ids{1, 2, 3, 1};
    const auto rep = fuse_frame(map, frame, uniform_raster(4, 4), ids);
    CHECK(rep.updated == 2);
    CHECK(rep.rejected_projection == 1);
    CHECK(rep.rejected_bounds == 1);
    CHECK(rep.total() == ids.size());
  }
  SUBCASE("unknown id fails before anything changes") {
    ScoreRaster r(4, 4);
    for (std::size_t row = 0; row < 4; ++row)
      for (std::size_t col = 0; col < 4; ++col) r.pixel(row, col)[5] = 1.0f;
    const auto before = map.points();
    const std::vector<PointId> ids{1, 99};
    CHECK_THROWS_AS(fuse_frame(map, frame, r, ids), LookupError);
    CHECK(map.points() == before);
  }
}

TEST_CASE("fuse_frame never moves points and is independent of point order") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> depth(0.5, 6.0);
  for (int trial = 0; trial < 20; ++trial) {
    SemanticMap a;
    SemanticMap b;
    std::vector<PointId> ids;
    for (PointId id = 0; id < 40; ++id) {
      const Vec3 p(u(rng), u(rng), trial % 2 ? depth(rng) : u(rng));
      a.add_point(id, p);
      b.add_point(id, p);
      ids.push_back(id);
    }
    for (int f = 0; f < 5; ++f) {
      KeyframeRecord kf = identity_frame(f);
      kf.camera_matrix(0, 2) = 4.0;  // principal point at (4, 4)
      kf.camera_matrix(1, 2) = 4.0;
      std::vector<float> scores(8 * 8 * kNumLabels);
      for (auto& s : scores) s = static_cast<float>(depth(rng));
      const ScoreRaster r(8, 8, scores);
      auto shuffled = ids;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      const auto ra = fuse_frame(a, kf, r, ids);
      const auto rb = fuse_frame(b, kf, r, shuffled);
      CHECK(ra == rb);
      CHECK(ra.total() == ids.size());
    }
    for (const auto& [id, p] : a.points()) {
      CHECK(p == b.point(id));
    }
  }
}

TEST_CASE("noisy single-point fusion converges on the true label") {
  // One point straight ahead of an identity camera; each frame is a 1x1
  // raster drawn around label 3 with a margin of 0.1.
  const LabelIndex truth = 3;
  const double margin = 0.1;
  const double concentration = 10.0;
  int correct = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    SynthRng rng(1000 + static_cast<std::uint64_t>(trial));
    SemanticMap map;
    map.add_point(0, {0, 0, 1});
    const std::vector<PointId> ids{0};
    for (int f = 0; f < 40; ++f) {
      std::vector<float> s(kNumLabels);
      double total = 0.0;
      std::array<double, kNumLabels> g{};
      for (std::size_t i = 0; i < kNumLabels; ++i) {
        const double mu = (1.0 - margin) / kNumLabels + (i == truth ? margin : 0.0);
        g[i] = rng.gamma(concentration * mu);
        total += g[i];
      }
      for (std::size_t i = 0; i < kNumLabels; ++i) s[i] = static_cast<float>(g[i] / total);
      fuse_frame(map, identity_frame(f), ScoreRaster(1, 1, s), ids);
    }
    if (map.point(0).label() == truth) ++correct;
  }
  CHECK(correct >= 990);
}
