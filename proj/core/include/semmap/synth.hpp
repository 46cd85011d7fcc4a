#pragma once

#include "semmap/geo.hpp"
#include "semmap/landmarks.hpp"
#include "semmap/pipeline.hpp"
#include "semmap/projection.hpp"
#include "semmap/similarity.hpp"
#include "semmap/slam_export.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace semmap {

/// Bumped whenever the generator consumes random numbers differently. Frozen
/// expected values in tests are only valid for the version they were taken with.
inline constexpr int kGeneratorVersion = 1;

/// Platform-independent random source for synthetic worlds.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// implements its own transforms instead of the std distributions, whose
/// algorithms are implementation-defined:
///   uniform: ((x >> 11) + 0.5) * 2^-53, in (0, 1)
///   normal:  Box-Muller, second variate cached
///   gamma:   Marsaglia-Tsang; shape < 1 via gamma(shape + 1) * u^(1/shape)
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double gamma(double shape);
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

enum class TrajectoryShape { straight, l_shape, loop, figure_eight };

std::string_view to_string(TrajectoryShape shape);
std::optional<TrajectoryShape> trajectory_shape_from_string(std::string_view s);

/// Yaw-only rotation with unit scale; the map xy-plane stays the ground plane.
SimilarityTransform default_true_transform();

struct WorldSpec {
  std::uint64_t seed = 1;
  std::size_t n_points = 200;
  std::size_t n_frames = 121;
  TrajectoryShape shape = TrajectoryShape::l_shape;
  double label_margin = 0.5;  // expected true-label score lead over every other class, (0, 1]
  double gps_noise = 0.5;     // meters, per horizontal axis
  SimilarityTransform true_transform = default_true_transform();  // local tangent -> map
  std::size_t n_landmarks = 4;
  double step = 1.0;  // meters between keyframes
  std::size_t image_width = 64;
  std::size_t image_height = 48;
  double concentration = 10.0;  // Dirichlet concentration of raster noise
  LocalTangentOrigin geo_origin{49.0110, 8.4140, 0.0};

  /// Throws InvalidArgumentError.
  void validate() const;
};

struct GroundTruth {
  std::map<PointId, LabelIndex> labels;
  std::vector<Landmark> landmarks;  // map_position is the true map-frame position
  std::vector<FrameId> turn_frames;
  std::size_t turn_locations = 0;  // distinct places where the path turns
  std::size_t junctions = 0;       // turn places passed through more than once
  SimilarityTransform transform;
};

struct WorldBundle {
  SlamExport slam;
  std::map<FrameId, ScoreRaster> rasters;
  std::vector<GeoFix> fixes;
  std::vector<Landmark> landmarks;  // gazetteer view: name, geo, sigma

  RasterProvider raster_provider() const;
};

struct World {
  WorldSpec spec;
  WorldBundle bundle;
  GroundTruth truth;
};

/// Deterministic per seed and generator version.
World generate_world(const WorldSpec& spec);

/// Writes slam.txt, rasters/, gps.csv, landmarks.csv, ground_truth.json and a
/// pipeline.json that runs the full pipeline into `out/`.
void write_world(const World& world, const std::filesystem::path& dir);

/// Closed-form fusion: normalized prior * prod(clamped observations),
/// accumulated in extended-precision log space. Independent of bayes_update's
/// sequential path. Throws DegenerateDistributionError if nothing survives.
LabelDistribution oracle_fuse(std::span<const LabelDistribution> observations, const LabelDistribution& prior);

/// RMS distance between the two transforms' images of the probe points.
double oracle_similarity_error(const SimilarityTransform& estimated, const SimilarityTransform& truth,
                               std::span<const Vec3> probes);

}  // namespace semmap
