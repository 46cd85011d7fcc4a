#include "semmap/projection.hpp"

#include "semmap/errors.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <string>

namespace semmap {

ScoreRaster::ScoreRaster(std::size_t height, std::size_t width)
    : height_(height), width_(width), scores_(height * width * kNumLabels, 0.0f) {}

ScoreRaster::ScoreRaster(std::size_t height, std::size_t width, std::vector<float> scores)
    : height_(height), width_(width), scores_(std::move(scores)) {
  if (scores_.size() != height_ * width_ * kNumLabels)
    throw InvalidArgumentError("raster data has " + std::to_string(scores_.size()) +
                               " values, expected " + std::to_string(height_ * width_ * kNumLabels));
  for (float s : scores_)
    if (!std::isfinite(s) || s < 0.0f) throw InvalidArgumentError("raster score is negative or non-finite");
}

std::span<const float> ScoreRaster::pixel(std::size_t row, std::size_t col) const {
  return {scores_.data() + (row * width_ + col) * kNumLabels, kNumLabels};
}

std::span<float> ScoreRaster::pixel(std::size_t row, std::size_t col) {
  return {scores_.data() + (row * width_ + col) * kNumLabels, kNumLabels};
}

std::optional<PixelCoord> project_point(const Vec3& position, const CameraMatrix& camera_matrix) {
  const Eigen::Vector3d uvw = camera_matrix * position.homogeneous();
  if (!(uvw.z() > kMinProjectiveDepth)) return std::nullopt;
  PixelCoord px{uvw.x() / uvw.z(), uvw.y() / uvw.z()};
  if (!std::isfinite(px.u) || !std::isfinite(px.v)) return std::nullopt;
  return px;
}

std::optional<LabelDistribution> sample_scores(const ScoreRaster& raster, const PixelCoord& pixel) {
  if (!std::isfinite(pixel.u) || !std::isfinite(pixel.v)) return std::nullopt;
  // std::round is half-away-from-zero.
  const double col = std::round(pixel.u);
  const double row = std::round(pixel.v);
  if (col < 0.0 || row < 0.0 || col >= static_cast<double>(raster.width()) ||
      row >= static_cast<double>(raster.height()))
    return std::nullopt;
  auto scores = raster.pixel(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
  try {
    return LabelDistribution::from_scores(scores);
  } catch (const DegenerateDistributionError&) {
    throw DegenerateDistributionError("all-zero score vector at pixel (" +
                                      std::to_string(static_cast<long long>(col)) + ", " +
                                      std::to_string(static_cast<long long>(row)) + ")");
  }
}

FusionReport& FusionReport::operator+=(const FusionReport& other) {
  updated += other.updated;
  rejected_projection += other.rejected_projection;
  rejected_bounds += other.rejected_bounds;
  return *this;
}

FusionReport fuse_frame(SemanticMap& map, const KeyframeRecord& frame, const ScoreRaster& raster,
                        std::span<const PointId> visible_point_ids) {
  for (PointId id : visible_point_ids)
    if (!map.contains(id))
      throw LookupError("frame " + std::to_string(frame.frame_id) + " references unknown point id " +
                        std::to_string(id));

  FusionReport report;
  for (PointId id : visible_point_ids) {
    SemanticMapPoint& point = map.point(id);
    const auto pixel = project_point(point.position, frame.camera_matrix);
    if (!pixel) {
      ++report.rejected_projection;
      continue;
    }
    const auto observation = sample_scores(raster, *pixel);
    if (!observation) {
      ++report.rejected_bounds;
      continue;
    }
    point.belief = bayes_update(point.belief, *observation);
    ++point.observation_count;
    ++report.updated;
  }
  return report;
}

}  // namespace semmap
