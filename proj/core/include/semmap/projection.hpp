#pragma once

#include "semmap/label_distribution.hpp"
#include "semmap/semantic_map.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace semmap {

/// Points with homogeneous depth at or below this are treated as behind the camera.
inline constexpr double kMinProjectiveDepth = 1e-6;

/// Per-frame class scores, row-major and channel-last.
class ScoreRaster {
 public:
  ScoreRaster() = default;
  /// Zero-filled raster.
  ScoreRaster(std::size_t height, std::size_t width);
  /// Takes ownership of `scores`; throws InvalidArgumentError on a size
  /// mismatch or a negative / non-finite entry.
  ScoreRaster(std::size_t height, std::size_t width, std::vector<float> scores);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  static constexpr std::size_t channels() { return kNumLabels; }

  std::span<const float> pixel(std::size_t row, std::size_t col) const;
  std::span<float> pixel(std::size_t row, std::size_t col);

  const std::vector<float>& data() const { return scores_; }

  friend bool operator==(const ScoreRaster&, const ScoreRaster&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<float> scores_;
};

struct PixelCoord {
  double u = 0.0;  // column
  double v = 0.0;  // row
};

/// Pinhole projection through a 3x4 composite camera matrix. Empty when the
/// point is behind the camera or on the near plane.
std::optional<PixelCoord> project_point(const Vec3& position, const CameraMatrix& camera_matrix);

/// Nearest-pixel lookup (round half away from zero), normalized to a
/// distribution. Empty when the pixel falls outside the raster. Throws
/// DegenerateDistributionError when every channel at the pixel is zero.
std::optional<LabelDistribution> sample_scores(const ScoreRaster& raster, const PixelCoord& pixel);

struct FusionReport {
  std::size_t updated = 0;
  std::size_t rejected_projection = 0;
  std::size_t rejected_bounds = 0;

  std::size_t total() const { return updated + rejected_projection + rejected_bounds; }

  FusionReport& operator+=(const FusionReport& other);
  friend bool operator==(const FusionReport&, const FusionReport&) = default;
};

/// Fuses one frame's raster into the listed points.
///
/// Every id is checked before any point is touched, so a LookupError leaves
/// the map unchanged. Positions are never modified.
FusionReport fuse_frame(SemanticMap& map, const KeyframeRecord& frame, const ScoreRaster& raster,
                        std::span<const PointId> visible_point_ids);

}  // namespace semmap
