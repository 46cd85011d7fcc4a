#pragma once

#include "semmap/label_distribution.hpp"
#include "semmap/labels.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <vector>

namespace semmap {

using PointId = std::int64_t;
using FrameId = std::int64_t;

using Vec3 = Eigen::Vector3d;
using CameraMatrix = Eigen::Matrix<double, 3, 4>;

struct SemanticMapPoint {
  PointId id = 0;
  Vec3 position = Vec3::Zero();
  LabelDistribution belief;
  std::uint64_t observation_count = 0;

  LabelIndex label() const { return map_label(belief); }

  friend bool operator==(const SemanticMapPoint&, const SemanticMapPoint&) = default;
};

/// One keyframe of the SLAM trajectory.
///
/// `camera_matrix` is the composite projection (intrinsics times extrinsics)
/// taking homogeneous map-frame points to homogeneous pixels. `heading` is
/// the direction of travel in the map xy-plane, in (-pi, pi].
struct KeyframeRecord {
  FrameId frame_id = 0;
  CameraMatrix camera_matrix = CameraMatrix::Zero();
  Vec3 position = Vec3::Zero();
  double heading = 0.0;

  friend bool operator==(const KeyframeRecord&, const KeyframeRecord&) = default;
};

/// True when the matrix has full row rank (3) up to a relative tolerance.
bool has_full_rank(const CameraMatrix& m);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double radians);

class SemanticMap {
 public:
  SemanticMap() = default;

  /// Adds a point with a uniform belief. Throws ValidationError on duplicate id.
  SemanticMapPoint& add_point(PointId id, const Vec3& position);

  /// Appends a keyframe; frame ids must be strictly increasing.
  void add_keyframe(const KeyframeRecord& keyframe);

  bool contains(PointId id) const { return points_.count(id) != 0; }
  const SemanticMapPoint& point(PointId id) const;
  SemanticMapPoint& point(PointId id);

  const std::map<PointId, SemanticMapPoint>& points() const { return points_; }
  std::map<PointId, SemanticMapPoint>& points() { return points_; }
  const std::vector<KeyframeRecord>& keyframes() const { return keyframes_; }

 private:
  std::map<PointId, SemanticMapPoint> points_;
  std::vector<KeyframeRecord> keyframes_;
};

}  // namespace semmap
