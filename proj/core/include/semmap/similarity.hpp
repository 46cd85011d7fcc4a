#pragma once

#include "semmap/geo.hpp"
#include "semmap/semantic_map.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace semmap {

/// Default GPS sampling stride in frames.
inline constexpr int kDefaultAnchorStride = 30;

/// Paired correspondences: `cart_points[i]` (local tangent meters) matches
/// `map_points[i]` (SLAM map frame).
struct AnchorSet {
  std::vector<Vec3> cart_points;
  std::vector<Vec3> map_points;
  std::vector<FrameId> frame_ids;
  LocalTangentOrigin origin;

  std::size_t size() const { return cart_points.size(); }
};

/// x -> scale * rotation * x + translation, with `rotation` a proper rotation.
struct SimilarityTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  double scale = 1.0;
  Vec3 translation = Vec3::Zero();

  static SimilarityTransform identity() { return {}; }

  /// Checks orthonormality and det = +1 within `tol`, and scale > 0.
  bool is_valid(double tol = 1e-9) const;

  /// Algebraic inverse built from the fields.
  SimilarityTransform inverse() const;

  friend bool operator==(const SimilarityTransform&, const SimilarityTransform&) = default;
};

struct SimilarityEstimate {
  SimilarityTransform transform;
  double rmse = 0.0;
};

/// Picks frames 0, stride, 2*stride, ... that have both a keyframe and a fix.
/// The first selected fix becomes the local tangent origin. Throws
/// InsufficientAnchorsError when fewer than three pairs are found.
AnchorSet sample_anchors(std::span<const KeyframeRecord> keyframes, std::span<const GeoFix> fixes,
                         int stride = kDefaultAnchorStride);

/// Least-squares rotation from the SVD of the cross-covariance, with a
/// reflection guard, and scale from the mean ratio of centered norms.
///
/// Throws DegenerateGeometryError when the centered points span fewer than
/// two dimensions, and ZeroScaleError when every map-side norm is zero.
SimilarityEstimate estimate_similarity(const AnchorSet& anchors);

Vec3 apply_transform(const SimilarityTransform& t, const Vec3& point);

}  // namespace semmap
