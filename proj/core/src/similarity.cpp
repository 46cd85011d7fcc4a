#include "semmap/similarity.hpp"

#include "semmap/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <string>
#include <unordered_map>

namespace semmap {

namespace {

constexpr double kRankTolerance = 1e-9;
constexpr double kMinNorm = 1e-9;

}  // namespace

bool SimilarityTransform::is_valid(double tol) const {
  if (!rotation.allFinite() || !translation.allFinite() || !std::isfinite(scale)) return false;
  if (!(scale > 0.0)) return false;
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(rotation.determinant() - 1.0) <= tol;
}

SimilarityTransform SimilarityTransform::inverse() const {
  SimilarityTransform inv;
  inv.rotation = rotation.transpose();
  inv.scale = 1.0 / scale;
  inv.translation = -inv.scale * (inv.rotation * translation);
  return inv;
}

AnchorSet sample_anchors(std::span<const KeyframeRecord> keyframes, std::span<const GeoFix> fixes,
                         int stride) {
  if (stride < 1) throw InvalidArgumentError("anchor stride must be >= 1");

  std::unordered_map<FrameId, const GeoFix*> fix_by_frame;
  for (const auto& fix : fixes) fix_by_frame.emplace(fix.frame_id, &fix);

  AnchorSet anchors;
  std::vector<const GeoFix*> selected;
  for (const auto& kf : keyframes) {
    if (kf.frame_id < 0 || kf.frame_id % stride != 0) continue;
    auto it = fix_by_frame.find(kf.frame_id);
    if (it == fix_by_frame.end()) continue;
    selected.push_back(it->second);
    anchors.map_points.push_back(kf.position);
    anchors.frame_ids.push_back(kf.frame_id);
  }
  if (selected.size() < 3)
    throw InsufficientAnchorsError("found " + std::to_string(selected.size()) +
                                   " anchor pairs at stride " + std::to_string(stride) + ", need 3");

  anchors.origin = LocalTangentOrigin::from_fix(*selected.front());
  anchors.cart_points.reserve(selected.size());
  for (const GeoFix* fix : selected) anchors.cart_points.push_back(wgs84_to_local(*fix, anchors.origin));
  return anchors;
}

SimilarityEstimate estimate_similarity(const AnchorSet& anchors) {
  const std::size_t n = anchors.cart_points.size();
  if (n != anchors.map_points.size())
    throw InvalidArgumentError("anchor sets have different lengths");
  if (n < 3) throw InsufficientAnchorsError("need at least 3 anchor pairs, got " + std::to_string(n));

  Vec3 centroid_a = Vec3::Zero();
  Vec3 centroid_b = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    centroid_a += anchors.cart_points[i];
    centroid_b += anchors.map_points[i];
  }
  centroid_a /= static_cast<double>(n);
  centroid_b /= static_cast<double>(n);

  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < n; ++i)
    h += (anchors.cart_points[i] - centroid_a) * (anchors.map_points[i] - centroid_b).transpose();

  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (!(svd.singularValues()(1) > kRankTolerance))
    throw DegenerateGeometryError("anchor points are collinear or coincident");

  const Eigen::Matrix3d& u = svd.matrixU();
  const Eigen::Matrix3d& v = svd.matrixV();
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;

  SimilarityEstimate est;
  est.transform.rotation = v * d * u.transpose();

  double ratio_sum = 0.0;
  std::size_t ratio_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double denom = (anchors.map_points[i] - centroid_b).norm();
    if (denom < kMinNorm) continue;
    ratio_sum += (anchors.cart_points[i] - centroid_a).norm() / denom;
    ++ratio_count;
  }
  if (ratio_count == 0) throw ZeroScaleError("map-frame anchors are all coincident");
  const double lambda = ratio_sum / static_cast<double>(ratio_count);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ZeroScaleError("scale estimate is zero");

  est.transform.scale = 1.0 / lambda;
  est.transform.translation = centroid_b - est.transform.scale * (est.transform.rotation * centroid_a);

  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    sq += (apply_transform(est.transform, anchors.cart_points[i]) - anchors.map_points[i]).squaredNorm();
  est.rmse = std::sqrt(sq / static_cast<double>(n));
  return est;
}

Vec3 apply_transform(const SimilarityTransform& t, const Vec3& point) {
  return t.scale * (t.rotation * point) + t.translation;
}

}  // namespace semmap
