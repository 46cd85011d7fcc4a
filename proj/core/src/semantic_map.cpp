#include "semmap/semantic_map.hpp"

#include "semmap/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <string>

namespace semmap {

bool has_full_rank(const CameraMatrix& m) {
  if (!m.allFinite()) return false;
  const Eigen::JacobiSVD<CameraMatrix> svd(m);
  const auto& s = svd.singularValues();
  return s(0) > 0.0 && s(2) > 1e-12 * s(0);
}

double wrap_angle(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(radians, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

SemanticMapPoint& SemanticMap::add_point(PointId id, const Vec3& position) {
  auto [it, inserted] = points_.try_emplace(id);
  if (!inserted) throw ValidationError("duplicate point id " + std::to_string(id));
  it->second.id = id;
  it->second.position = position;
  return it->second;
}

void SemanticMap::add_keyframe(const KeyframeRecord& keyframe) {
  if (!keyframes_.empty() && keyframe.frame_id <= keyframes_.back().frame_id)
    throw ValidationError("keyframe " + std::to_string(keyframe.frame_id) +
                          " is not after frame " + std::to_string(keyframes_.back().frame_id));
  keyframes_.push_back(keyframe);
}

const SemanticMapPoint& SemanticMap::point(PointId id) const {
  auto it = points_.find(id);
  if (it == points_.end()) throw LookupError("unknown point id " + std::to_string(id));
  return it->second;
}

SemanticMapPoint& SemanticMap::point(PointId id) {
  auto it = points_.find(id);
  if (it == points_.end()) throw LookupError("unknown point id " + std::to_string(id));
  return it->second;
}

}  // namespace semmap
