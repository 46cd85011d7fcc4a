#include "semmap/landmarks.hpp"

#include "semmap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace semmap {

std::vector<Landmark> place_landmarks(std::span<const Landmark> landmarks, const SimilarityTransform& t,
                                      const LocalTangentOrigin& origin) {
  std::vector<Landmark> placed(landmarks.begin(), landmarks.end());
  for (auto& lm : placed) lm.map_position = apply_transform(t, wgs84_to_local(lm.geo, origin));
  return placed;
}

double membership(const Landmark& landmark, double x, double y) {
  const double dx = x - landmark.map_position.x();
  const double dy = y - landmark.map_position.y();
  const double var = landmark.sigma * landmark.sigma;
  return std::exp(-(dx * dx + dy * dy) / (2.0 * var)) / (2.0 * std::numbers::pi * var);
}

std::vector<LandmarkAssociation> associate_landmarks(std::span<const Landmark> landmarks,
                                                     std::span<const KeyframeRecord> keyframes) {
  if (keyframes.empty()) throw InvalidArgumentError("cannot associate landmarks without keyframes");

  std::vector<LandmarkAssociation> out;
  out.reserve(landmarks.size());
  for (const auto& lm : landmarks) {
    const KeyframeRecord* best = nullptr;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (const auto& kf : keyframes) {
      const double d2 = (kf.position.head<2>() - lm.map_position.head<2>()).squaredNorm();
      if (d2 < best_d2 || (d2 == best_d2 && best != nullptr && kf.frame_id < best->frame_id)) {
        best = &kf;
        best_d2 = d2;
      }
    }
    out.push_back({lm.name, best->frame_id, std::sqrt(best_d2)});
  }
  return out;
}

std::vector<RankedLandmark> rank_landmarks(std::span<const Landmark> landmarks, double x, double y,
                                           std::size_t k) {
  if (k == 0) throw InvalidArgumentError("k must be >= 1");
  std::vector<RankedLandmark> ranked;
  ranked.reserve(landmarks.size());
  for (const auto& lm : landmarks) ranked.push_back({lm.name, membership(lm, x, y)});

  auto by_membership = [](const RankedLandmark& a, const RankedLandmark& b) {
    if (a.membership != b.membership) return a.membership > b.membership;
    return a.name < b.name;
  };
  const std::size_t keep = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                    by_membership);
  ranked.resize(keep);
  return ranked;
}

}  // namespace semmap
