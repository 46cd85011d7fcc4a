#pragma once

#include "semmap/geo.hpp"
#include "semmap/semantic_map.hpp"
#include "semmap/similarity.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace semmap {

/// Membership spread used when the gazetteer does not give one.
inline constexpr double kDefaultLandmarkSigma = 15.0;

struct Landmark {
  std::string name;
  GeoFix geo;  // frame_id unused
  Vec3 map_position = Vec3::Zero();
  double sigma = kDefaultLandmarkSigma;

  friend bool operator==(const Landmark&, const Landmark&) = default;
};

struct LandmarkAssociation {
  std::string landmark;
  FrameId frame_id = 0;
  double distance = 0.0;

  friend bool operator==(const LandmarkAssociation&, const LandmarkAssociation&) = default;
};

struct RankedLandmark {
  std::string name;
  double membership = 0.0;
};

/// Moves every landmark into the map frame through the local tangent plane.
std::vector<Landmark> place_landmarks(std::span<const Landmark> landmarks, const SimilarityTransform& t,
                                      const LocalTangentOrigin& origin);

/// Isotropic 2D Gaussian density centred on the landmark's map xy position.
double membership(const Landmark& landmark, double x, double y);

/// Nearest keyframe in the xy-plane for each landmark; ties go to the lowest
/// frame id. Throws InvalidArgumentError on an empty keyframe list.
std::vector<LandmarkAssociation> associate_landmarks(std::span<const Landmark> landmarks,
                                                     std::span<const KeyframeRecord> keyframes);

/// Top-k landmarks by membership at (x, y), descending; equal memberships
/// are ordered by name. k larger than the list returns everything.
std::vector<RankedLandmark> rank_landmarks(std::span<const Landmark> landmarks, double x, double y,
                                           std::size_t k);

}  // namespace semmap
