#pragma once

#include "semmap/semantic_map.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace semmap {

struct MapPointRecord {
  PointId id = 0;
  Vec3 position = Vec3::Zero();

  friend bool operator==(const MapPointRecord&, const MapPointRecord&) = default;
};

/// What the external SLAM system hands over: keyframes with projection
/// matrices, triangulated points and which points each keyframe observed.
struct SlamExport {
  std::vector<KeyframeRecord> keyframes;
  std::vector<MapPointRecord> points;
  std::map<FrameId, std::vector<PointId>> visibility;

  /// Checks ordering, id uniqueness, matrix rank and visibility references.
  /// Throws ValidationError.
  void validate() const;

  /// SemanticMap with uniform beliefs for every point.
  SemanticMap to_semantic_map() const;

  friend bool operator==(const SlamExport&, const SlamExport&) = default;
};

// Line-oriented text format, '#' starts a comment:
//
//   SEMMAP_SLAM 1
//   keyframe <frame_id> <x> <y> <z> <heading>
//   pose <frame_id> <m00> <m01> <m02> <m03> <m10> ... <m23>
//   point <id> <x> <y> <z>
//   observe <frame_id> <point_id>...
//
// Every keyframe needs exactly one pose line (the 3x4 camera matrix, row
// major) after its keyframe line.

SlamExport read_slam_export(std::istream& in, const std::string& source = "<stream>");
SlamExport read_slam_export(const std::filesystem::path& path);

void write_slam_export(std::ostream& out, const SlamExport& slam);
void write_slam_export(const std::filesystem::path& path, const SlamExport& slam);

}  // namespace semmap
