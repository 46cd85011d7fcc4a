#pragma once

#include "semmap/landmarks.hpp"
#include "semmap/semantic_map.hpp"

#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semmap {

using NodeId = std::int64_t;

enum class NodeKind { landmark, turn };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view s);

struct TopoNode {
  NodeId node_id = 0;
  NodeKind kind = NodeKind::turn;
  Vec3 position = Vec3::Zero();
  std::vector<std::string> landmark_names;  // sorted, non-empty iff kind == landmark
  std::vector<FrameId> source_frame_ids;    // sorted, non-empty

  friend bool operator==(const TopoNode&, const TopoNode&) = default;
};

/// Undirected edge stored with `a < b`.
struct TopoEdge {
  NodeId a = 0;
  NodeId b = 0;
  double length = 0.0;

  friend bool operator==(const TopoEdge&, const TopoEdge&) = default;
};

struct TopoGraph {
  std::vector<TopoNode> nodes;  // ascending node_id
  std::vector<TopoEdge> edges;  // ascending (a, b)

  bool empty() const { return nodes.empty(); }
  const TopoNode* find(NodeId id) const;

  /// Checks node/edge invariants; throws ValidationError describing the first violation.
  void validate() const;

  friend bool operator==(const TopoGraph&, const TopoGraph&) = default;
};

struct TurnDetectionParams {
  double angle_threshold = std::numbers::pi / 6.0;
  int window = 5;
};

inline constexpr double kDefaultMergeRadius = 5.0;

/// Keyframes where the summed absolute heading change over the trailing
/// `window` keyframes reaches the threshold. Detections starting within one
/// window of each other form a single turn, reported at the keyframe with
/// the largest single-step heading change (earliest on ties).
std::vector<FrameId> detect_turns(std::span<const KeyframeRecord> keyframes,
                                  const TurnDetectionParams& params = {});

/// One node per landmark-associated keyframe and per turn keyframe, in
/// trajectory order, chained by edges whose length is the arc length of the
/// keyframe path between them.
TopoGraph build_topo(std::span<const KeyframeRecord> keyframes,
                     std::span<const LandmarkAssociation> associations, std::span<const FrameId> turns);

/// Merges same-kind nodes closer than `merge_radius`, repeating greedy passes
/// in ascending node id until nothing merges. A merged node keeps the lowest
/// id and sits at the mean of its original members.
TopoGraph fuse_revisits(const TopoGraph& graph, double merge_radius = kDefaultMergeRadius);

}  // namespace semmap
