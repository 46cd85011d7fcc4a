#include "semmap/topo.hpp"

#include "semmap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <utility>

namespace semmap {

std::string_view to_string(NodeKind kind) { return kind == NodeKind::landmark ? "landmark" : "turn"; }

std::optional<NodeKind> node_kind_from_string(std::string_view s) {
  if (s == "landmark") return NodeKind::landmark;
  if (s == "turn") return NodeKind::turn;
  return std::nullopt;
}

const TopoNode* TopoGraph::find(NodeId id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                             [](const TopoNode& n, NodeId v) { return n.node_id < v; });
  return (it != nodes.end() && it->node_id == id) ? &*it : nullptr;
}

void TopoGraph::validate() const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (i > 0 && nodes[i - 1].node_id >= n.node_id)
      throw ValidationError("topo nodes not strictly ordered by id");
    if ((n.kind == NodeKind::landmark) == n.landmark_names.empty())
      throw ValidationError("node " + std::to_string(n.node_id) + " kind does not match its landmark names");
    if (n.source_frame_ids.empty() || !std::is_sorted(n.source_frame_ids.begin(), n.source_frame_ids.end()))
      throw ValidationError("node " + std::to_string(n.node_id) + " has empty or unsorted source frames");
    if (!n.position.allFinite()) throw ValidationError("node " + std::to_string(n.node_id) + " position");
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& e : edges) {
    if (e.a >= e.b) throw ValidationError("edge endpoints must satisfy a < b (no self-loops)");
    if (!find(e.a) || !find(e.b)) throw ValidationError("edge references a missing node");
    if (!(e.length >= 0.0) || !std::isfinite(e.length)) throw ValidationError("edge length must be >= 0");
    if (!seen.emplace(e.a, e.b).second) throw ValidationError("duplicate edge");
  }
}

std::vector<FrameId> detect_turns(std::span<const KeyframeRecord> keyframes, const TurnDetectionParams& params) {
  if (params.window < 2) throw InvalidArgumentError("turn window must be >= 2");
  const std::size_t n = keyframes.size();
  const auto window = static_cast<std::size_t>(params.window);
  std::vector<FrameId> turns;
  if (n < 2) return turns;

  std::vector<double> step(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    step[i] = std::abs(wrap_angle(keyframes[i].heading - keyframes[i - 1].heading));

  std::optional<std::size_t> cluster_start;
  std::size_t best = 0;
  auto flush = [&] {
    if (cluster_start) turns.push_back(keyframes[best].frame_id);
  };

  for (std::size_t i = window - 1; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = i + 2 - window; j <= i; ++j) acc += step[j];
    if (!(acc >= params.angle_threshold)) continue;

    if (!cluster_start || i >= *cluster_start + window) {
      flush();
      cluster_start = i;
      best = i;
    } else if (step[i] > step[best]) {
      best = i;
    }
  }
  flush();
  return turns;
}

TopoGraph build_topo(std::span<const KeyframeRecord> keyframes, std::span<const LandmarkAssociation> associations,
                     std::span<const FrameId> turns) {
  std::unordered_map<FrameId, std::size_t> index_of;
  for (std::size_t i = 0; i < keyframes.size(); ++i) index_of.emplace(keyframes[i].frame_id, i);

  std::map<std::size_t, std::set<std::string>> landmarks_at;
  for (const auto& a : associations) {
    auto it = index_of.find(a.frame_id);
    if (it == index_of.end())
      throw ValidationError("landmark '" + a.landmark + "' associated with unknown frame " +
                            std::to_string(a.frame_id));
    landmarks_at[it->second].insert(a.landmark);
  }
  std::set<std::size_t> turn_at;
  for (FrameId f : turns) {
    auto it = index_of.find(f);
    if (it == index_of.end()) throw ValidationError("turn at unknown frame " + std::to_string(f));
    turn_at.insert(it->second);
  }

  std::vector<double> arc(keyframes.size(), 0.0);
  for (std::size_t i = 1; i < keyframes.size(); ++i)
    arc[i] = arc[i - 1] + (keyframes[i].position - keyframes[i - 1].position).norm();

  TopoGraph graph;
  std::vector<std::size_t> node_keyframe;
  auto add_node = [&](std::size_t k, NodeKind kind, std::vector<std::string> names) {
    TopoNode node;
    node.node_id = static_cast<NodeId>(graph.nodes.size());
    node.kind = kind;
    node.position = keyframes[k].position;
    node.landmark_names = std::move(names);
    node.source_frame_ids = {keyframes[k].frame_id};
    graph.nodes.push_back(std::move(node));
    node_keyframe.push_back(k);
  };

  for (std::size_t k = 0; k < keyframes.size(); ++k) {
    if (auto it = landmarks_at.find(k); it != landmarks_at.end())
      add_node(k, NodeKind::landmark, {it->second.begin(), it->second.end()});
    if (turn_at.count(k)) add_node(k, NodeKind::turn, {});
  }

  for (std::size_t i = 1; i < graph.nodes.size(); ++i)
    graph.edges.push_back({graph.nodes[i - 1].node_id, graph.nodes[i].node_id,
                           arc[node_keyframe[i]] - arc[node_keyframe[i - 1]]});
  return graph;
}

namespace {

struct MergeCluster {
  TopoNode node;
  Vec3 position_sum = Vec3::Zero();
  double members = 1.0;
  bool absorbed = false;
};

template <typename T>
void sorted_union(std::vector<T>& into, const std::vector<T>& from) {
  std::vector<T> out;
  out.reserve(into.size() + from.size());
  std::set_union(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(out));
  into = std::move(out);
}

}  // namespace

TopoGraph fuse_revisits(const TopoGraph& graph, double merge_radius) {
  if (!(merge_radius >= 0.0)) throw InvalidArgumentError("merge radius must be >= 0");

  std::vector<MergeCluster> clusters;
  clusters.reserve(graph.nodes.size());
  for (const auto& n : graph.nodes) clusters.push_back({n, n.position, 1.0, false});
  std::sort(clusters.begin(), clusters.end(),
            [](const MergeCluster& a, const MergeCluster& b) { return a.node.node_id < b.node.node_id; });

  std::unordered_map<NodeId, NodeId> parent;
  for (const auto& c : clusters) parent[c.node.node_id] = c.node.node_id;

  const double r2 = merge_radius * merge_radius;
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      if (clusters[i].absorbed) continue;
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        auto& seed = clusters[i];
        auto& other = clusters[j];
        if (other.absorbed || other.node.kind != seed.node.kind) continue;
        if ((other.node.position - seed.node.position).squaredNorm() > r2) continue;
        sorted_union(seed.node.landmark_names, other.node.landmark_names);
        sorted_union(seed.node.source_frame_ids, other.node.source_frame_ids);
        seed.position_sum += other.position_sum;
        seed.members += other.members;
        other.absorbed = true;
        parent[other.node.node_id] = seed.node.node_id;
        merged = true;
      }
    }
    // Positions move only between passes, so one pass compares against a fixed snapshot.
    for (auto& c : clusters)
      if (!c.absorbed && c.members > 1.0) c.node.position = c.position_sum / c.members;
  }

  auto root = [&](NodeId id) {
    while (parent.at(id) != id) id = parent.at(id);
    return id;
  };

  TopoGraph out;
  for (auto& c : clusters)
    if (!c.absorbed) out.nodes.push_back(std::move(c.node));

  std::map<std::pair<NodeId, NodeId>, double> edges;
  for (const auto& e : graph.edges) {
    NodeId a = root(e.a);
    NodeId b = root(e.b);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    auto [it, inserted] = edges.emplace(std::make_pair(a, b), e.length);
    if (!inserted) it->second = std::min(it->second, e.length);
  }
  for (const auto& [key, length] : edges) out.edges.push_back({key.first, key.second, length});
  return out;
}

}  // namespace semmap
