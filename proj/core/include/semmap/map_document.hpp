#pragma once

#include "semmap/geo.hpp"
#include "semmap/landmarks.hpp"
#include "semmap/semantic_map.hpp"
#include "semmap/similarity.hpp"
#include "semmap/topo.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace semmap {

inline constexpr int kMapFormatVersion = 1;

/// GPS-to-map registration as persisted in the map document.
struct AlignmentRecord {
  SimilarityTransform transform;
  double rmse = 0.0;
  LocalTangentOrigin origin;
  std::size_t anchor_count = 0;
  int stride = kDefaultAnchorStride;

  friend bool operator==(const AlignmentRecord&, const AlignmentRecord&) = default;
};

/// Everything the pipeline produces. Points are kept sorted by id.
struct SemanticMapDocument {
  int format_version = kMapFormatVersion;
  std::vector<SemanticMapPoint> points;
  std::optional<AlignmentRecord> alignment;
  std::vector<Landmark> landmarks;
  std::vector<LandmarkAssociation> associations;
  TopoGraph topo;

  static SemanticMapDocument from_map(const SemanticMap& map);

  friend bool operator==(const SemanticMapDocument&, const SemanticMapDocument&) = default;
};

/// Pretty-printed JSON with a trailing newline. Deterministic for equal documents.
std::string to_json_string(const SemanticMapDocument& doc);

/// Throws FormatVersionError for an unknown `format_version`, ParseError for
/// malformed JSON and ValidationError for inconsistent content.
SemanticMapDocument from_json_string(const std::string& text, const std::string& source = "<string>");

/// The topological graph alone, in the same layout as the document's `topo` section.
std::string topo_to_json_string(const TopoGraph& graph);

void save_map(const SemanticMapDocument& doc, const std::filesystem::path& path);
SemanticMapDocument load_map(const std::filesystem::path& path);

}  // namespace semmap
