#pragma once

#include "semmap/map_document.hpp"
#include "semmap/topo.hpp"

#include <filesystem>
#include <iosfwd>

namespace semmap {

/// ASCII PLY: x, y, z, Cityscapes palette color and the hard label per point.
void write_ply(std::ostream& out, const SemanticMapDocument& doc);
void write_ply(const std::filesystem::path& path, const SemanticMapDocument& doc);

/// Undirected DOT graph. Landmark nodes are labelled with their names,
/// turn nodes with "turn"; edges carry their length in meters (2 decimals).
void write_dot(std::ostream& out, const TopoGraph& graph);
void write_dot(const std::filesystem::path& path, const TopoGraph& graph);

void write_topo_json(const std::filesystem::path& path, const TopoGraph& graph);

}  // namespace semmap
