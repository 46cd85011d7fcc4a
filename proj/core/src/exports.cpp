#include "semmap/exports.hpp"

#include "semmap/errors.hpp"
#include "semmap/labels.hpp"
#include "semmap/text_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace semmap {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

void write_ply(std::ostream& out, const SemanticMapDocument& doc) {
  out << "ply\n"
      << "format ascii 1.0\n"
      << "comment semmap semantic point cloud\n"
      << "element vertex " << doc.points.size() << "\n"
      << "property double x\n"
      << "property double y\n"
      << "property double z\n"
      << "property uchar red\n"
      << "property uchar green\n"
      << "property uchar blue\n"
      << "property uchar label\n"
      << "end_header\n";
  for (const auto& p : doc.points) {
    const LabelIndex label = p.label();
    const Rgb c = label_color(label);
    out << format_double(p.position.x()) << ' ' << format_double(p.position.y()) << ' '
        << format_double(p.position.z()) << ' ' << int{c.r} << ' ' << int{c.g} << ' ' << int{c.b} << ' '
        << label << '\n';
  }
}

void write_ply(const std::filesystem::path& path, const SemanticMapDocument& doc) {
  auto out = open_output(path);
  write_ply(out, doc);
}

void write_dot(std::ostream& out, const TopoGraph& graph) {
  out << "graph topo {\n";
  for (const auto& n : graph.nodes) {
    std::string label;
    if (n.kind == NodeKind::turn) {
      label = "turn";
    } else {
      for (std::size_t i = 0; i < n.landmark_names.size(); ++i) {
        if (i) label += "\\n";
        label += dot_escape(n.landmark_names[i]);
      }
    }
    out << "  n" << n.node_id << " [label=\"" << label << "\", kind=" << to_string(n.kind) << ", pos=\""
        << format_double(n.position.x()) << ',' << format_double(n.position.y()) << "!\"];\n";
  }
  char buf[64];
  for (const auto& e : graph.edges) {
    std::snprintf(buf, sizeof(buf), "%.2f", e.length);
    out << "  n" << e.a << " -- n" << e.b << " [label=\"" << buf << "\"];\n";
  }
  out << "}\n";
}

void write_dot(const std::filesystem::path& path, const TopoGraph& graph) {
  auto out = open_output(path);
  write_dot(out, graph);
}

void write_topo_json(const std::filesystem::path& path, const TopoGraph& graph) {
  auto out = open_output(path);
  out << topo_to_json_string(graph);
}

}  // namespace semmap
