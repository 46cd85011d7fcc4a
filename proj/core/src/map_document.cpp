#include "semmap/map_document.hpp"

#include "semmap/errors.hpp"
#include "semmap/labels.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace semmap {

using nlohmann::json;

namespace {

json vec_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ValidationError("expected a 3-element array");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json topo_to_json(const TopoGraph& g) {
  json nodes = json::array();
  for (const auto& n : g.nodes)
    nodes.push_back({{"node_id", n.node_id},
                     {"kind", std::string(to_string(n.kind))},
                     {"position", vec_to_json(n.position)},
                     {"landmark_names", n.landmark_names},
                     {"source_frame_ids", n.source_frame_ids}});
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({{"endpoints", {e.a, e.b}}, {"length", e.length}});
  return {{"nodes", nodes}, {"edges", edges}};
}

TopoGraph topo_from_json(const json& j) {
  TopoGraph g;
  for (const auto& jn : j.at("nodes")) {
    TopoNode n;
    n.node_id = jn.at("node_id").get<NodeId>();
    auto kind = node_kind_from_string(jn.at("kind").get<std::string>());
    if (!kind) throw ValidationError("unknown topo node kind");
    n.kind = *kind;
    n.position = vec_from_json(jn.at("position"));
    n.landmark_names = jn.at("landmark_names").get<std::vector<std::string>>();
    n.source_frame_ids = jn.at("source_frame_ids").get<std::vector<FrameId>>();
    g.nodes.push_back(std::move(n));
  }
  for (const auto& je : j.at("edges")) {
    const auto& ends = je.at("endpoints");
    if (!ends.is_array() || ends.size() != 2) throw ValidationError("edge endpoints must be a pair");
    g.edges.push_back({ends.at(0).get<NodeId>(), ends.at(1).get<NodeId>(), je.at("length").get<double>()});
  }
  g.validate();
  return g;
}

json transform_to_json(const SimilarityTransform& t) {
  json rot = json::array();
  for (int r = 0; r < 3; ++r) rot.push_back({t.rotation(r, 0), t.rotation(r, 1), t.rotation(r, 2)});
  return {{"rotation", rot}, {"scale", t.scale}, {"translation", vec_to_json(t.translation)}};
}

SimilarityTransform transform_from_json(const json& j) {
  SimilarityTransform t;
  const auto& rot = j.at("rotation");
  if (!rot.is_array() || rot.size() != 3) throw ValidationError("rotation must be 3x3");
  for (int r = 0; r < 3; ++r) {
    const auto& row = rot.at(static_cast<std::size_t>(r));
    if (!row.is_array() || row.size() != 3) throw ValidationError("rotation must be 3x3");
    for (int c = 0; c < 3; ++c) t.rotation(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  t.scale = j.at("scale").get<double>();
  t.translation = vec_from_json(j.at("translation"));
  if (!t.is_valid()) throw ValidationError("stored transform is not a proper similarity");
  return t;
}

json document_to_json(const SemanticMapDocument& doc) {
  json j;
  j["format_version"] = doc.format_version;
  json names = json::array();
  for (auto n : label_names()) names.push_back(std::string(n));
  j["label_names"] = names;

  json points = json::array();
  for (const auto& p : doc.points)
    points.push_back({{"id", p.id},
                      {"position", vec_to_json(p.position)},
                      {"belief", p.belief.probs()},
                      {"label", p.label()},
                      {"observation_count", p.observation_count}});
  j["points"] = points;

  if (doc.alignment) {
    const auto& a = *doc.alignment;
    json aj = transform_to_json(a.transform);
    aj["rmse"] = a.rmse;
    aj["origin"] = {{"lat", a.origin.lat}, {"lon", a.origin.lon}, {"alt", a.origin.alt}};
    aj["anchor_count"] = a.anchor_count;
    aj["stride"] = a.stride;
    j["alignment"] = aj;
  } else {
    j["alignment"] = nullptr;
  }

  json landmarks = json::array();
  for (const auto& lm : doc.landmarks) {
    json lj = {{"name", lm.name},
               {"lat", lm.geo.lat},
               {"lon", lm.geo.lon},
               {"sigma", lm.sigma},
               {"map_position", vec_to_json(lm.map_position)}};
    lj["alt"] = lm.geo.alt ? json(*lm.geo.alt) : json(nullptr);
    landmarks.push_back(lj);
  }
  j["landmarks"] = landmarks;

  json assoc = json::array();
  for (const auto& a : doc.associations)
    assoc.push_back({{"landmark", a.landmark}, {"frame_id", a.frame_id}, {"distance", a.distance}});
  j["associations"] = assoc;
  j["topo"] = topo_to_json(doc.topo);
  return j;
}

SemanticMapDocument document_from_json(const json& j) {
  SemanticMapDocument doc;
  if (!j.is_object() || !j.contains("format_version")) throw ValidationError("missing format_version");
  doc.format_version = j.at("format_version").get<int>();
  if (doc.format_version != kMapFormatVersion)
    throw FormatVersionError("unsupported map format_version " + std::to_string(doc.format_version));

  const auto names = j.at("label_names").get<std::vector<std::string>>();
  if (names.size() != kNumLabels) throw ValidationError("label_names must list 19 classes");
  for (std::size_t i = 0; i < kNumLabels; ++i)
    if (names[i] != label_names()[i]) throw ValidationError("label_names do not match the class table");

  for (const auto& jp : j.at("points")) {
    SemanticMapPoint p;
    p.id = jp.at("id").get<PointId>();
    p.position = vec_from_json(jp.at("position"));
    const auto& belief = jp.at("belief");
    if (!belief.is_array() || belief.size() != kNumLabels)
      throw ValidationError("point belief must have 19 entries");
    p.belief = LabelDistribution::from_probabilities(belief.get<LabelDistribution::Storage>());
    const auto& count = jp.at("observation_count");
    if (!count.is_number_unsigned()) throw ValidationError("observation_count must be a non-negative integer");
    p.observation_count = count.get<std::uint64_t>();
    if (jp.at("label").get<LabelIndex>() != p.label())
      throw ValidationError("point " + std::to_string(p.id) + " label disagrees with its belief");
    if (!doc.points.empty() && doc.points.back().id >= p.id)
      throw ValidationError("points must be sorted by unique id");
    doc.points.push_back(std::move(p));
  }

  if (const auto& aj = j.at("alignment"); !aj.is_null()) {
    AlignmentRecord a;
    a.transform = transform_from_json(aj);
    a.rmse = aj.at("rmse").get<double>();
    const auto& o = aj.at("origin");
    a.origin = {o.at("lat").get<double>(), o.at("lon").get<double>(), o.at("alt").get<double>()};
    if (!valid_coordinates(a.origin.lat, a.origin.lon)) throw ValidationError("alignment origin out of range");
    a.anchor_count = aj.at("anchor_count").get<std::size_t>();
    a.stride = aj.at("stride").get<int>();
    doc.alignment = a;
  }

  for (const auto& lj : j.at("landmarks")) {
    Landmark lm;
    lm.name = lj.at("name").get<std::string>();
    lm.geo.lat = lj.at("lat").get<double>();
    lm.geo.lon = lj.at("lon").get<double>();
    if (const auto& alt = lj.at("alt"); !alt.is_null()) lm.geo.alt = alt.get<double>();
    lm.sigma = lj.at("sigma").get<double>();
    lm.map_position = vec_from_json(lj.at("map_position"));
    if (lm.name.empty() || !(lm.sigma > 0.0)) throw ValidationError("landmark needs a name and sigma > 0");
    doc.landmarks.push_back(std::move(lm));
  }
  for (const auto& aj : j.at("associations")) {
    LandmarkAssociation a{aj.at("landmark").get<std::string>(), aj.at("frame_id").get<FrameId>(),
                          aj.at("distance").get<double>()};
    if (!(a.distance >= 0.0)) throw ValidationError("association distance must be >= 0");
    doc.associations.push_back(std::move(a));
  }
  doc.topo = topo_from_json(j.at("topo"));
  return doc;
}

}  // namespace

SemanticMapDocument SemanticMapDocument::from_map(const SemanticMap& map) {
  SemanticMapDocument doc;
  doc.points.reserve(map.points().size());
  for (const auto& [id, p] : map.points()) doc.points.push_back(p);
  return doc;
}

std::string topo_to_json_string(const TopoGraph& graph) { return topo_to_json(graph).dump(2) + "\n"; }

std::string to_json_string(const SemanticMapDocument& doc) { return document_to_json(doc).dump(2) + "\n"; }

SemanticMapDocument from_json_string(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(source, 0, e.what());
  }
  try {
    return document_from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError(source + ": " + e.what());
  } catch (const FormatVersionError& e) {
    throw FormatVersionError(source + ": " + e.what());
  } catch (const Error& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

void save_map(const SemanticMapDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << to_json_string(doc);
  if (!out) throw Error("failed writing " + path.string());
}

SemanticMapDocument load_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_string(ss.str(), path.string());
}

}  // namespace semmap
