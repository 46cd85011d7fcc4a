#include "semmap/slam_export.hpp"

#include "semmap/errors.hpp"
#include "semmap/text_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace semmap {

namespace {

constexpr std::string_view kHeader = "SEMMAP_SLAM";

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

void SlamExport::validate() const {
  std::unordered_set<FrameId> frames;
  for (std::size_t i = 0; i < keyframes.size(); ++i) {
    const auto& kf = keyframes[i];
    if (i > 0 && kf.frame_id <= keyframes[i - 1].frame_id)
      throw ValidationError("keyframe ids must be strictly increasing (frame " + std::to_string(kf.frame_id) + ")");
    if (kf.frame_id < 0) throw ValidationError("negative frame id " + std::to_string(kf.frame_id));
    if (!has_full_rank(kf.camera_matrix))
      throw ValidationError("camera matrix of frame " + std::to_string(kf.frame_id) + " is not rank 3");
    if (!kf.position.allFinite()) throw ValidationError("non-finite keyframe position");
    if (!(kf.heading > -std::numbers::pi && kf.heading <= std::numbers::pi))
      throw ValidationError("heading of frame " + std::to_string(kf.frame_id) + " outside (-pi, pi]");
    frames.insert(kf.frame_id);
  }
  std::unordered_set<PointId> ids;
  for (const auto& p : points) {
    if (!ids.insert(p.id).second) throw ValidationError("duplicate point id " + std::to_string(p.id));
    if (!p.position.allFinite()) throw ValidationError("non-finite position for point " + std::to_string(p.id));
  }
  for (const auto& [frame, visible] : visibility) {
    if (!frames.count(frame)) throw ValidationError("visibility for unknown frame " + std::to_string(frame));
    std::unordered_set<PointId> seen;
    for (PointId id : visible) {
      if (!ids.count(id))
        throw ValidationError("frame " + std::to_string(frame) + " observes unknown point " + std::to_string(id));
      if (!seen.insert(id).second)
        throw ValidationError("frame " + std::to_string(frame) + " lists point " + std::to_string(id) + " twice");
    }
  }
}

SemanticMap SlamExport::to_semantic_map() const {
  SemanticMap map;
  for (const auto& kf : keyframes) map.add_keyframe(kf);
  for (const auto& p : points) map.add_point(p.id, p.position);
  return map;
}

SlamExport read_slam_export(std::istream& in, const std::string& source) {
  SlamExport slam;
  std::unordered_map<FrameId, std::size_t> keyframe_index;
  std::unordered_set<FrameId> posed;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  auto fail = [&](const std::string& what) -> void { throw ParseError(source, line_no, what); };
  auto number = [&](std::string_view tok) {
    auto v = parse_double(tok);
    if (!v) fail("invalid number '" + std::string(tok) + "'");
    return *v;
  };
  auto integer = [&](std::string_view tok) {
    auto v = parse_int(tok);
    if (!v) fail("invalid integer '" + std::string(tok) + "'");
    return *v;
  };
  auto expect_count = [&](const std::vector<std::string_view>& toks, std::size_t values) {
    if (toks.size() - 1 != values)
      fail(std::string(toks[0]) + " line expects " + std::to_string(values) + " values, got " +
           std::to_string(toks.size() - 1));
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = tokenize(line);
    if (toks.empty()) continue;

    if (!header_seen) {
      if (toks.size() != 2 || toks[0] != kHeader) fail("expected header 'SEMMAP_SLAM 1'");
      if (toks[1] != "1") fail("unsupported SLAM export version " + std::string(toks[1]));
      header_seen = true;
      continue;
    }

    const std::string_view kind = toks[0];
    if (kind == "keyframe") {
      expect_count(toks, 5);
      KeyframeRecord kf;
      kf.frame_id = integer(toks[1]);
      kf.position = {number(toks[2]), number(toks[3]), number(toks[4])};
      kf.heading = number(toks[5]);
      if (!slam.keyframes.empty() && kf.frame_id <= slam.keyframes.back().frame_id)
        fail("keyframe ids must be strictly increasing");
      keyframe_index[kf.frame_id] = slam.keyframes.size();
      slam.keyframes.push_back(kf);
    } else if (kind == "pose") {
      if (toks.size() != 14)
        fail("pose line expects a frame id and 12 matrix values, got " +
             std::to_string(toks.size() < 2 ? 0 : toks.size() - 2) + " matrix values");
      const FrameId frame = integer(toks[1]);
      auto it = keyframe_index.find(frame);
      if (it == keyframe_index.end()) fail("pose for undeclared keyframe " + std::to_string(frame));
      if (!posed.insert(frame).second) fail("second pose for keyframe " + std::to_string(frame));
      CameraMatrix& m = slam.keyframes[it->second].camera_matrix;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = number(toks[static_cast<std::size_t>(2 + 4 * r + c)]);
    } else if (kind == "point") {
      expect_count(toks, 4);
      slam.points.push_back({integer(toks[1]), {number(toks[2]), number(toks[3]), number(toks[4])}});
    } else if (kind == "observe") {
      if (toks.size() < 2) fail("observe line needs a frame id");
      auto& list = slam.visibility[integer(toks[1])];
      for (std::size_t i = 2; i < toks.size(); ++i) list.push_back(integer(toks[i]));
    } else {
      fail("unknown record type '" + std::string(kind) + "'");
    }
  }
  if (!header_seen) throw ParseError(source, line_no, "empty SLAM export (missing header)");
  for (const auto& kf : slam.keyframes)
    if (!posed.count(kf.frame_id))
      throw ParseError(source, 0, "keyframe " + std::to_string(kf.frame_id) + " has no pose line");

  try {
    slam.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return slam;
}

SlamExport read_slam_export(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return read_slam_export(in, path.string());
}

void write_slam_export(std::ostream& out, const SlamExport& slam) {
  out << kHeader << " 1\n";
  for (const auto& kf : slam.keyframes) {
    out << "keyframe " << kf.frame_id << ' ' << format_double(kf.position.x()) << ' '
        << format_double(kf.position.y()) << ' ' << format_double(kf.position.z()) << ' '
        << format_double(kf.heading) << '\n';
    out << "pose " << kf.frame_id;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 4; ++c) out << ' ' << format_double(kf.camera_matrix(r, c));
    out << '\n';
  }
  for (const auto& p : slam.points)
    out << "point " << p.id << ' ' << format_double(p.position.x()) << ' ' << format_double(p.position.y())
        << ' ' << format_double(p.position.z()) << '\n';
  for (const auto& [frame, ids] : slam.visibility) {
    out << "observe " << frame;
    for (PointId id : ids) out << ' ' << id;
    out << '\n';
  }
}

void write_slam_export(const std::filesystem::path& path, const SlamExport& slam) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_slam_export(out, slam);
}

}  // namespace semmap
