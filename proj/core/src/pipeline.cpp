#include "semmap/pipeline.hpp"

#include "semmap/errors.hpp"
#include "semmap/exports.hpp"
#include "semmap/landmarks.hpp"
#include "semmap/raster_io.hpp"
#include "semmap/text_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>

namespace semmap {

using nlohmann::json;

std::filesystem::path raster_path(const std::filesystem::path& dir, FrameId frame) {
  char name[32];
  std::snprintf(name, sizeof(name), "%06lld.sscm", static_cast<long long>(frame));
  return dir / name;
}

RasterProvider directory_rasters(std::filesystem::path dir) {
  return [dir = std::move(dir)](FrameId frame) -> std::optional<ScoreRaster> {
    const auto path = raster_path(dir, frame);
    if (!std::filesystem::exists(path)) return std::nullopt;
    return read_raster(path);
  };
}

FusionSummary fuse_all(SemanticMap& map, const SlamExport& slam, const RasterProvider& rasters) {
  FusionSummary summary;
  for (const auto& kf : slam.keyframes) {
    auto vis = slam.visibility.find(kf.frame_id);
    if (vis == slam.visibility.end() || vis->second.empty()) continue;
    auto raster = rasters(kf.frame_id);
    if (!raster) {
      ++summary.frames_without_raster;
      continue;
    }
    summary.points += fuse_frame(map, kf, *raster, vis->second);
    ++summary.frames_fused;
  }
  return summary;
}

AlignmentRecord align(std::span<const KeyframeRecord> keyframes, std::span<const GeoFix> fixes, int stride) {
  const AnchorSet anchors = sample_anchors(keyframes, fixes, stride);
  const SimilarityEstimate est = estimate_similarity(anchors);
  return {est.transform, est.rmse, anchors.origin, anchors.size(), stride};
}

LandmarkLayer build_landmark_layer(std::span<const Landmark> gazetteer, const AlignmentRecord& alignment,
                                   std::span<const KeyframeRecord> keyframes) {
  LandmarkLayer layer;
  layer.landmarks = place_landmarks(gazetteer, alignment.transform, alignment.origin);
  layer.associations = associate_landmarks(layer.landmarks, keyframes);
  return layer;
}

TopoGraph build_topology(std::span<const KeyframeRecord> keyframes, std::span<const LandmarkAssociation> associations,
                         const TopologyParams& params) {
  const auto turns = detect_turns(keyframes, params.turns);
  return fuse_revisits(build_topo(keyframes, associations, turns), params.merge_radius);
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string relative_string(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (base.empty()) return p.generic_string();
  return p.lexically_relative(base).generic_string();
}

template <typename F>
auto run_stage(const char* stage, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open config");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  const auto base = path.parent_path();
  PipelineConfig c;
  try {
    static const std::set<std::string> known = {
        "slam", "rasters", "gps", "landmarks", "output", "stride", "sigma", "turn_threshold",
        "turn_window", "merge_radius", "allow_partial", "skip_fusion", "skip_alignment",
        "skip_landmarks", "skip_topo"};
    for (const auto& [key, value] : j.items())
      if (!known.count(key)) throw ValidationError("unknown config key '" + key + "'");
    c.slam = resolve(base, j.at("slam").get<std::string>());
    c.rasters = resolve(base, j.value("rasters", std::string("rasters")));
    if (j.contains("gps") && !j["gps"].is_null()) c.gps = resolve(base, j["gps"].get<std::string>());
    if (j.contains("landmarks") && !j["landmarks"].is_null())
      c.landmarks = resolve(base, j["landmarks"].get<std::string>());
    if (j.contains("output") && !j["output"].is_null()) c.output_dir = resolve(base, j["output"].get<std::string>());
    c.stride = j.value("stride", c.stride);
    c.default_sigma = j.value("sigma", c.default_sigma);
    c.topology.turns.angle_threshold = j.value("turn_threshold", c.topology.turns.angle_threshold);
    c.topology.turns.window = j.value("turn_window", c.topology.turns.window);
    c.topology.merge_radius = j.value("merge_radius", c.topology.merge_radius);
    c.allow_partial = j.value("allow_partial", false);
    c.skip_fusion = j.value("skip_fusion", false);
    c.skip_alignment = j.value("skip_alignment", false);
    c.skip_landmarks = j.value("skip_landmarks", false);
    c.skip_topo = j.value("skip_topo", false);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return c;
}

void save_pipeline_config(const PipelineConfig& c, const std::filesystem::path& path,
                          const std::filesystem::path& relative_to) {
  json j;
  j["slam"] = relative_string(c.slam, relative_to);
  j["rasters"] = relative_string(c.rasters, relative_to);
  j["gps"] = c.gps ? json(relative_string(*c.gps, relative_to)) : json(nullptr);
  j["landmarks"] = c.landmarks ? json(relative_string(*c.landmarks, relative_to)) : json(nullptr);
  j["output"] = c.output_dir ? json(relative_string(*c.output_dir, relative_to)) : json(nullptr);
  j["stride"] = c.stride;
  j["sigma"] = c.default_sigma;
  j["turn_threshold"] = c.topology.turns.angle_threshold;
  j["turn_window"] = c.topology.turns.window;
  j["merge_radius"] = c.topology.merge_radius;
  j["allow_partial"] = c.allow_partial;
  j["skip_fusion"] = c.skip_fusion;
  j["skip_alignment"] = c.skip_alignment;
  j["skip_landmarks"] = c.skip_landmarks;
  j["skip_topo"] = c.skip_topo;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

void write_outputs(const PipelineResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_map(result.document, dir / "map.json");
  write_ply(dir / "map.ply", result.document);
  write_dot(dir / "topo.dot", result.document.topo);
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  PipelineResult result;
  auto skip = [&](const char* stage, const std::string& reason) {
    result.skipped_stages.emplace_back(stage);
    if (!reason.empty()) result.warnings.push_back(std::string(stage) + " skipped: " + reason);
  };

  const SlamExport slam = run_stage("load", [&] { return read_slam_export(config.slam); });
  SemanticMap map = run_stage("load", [&] { return slam.to_semantic_map(); });

  if (config.skip_fusion) {
    skip("fusion", "");
  } else {
    result.fusion = run_stage("fusion", [&] { return fuse_all(map, slam, directory_rasters(config.rasters)); });
    if (result.fusion.frames_without_raster > 0)
      result.warnings.push_back(std::to_string(result.fusion.frames_without_raster) +
                                " frame(s) with observations had no raster");
  }
  result.document = SemanticMapDocument::from_map(map);

  const bool wants_landmarks = config.landmarks && !config.skip_landmarks;
  if (config.skip_alignment) {
    skip("alignment", "");
  } else if (!config.gps) {
    if (wants_landmarks && !config.allow_partial)
      throw StageError("alignment", "landmarks requested but no GPS file configured");
    skip("alignment", "no GPS file configured");
  } else {
    const auto fixes = run_stage("alignment", [&] { return read_gps_csv(*config.gps); });
    try {
      result.document.alignment = align(slam.keyframes, fixes, config.stride);
    } catch (const InsufficientAnchorsError& e) {
      if (!config.allow_partial) throw StageError("alignment", e.what());
      skip("alignment", e.what());
    } catch (const std::exception& e) {
      throw StageError("alignment", e.what());
    }
  }
  const auto& alignment = result.document.alignment;

  if (!wants_landmarks) {
    skip("landmarks", "");
  } else if (!alignment) {
    skip("landmarks", "no GPS alignment available");
  } else {
    run_stage("landmarks", [&] {
      const auto gazetteer = read_landmark_csv(*config.landmarks, config.default_sigma);
      auto layer = build_landmark_layer(gazetteer, *alignment, slam.keyframes);
      result.document.landmarks = std::move(layer.landmarks);
      result.document.associations = std::move(layer.associations);
      return 0;
    });
  }

  if (config.skip_topo) {
    skip("topology", "");
  } else if (!alignment) {
    skip("topology", "no GPS alignment available");
  } else {
    result.document.topo = run_stage(
        "topology", [&] { return build_topology(slam.keyframes, result.document.associations, config.topology); });
  }

  if (config.output_dir) run_stage("export", [&] { write_outputs(result, *config.output_dir); return 0; });
  return result;
}

}  // namespace semmap
