#pragma once

#include "semmap/map_document.hpp"
#include "semmap/projection.hpp"
#include "semmap/slam_export.hpp"
#include "semmap/topo.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace semmap {

/// Returns the raster for a frame, or empty when none was produced.
using RasterProvider = std::function<std::optional<ScoreRaster>(FrameId)>;

/// Rasters stored as `<dir>/<frame_id zero-padded to 6 digits>.sscm`.
std::filesystem::path raster_path(const std::filesystem::path& dir, FrameId frame);
RasterProvider directory_rasters(std::filesystem::path dir);

struct FusionSummary {
  FusionReport points;
  std::size_t frames_fused = 0;
  std::size_t frames_without_raster = 0;
};

/// Runs fuse_frame over every keyframe in frame order.
FusionSummary fuse_all(SemanticMap& map, const SlamExport& slam, const RasterProvider& rasters);

AlignmentRecord align(std::span<const KeyframeRecord> keyframes, std::span<const GeoFix> fixes,
                      int stride = kDefaultAnchorStride);

struct LandmarkLayer {
  std::vector<Landmark> landmarks;
  std::vector<LandmarkAssociation> associations;
};

LandmarkLayer build_landmark_layer(std::span<const Landmark> gazetteer, const AlignmentRecord& alignment,
                                   std::span<const KeyframeRecord> keyframes);

struct TopologyParams {
  TurnDetectionParams turns;
  double merge_radius = kDefaultMergeRadius;
};

/// detect_turns, build_topo and fuse_revisits in sequence.
TopoGraph build_topology(std::span<const KeyframeRecord> keyframes,
                         std::span<const LandmarkAssociation> associations, const TopologyParams& params = {});

struct PipelineConfig {
  std::filesystem::path slam;
  std::filesystem::path rasters;
  std::optional<std::filesystem::path> gps;
  std::optional<std::filesystem::path> landmarks;
  std::optional<std::filesystem::path> output_dir;

  int stride = kDefaultAnchorStride;
  double default_sigma = kDefaultLandmarkSigma;
  TopologyParams topology;

  bool allow_partial = false;
  bool skip_fusion = false;
  bool skip_alignment = false;
  bool skip_landmarks = false;
  bool skip_topo = false;
};

/// Reads a JSON config. Relative paths are resolved against the config's directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void save_pipeline_config(const PipelineConfig& config, const std::filesystem::path& path,
                          const std::filesystem::path& relative_to = {});

struct PipelineResult {
  SemanticMapDocument document;
  FusionSummary fusion;
  std::vector<std::string> warnings;
  std::vector<std::string> skipped_stages;
};

/// fusion -> alignment -> landmarks -> topology. Stage failures are rethrown as
/// StageError naming the stage. With `allow_partial`, missing GPS or too few
/// anchors skip the landmark and topology stages with a warning instead.
/// When `output_dir` is set, writes map.json, map.ply and topo.dot there.
PipelineResult run_pipeline(const PipelineConfig& config);

void write_outputs(const PipelineResult& result, const std::filesystem::path& dir);

}  // namespace semmap
