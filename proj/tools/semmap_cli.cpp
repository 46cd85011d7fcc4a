// semmap: command line front end for the semantic mapping pipeline.

#include "semmap/errors.hpp"
#include "semmap/exports.hpp"
#include "semmap/landmarks.hpp"
#include "semmap/map_document.hpp"
#include "semmap/pipeline.hpp"
#include "semmap/synth.hpp"
#include "semmap/text_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace semmap;

namespace {

SemanticMapDocument load_or_empty(const std::string& path) {
  if (path.empty()) return {};
  return load_map(path);
}

void print_fusion(const FusionSummary& s) {
  std::cerr << "fused " << s.frames_fused << " frame(s): " << s.points.updated << " updates, "
            << s.points.rejected_projection << " behind camera, " << s.points.rejected_bounds
            << " outside raster";
  if (s.frames_without_raster) std::cerr << ", " << s.frames_without_raster << " frame(s) without raster";
  std::cerr << '\n';
}

struct TopoFlags {
  double turn_threshold = TurnDetectionParams{}.angle_threshold;
  int turn_window = TurnDetectionParams{}.window;
  double merge_radius = kDefaultMergeRadius;

  void add(CLI::App* app) {
    app->add_option("--turn-threshold", turn_threshold, "Accumulated heading change marking a turn (radians)")
        ->capture_default_str();
    app->add_option("--turn-window", turn_window, "Keyframes in the turn detection window")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    app->add_option("--merge-radius", merge_radius, "Revisit merge radius (map units)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  }

  TopologyParams params() const { return {{turn_threshold, turn_window}, merge_radius}; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semmap - fuse SLAM output, semantic score rasters, GPS and landmarks into a semantic map"};
  app.require_subcommand(1);

  // fuse
  std::string slam_path, raster_dir, map_in, map_out = "map.json";
  auto* fuse = app.add_subcommand("fuse", "Bayesian label fusion of score rasters into SLAM map points");
  fuse->add_option("--slam", slam_path, "SLAM export (text)")->required()->check(CLI::ExistingFile);
  fuse->add_option("--rasters", raster_dir, "Directory of <frame>.sscm rasters")->required()->check(CLI::ExistingDirectory);
  fuse->add_option("-o,--out", map_out, "Output map document")->capture_default_str();

  // align
  std::string gps_path;
  int stride = kDefaultAnchorStride;
  auto* align_cmd = app.add_subcommand("align", "Estimate the GPS-to-map similarity transform");
  align_cmd->add_option("--slam", slam_path, "SLAM export")->required()->check(CLI::ExistingFile);
  align_cmd->add_option("--gps", gps_path, "GPS fixes CSV")->required()->check(CLI::ExistingFile);
  align_cmd->add_option("--map", map_in, "Existing map document to extend")->check(CLI::ExistingFile);
  align_cmd->add_option("--stride", stride, "Anchor sampling stride in frames")->check(CLI::PositiveNumber)->capture_default_str();
  align_cmd->add_option("-o,--out", map_out, "Output map document")->capture_default_str();

  // landmarks
  std::string landmark_path;
  double sigma = kDefaultLandmarkSigma;
  std::vector<double> query;
  std::size_t top_k = 5;
  auto* lm_cmd = app.add_subcommand("landmarks", "Place gazetteer landmarks in the map and associate keyframes");
  lm_cmd->add_option("--slam", slam_path, "SLAM export")->required()->check(CLI::ExistingFile);
  lm_cmd->add_option("--landmarks", landmark_path, "Landmark CSV")->required()->check(CLI::ExistingFile);
  lm_cmd->add_option("--map", map_in, "Map document with an alignment")->required()->check(CLI::ExistingFile);
  lm_cmd->add_option("--sigma", sigma, "Default membership spread (meters)")->check(CLI::PositiveNumber)->capture_default_str();
  lm_cmd->add_option("--query", query, "Rank landmarks by membership at X Y")->expected(2);
  lm_cmd->add_option("--top", top_k, "Number of ranked landmarks to print")->check(CLI::PositiveNumber)->capture_default_str();
  lm_cmd->add_option("-o,--out", map_out, "Output map document")->capture_default_str();

  // topo
  TopoFlags topo_flags;
  std::string dot_out;
  auto* topo_cmd = app.add_subcommand("topo", "Build the topological graph from keyframes and landmark associations");
  topo_cmd->add_option("--slam", slam_path, "SLAM export")->required()->check(CLI::ExistingFile);
  topo_cmd->add_option("--map", map_in, "Map document (associations are read from it)")->required()->check(CLI::ExistingFile);
  topo_flags.add(topo_cmd);
  topo_cmd->add_option("--dot", dot_out, "Also write the graph as DOT");
  topo_cmd->add_option("-o,--out", map_out, "Output map document")->capture_default_str();

  // run
  std::string config_path, out_dir;
  std::optional<int> run_stride;
  std::optional<double> run_sigma, run_threshold, run_merge;
  std::optional<int> run_window;
  bool allow_partial = false, skip_fusion = false, skip_alignment = false, skip_landmarks = false, skip_topo = false;
  auto* run = app.add_subcommand("run", "Run the whole pipeline from a config file and/or flags");
  run->add_option("-c,--config", config_path, "Pipeline config (JSON)")->check(CLI::ExistingFile);
  run->add_option("--slam", slam_path, "SLAM export");
  run->add_option("--rasters", raster_dir, "Raster directory");
  run->add_option("--gps", gps_path, "GPS fixes CSV");
  run->add_option("--landmarks", landmark_path, "Landmark CSV");
  run->add_option("--out-dir", out_dir, "Directory for map.json, map.ply and topo.dot");
  run->add_option("--stride", run_stride, "Anchor sampling stride (default 30)")->check(CLI::PositiveNumber);
  run->add_option("--sigma", run_sigma, "Default landmark sigma (default 15)")->check(CLI::PositiveNumber);
  run->add_option("--turn-threshold", run_threshold, "Turn threshold in radians (default pi/6)");
  run->add_option("--turn-window", run_window, "Turn window in keyframes (default 5)")->check(CLI::Range(2, 1000000));
  run->add_option("--merge-radius", run_merge, "Revisit merge radius (default 5)")->check(CLI::NonNegativeNumber);
  run->add_flag("--allow-partial", allow_partial, "Skip landmark/topology stages instead of failing without GPS anchors");
  run->add_flag("--skip-fusion", skip_fusion, "Do not fuse rasters");
  run->add_flag("--skip-alignment", skip_alignment, "Do not align GPS");
  run->add_flag("--skip-landmarks", skip_landmarks, "Do not place landmarks");
  run->add_flag("--skip-topo", skip_topo, "Do not build the topological graph");

  // synth
  WorldSpec spec;
  std::string synth_dir, shape_name = "L";
  double scale = 1.0;
  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic input bundle with ground truth");
  synth->add_option("-o,--out", synth_dir, "Output directory")->required();
  synth->add_option("--seed", spec.seed, "Random seed")->capture_default_str();
  synth->add_option("--shape", shape_name, "straight | L | loop | figure-eight")->capture_default_str();
  synth->add_option("--points", spec.n_points, "Number of map points")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--frames", spec.n_frames, "Number of keyframes")->check(CLI::Range(2, 1000000))->capture_default_str();
  synth->add_option("--margin", spec.label_margin, "True-label score margin in (0, 1]")->capture_default_str();
  synth->add_option("--gps-noise", spec.gps_noise, "GPS noise sigma (meters)")->capture_default_str();
  synth->add_option("--landmarks", spec.n_landmarks, "Number of landmarks")->capture_default_str();
  synth->add_option("--step", spec.step, "Meters between keyframes")->capture_default_str();
  synth->add_option("--width", spec.image_width, "Raster width")->capture_default_str();
  synth->add_option("--height", spec.image_height, "Raster height")->capture_default_str();
  synth->add_option("--scale", scale, "Map scale of the true GPS-to-map transform")->check(CLI::PositiveNumber)->capture_default_str();

  // export
  std::string ply_out, topo_json_out;
  auto* export_cmd = app.add_subcommand("export", "Write PLY / DOT / graph JSON from a map document");
  export_cmd->add_option("--map", map_in, "Map document")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--ply", ply_out, "Point cloud PLY output");
  export_cmd->add_option("--dot", dot_out, "Topological graph DOT output");
  export_cmd->add_option("--topo-json", topo_json_out, "Topological graph JSON output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fuse) {
      const SlamExport slam = read_slam_export(fs::path(slam_path));
      SemanticMap map = slam.to_semantic_map();
      print_fusion(fuse_all(map, slam, directory_rasters(raster_dir)));
      save_map(SemanticMapDocument::from_map(map), map_out);
    } else if (*align_cmd) {
      const SlamExport slam = read_slam_export(fs::path(slam_path));
      SemanticMapDocument doc = load_or_empty(map_in);
      doc.alignment = align(slam.keyframes, read_gps_csv(fs::path(gps_path)), stride);
      std::cerr << "aligned " << doc.alignment->anchor_count << " anchors, scale "
                << format_double(doc.alignment->transform.scale) << ", RMSE " << format_double(doc.alignment->rmse)
                << '\n';
      save_map(doc, map_out);
    } else if (*lm_cmd) {
      const SlamExport slam = read_slam_export(fs::path(slam_path));
      SemanticMapDocument doc = load_map(map_in);
      if (!doc.alignment) throw Error("map document has no alignment; run 'semmap align' first");
      auto layer = build_landmark_layer(read_landmark_csv(fs::path(landmark_path), sigma), *doc.alignment,
                                        slam.keyframes);
      doc.landmarks = std::move(layer.landmarks);
      doc.associations = std::move(layer.associations);
      for (const auto& a : doc.associations)
        std::cout << a.landmark << " -> frame " << a.frame_id << " (" << format_double(a.distance) << ")\n";
      if (!query.empty())
        for (const auto& r : rank_landmarks(doc.landmarks, query[0], query[1], top_k))
          std::cout << r.name << '\t' << r.membership << '\n';
      save_map(doc, map_out);
    } else if (*topo_cmd) {
      const SlamExport slam = read_slam_export(fs::path(slam_path));
      SemanticMapDocument doc = load_map(map_in);
      doc.topo = build_topology(slam.keyframes, doc.associations, topo_flags.params());
      std::cerr << "topology: " << doc.topo.nodes.size() << " nodes, " << doc.topo.edges.size() << " edges\n";
      if (!dot_out.empty()) write_dot(fs::path(dot_out), doc.topo);
      save_map(doc, map_out);
    } else if (*run) {
      PipelineConfig config;
      if (!config_path.empty()) config = load_pipeline_config(config_path);
      if (!slam_path.empty()) config.slam = slam_path;
      if (!raster_dir.empty()) config.rasters = raster_dir;
      if (!gps_path.empty()) config.gps = gps_path;
      if (!landmark_path.empty()) config.landmarks = landmark_path;
      if (!out_dir.empty()) config.output_dir = out_dir;
      if (run_stride) config.stride = *run_stride;
      if (run_sigma) config.default_sigma = *run_sigma;
      if (run_threshold) config.topology.turns.angle_threshold = *run_threshold;
      if (run_window) config.topology.turns.window = *run_window;
      if (run_merge) config.topology.merge_radius = *run_merge;
      config.allow_partial = config.allow_partial || allow_partial;
      config.skip_fusion = config.skip_fusion || skip_fusion;
      config.skip_alignment = config.skip_alignment || skip_alignment;
      config.skip_landmarks = config.skip_landmarks || skip_landmarks;
      config.skip_topo = config.skip_topo || skip_topo;
      if (config.slam.empty()) throw Error("no SLAM export given (--slam or config 'slam')");
      if (!config.output_dir) config.output_dir = fs::path("semmap_out");

      const PipelineResult result = run_pipeline(config);
      print_fusion(result.fusion);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      std::cerr << "wrote " << (*config.output_dir / "map.json").string() << '\n';
    } else if (*synth) {
      auto shape = trajectory_shape_from_string(shape_name);
      if (!shape) throw Error("unknown shape '" + shape_name + "'");
      spec.shape = *shape;
      spec.true_transform.scale = scale;
      const World world = generate_world(spec);
      write_world(world, synth_dir);
      std::cerr << "wrote synthetic bundle to " << synth_dir << " (" << world.bundle.slam.keyframes.size()
                << " keyframes, " << world.bundle.slam.points.size() << " points)\n";
    } else if (*export_cmd) {
      const SemanticMapDocument doc = load_map(map_in);
      if (ply_out.empty() && dot_out.empty() && topo_json_out.empty())
        throw Error("nothing to export; pass --ply, --dot and/or --topo-json");
      if (!ply_out.empty()) write_ply(fs::path(ply_out), doc);
      if (!dot_out.empty()) write_dot(fs::path(dot_out), doc.topo);
      if (!topo_json_out.empty()) write_topo_json(fs::path(topo_json_out), doc.topo);
    }
  } catch (const std::exception& e) {
    std::cerr << "semmap: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
