#include "semmap/synth.hpp"

#include "semmap/errors.hpp"
#include "semmap/raster_io.hpp"
#include "semmap/text_io.hpp"

#include <json.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <string>
#include <unordered_map>

namespace semmap {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Random numbers

double SynthRng::uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

double SynthRng::normal() {
  if (spare_normal_) {
    const double v = *spare_normal_;
    spare_normal_.reset();
    return v;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_normal_ = r * std::sin(theta);
  return r * std::cos(theta);
}

double SynthRng::gamma(double shape) {
  if (!(shape > 0.0)) return 0.0;
  if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::size_t SynthRng::index(std::size_t n) {
  if (n == 0) throw InvalidArgumentError("index range is empty");
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

// ---------------------------------------------------------------------------
// World description

std::string_view to_string(TrajectoryShape shape) {
  switch (shape) {
    case TrajectoryShape::straight: return "straight";
    case TrajectoryShape::l_shape: return "L";
    case TrajectoryShape::loop: return "loop";
    case TrajectoryShape::figure_eight: return "figure-eight";
  }
  return "?";
}

std::optional<TrajectoryShape> trajectory_shape_from_string(std::string_view s) {
  if (s == "straight") return TrajectoryShape::straight;
  if (s == "L" || s == "l") return TrajectoryShape::l_shape;
  if (s == "loop") return TrajectoryShape::loop;
  if (s == "figure-eight" || s == "figure8") return TrajectoryShape::figure_eight;
  return std::nullopt;
}

SimilarityTransform default_true_transform() {
  SimilarityTransform t;
  t.rotation = Eigen::AngleAxisd(0.4, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  t.scale = 1.0;
  t.translation = {12.0, -7.0, 0.5};
  return t;
}

void WorldSpec::validate() const {
  if (n_points < 1 || n_frames < 2) throw InvalidArgumentError("world needs >= 1 point and >= 2 frames");
  if (!(label_margin > 0.0 && label_margin <= 1.0)) throw InvalidArgumentError("label margin must be in (0, 1]");
  if (!(gps_noise >= 0.0)) throw InvalidArgumentError("gps noise must be >= 0");
  if (!(step > 0.0)) throw InvalidArgumentError("keyframe step must be positive");
  if (image_width < 2 || image_height < 2) throw InvalidArgumentError("image too small");
  if (!(concentration > 0.0)) throw InvalidArgumentError("concentration must be positive");
  if (!true_transform.is_valid()) throw InvalidArgumentError("true transform is not a proper similarity");
  if (!valid_coordinates(geo_origin.lat, geo_origin.lon) || std::abs(geo_origin.lat) > 80.0)
    throw InvalidArgumentError("geo origin must be a valid fix away from the poles");
}

namespace {

constexpr double kCameraHeight = 1.6;
constexpr double kMaxDepth = 80.0;
constexpr double kMinDepth = 0.5;
constexpr double kLandmarkOffset = 10.0;
constexpr int kMinPixelSeparation = 3;
constexpr LabelIndex kSkyLabel = 10;
constexpr LabelIndex kRoadLabel = 0;

struct Polyline {
  std::vector<Eigen::Vector2d> waypoints;
  std::vector<double> cumulative;  // arc length at each waypoint

  double length() const { return cumulative.back(); }

  // Position and heading at arc length s; on a corner the outgoing segment wins.
  std::pair<Eigen::Vector2d, double> at(double s) const {
    std::size_t seg = waypoints.size() - 2;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
      if (s < cumulative[i + 1] - 1e-9) {
        seg = i;
        break;
      }
    }
    const Eigen::Vector2d dir = (waypoints[seg + 1] - waypoints[seg]).normalized();
    return {waypoints[seg] + dir * (s - cumulative[seg]), std::atan2(dir.y(), dir.x())};
  }
};

Polyline make_path(TrajectoryShape shape, double total) {
  std::vector<Eigen::Vector2d> w;
  switch (shape) {
    case TrajectoryShape::straight:
      w = {{0, 0}, {total, 0}};
      break;
    case TrajectoryShape::l_shape: {
      const double side = total / 2.0;
      w = {{0, 0}, {side, 0}, {side, side}};
      break;
    }
    case TrajectoryShape::loop: {
      const double side = total / 4.0;
      w = {{side / 2, 0}, {side, 0}, {side, side}, {0, side}, {0, 0}, {side / 2, 0}};
      break;
    }
    case TrajectoryShape::figure_eight: {
      // Two square lobes sharing the corner at the origin, which is turned at twice.
      const double side = total / 8.5;
      w = {{0, 0},     {side, 0},     {side, side},  {0, side},        {0, 0},
           {-side, 0}, {-side, -side}, {0, -side},   {0, 0},           {side / 2, 0}};
      break;
    }
  }
  Polyline p;
  p.waypoints = std::move(w);
  p.cumulative.push_back(0.0);
  for (std::size_t i = 1; i < p.waypoints.size(); ++i)
    p.cumulative.push_back(p.cumulative.back() + (p.waypoints[i] - p.waypoints[i - 1]).norm());
  return p;
}

struct Camera {
  Vec3 center_enu;
  Eigen::Matrix3d world_to_cam_enu;  // rows: right, down, forward
};

Camera make_camera(const Eigen::Vector2d& xy, double heading) {
  Camera cam;
  cam.center_enu = {xy.x(), xy.y(), kCameraHeight};
  const double c = std::cos(heading), s = std::sin(heading);
  cam.world_to_cam_enu << s, -c, 0.0,  //
      0.0, 0.0, -1.0,                  //
      c, s, 0.0;
  return cam;
}

std::array<double, kNumLabels> mean_scores(LabelIndex label, double margin) {
  std::array<double, kNumLabels> mu{};
  const double other = (1.0 - margin) / static_cast<double>(kNumLabels);
  mu.fill(other);
  mu[label] = other + margin;
  return mu;
}

void draw_dirichlet(SynthRng& rng, const std::array<double, kNumLabels>& mu, double concentration,
                    LabelIndex label, std::span<float> out) {
  std::array<double, kNumLabels> g{};
  double total = 0.0;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    g[i] = mu[i] > 0.0 ? rng.gamma(concentration * mu[i]) : 0.0;
    total += g[i];
  }
  if (!(total > 0.0)) {
    g.fill(0.0);
    g[label] = 1.0;
    total = 1.0;
  }
  for (std::size_t i = 0; i < kNumLabels; ++i) out[i] = static_cast<float>(g[i] / total);
  float sum = 0.0f;
  for (float v : out) sum += v;
  if (!(sum > 0.0f)) out[label] = 1.0f;
}

}  // namespace

World generate_world(const WorldSpec& spec) {
  spec.validate();
  SynthRng rng(spec.seed);
  World world;
  world.spec = spec;
  world.truth.transform = spec.true_transform;
  const SimilarityTransform& T = spec.true_transform;

  const double fx = static_cast<double>(spec.image_width) / 2.0;
  Eigen::Matrix3d K;
  K << fx, 0.0, static_cast<double>(spec.image_width) / 2.0,  //
      0.0, fx, static_cast<double>(spec.image_height) / 2.0,   //
      0.0, 0.0, 1.0;
  const double half_w = 0.6 * (static_cast<double>(spec.image_width) / 2.0) / fx;
  const double half_h = 0.6 * (static_cast<double>(spec.image_height) / 2.0) / fx;

  // Trajectory.
  const Polyline path = make_path(spec.shape, spec.step * static_cast<double>(spec.n_frames - 1));
  std::vector<Camera> cameras;
  auto& keyframes = world.bundle.slam.keyframes;
  for (std::size_t i = 0; i < spec.n_frames; ++i) {
    const auto [xy, heading] = path.at(spec.step * static_cast<double>(i));
    const Camera cam = make_camera(xy, heading);
    cameras.push_back(cam);

    KeyframeRecord kf;
    kf.frame_id = static_cast<FrameId>(i);
    kf.position = apply_transform(T, cam.center_enu);
    const Eigen::Matrix3d world_to_cam = cam.world_to_cam_enu * T.rotation.transpose();
    kf.camera_matrix.leftCols<3>() = K * world_to_cam;
    kf.camera_matrix.col(3) = -(K * world_to_cam * kf.position);
    const Vec3 forward_map = T.rotation * cam.world_to_cam_enu.row(2).transpose();
    kf.heading = wrap_angle(std::atan2(forward_map.y(), forward_map.x()));
    keyframes.push_back(kf);
  }

  // Turn ground truth: interior waypoints, at the first keyframe reaching them.
  std::vector<Eigen::Vector2d> turn_places;
  for (std::size_t w = 1; w + 1 < path.waypoints.size(); ++w) {
    const auto frame = static_cast<FrameId>(std::ceil(path.cumulative[w] / spec.step - 1e-9));
    if (frame >= static_cast<FrameId>(spec.n_frames)) continue;
    world.truth.turn_frames.push_back(frame);
    const auto& place = path.waypoints[w];
    auto same = [&](const Eigen::Vector2d& q) { return (q - place).norm() < 1e-6; };
    if (std::find_if(turn_places.begin(), turn_places.end(), same) == turn_places.end())
      turn_places.push_back(place);
  }
  world.truth.turn_locations = turn_places.size();
  for (const auto& place : turn_places) {
    const auto visits = std::count_if(path.waypoints.begin() + 1, path.waypoints.end() - 1,
                                      [&](const Eigen::Vector2d& q) { return (q - place).norm() < 1e-6; });
    if (visits > 1) ++world.truth.junctions;
  }

  // Map points with true labels. Straight worlds put every point ahead of the
  // final keyframe so each one stays in view for the whole run.
  std::vector<Vec3> points_enu;
  std::map<std::size_t, std::vector<Eigen::Vector2i>> anchor_pixels;
  for (std::size_t n = 0; n < spec.n_points; ++n) {
    const LabelIndex label = rng.index(kNumLabels);
    const std::size_t anchor =
        spec.shape == TrajectoryShape::straight ? spec.n_frames - 1 : rng.index(spec.n_frames);
    const Camera& cam = cameras[anchor];
    const Eigen::Matrix3d cam_to_world = cam.world_to_cam_enu.transpose();
    Vec3 p_enu;
    Eigen::Vector2i pixel;
    for (int attempt = 0; attempt < 100; ++attempt) {
      const double depth = rng.uniform(8.0, 30.0);
      const double lateral = rng.uniform(-half_w, half_w) * depth;
      const double vertical = std::clamp(rng.uniform(-half_h, half_h) * depth, -1.5, 4.0);
      p_enu = cam.center_enu + cam_to_world * Vec3(lateral, -vertical, depth);
      const Vec3 uvw = K * Vec3(lateral, -vertical, depth);
      pixel = {static_cast<int>(std::lround(uvw.x() / uvw.z())), static_cast<int>(std::lround(uvw.y() / uvw.z()))};
      const auto& taken = anchor_pixels[anchor];
      const bool crowded = std::any_of(taken.begin(), taken.end(), [&](const Eigen::Vector2i& q) {
        return (q - pixel).cwiseAbs().maxCoeff() < kMinPixelSeparation;
      });
      if (!crowded) break;
    }
    anchor_pixels[anchor].push_back(pixel);
    points_enu.push_back(p_enu);
    const auto id = static_cast<PointId>(n);
    world.bundle.slam.points.push_back({id, apply_transform(T, p_enu)});
    world.truth.labels[id] = label;
  }

  // Landmarks beside the path, left of the direction of travel.
  for (std::size_t j = 0; j < spec.n_landmarks; ++j) {
    const std::size_t k = std::min(spec.n_frames - 1, static_cast<std::size_t>((static_cast<double>(j) + 0.5) *
                                                                              static_cast<double>(spec.n_frames) /
                                                                              static_cast<double>(spec.n_landmarks)));
    const auto [xy, heading] = path.at(spec.step * static_cast<double>(k));
    const Eigen::Vector2d left(-std::sin(heading), std::cos(heading));
    Eigen::Vector2d pos = xy + kLandmarkOffset * left;
    pos += Eigen::Vector2d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    const Vec3 enu(pos.x(), pos.y(), 0.0);

    Landmark lm;
    lm.name = "Landmark " + std::string(1, static_cast<char>('A' + j % 26)) +
              (j >= 26 ? std::to_string(j / 26) : std::string());
    lm.geo = local_to_wgs84(enu, spec.geo_origin);
    lm.geo.alt.reset();
    lm.sigma = kDefaultLandmarkSigma;
    world.bundle.landmarks.push_back(lm);
    lm.map_position = apply_transform(T, enu);
    world.truth.landmarks.push_back(lm);
  }

  // GPS fixes on every keyframe (horizontal noise, no altitude).
  for (std::size_t i = 0; i < spec.n_frames; ++i) {
    Vec3 enu = cameras[i].center_enu;
    enu.z() = 0.0;
    enu.x() += spec.gps_noise * rng.normal();
    enu.y() += spec.gps_noise * rng.normal();
    GeoFix fix = local_to_wgs84(enu, spec.geo_origin);
    fix.frame_id = static_cast<FrameId>(i);
    fix.alt.reset();
    world.bundle.fixes.push_back(fix);
  }

  // Rasters and visibility. A pixel shows the nearest point that lands on it;
  // anything farther on the same pixel is occluded and not reported.
  const auto W = static_cast<long>(spec.image_width);
  const auto H = static_cast<long>(spec.image_height);
  const auto sky = mean_scores(kSkyLabel, spec.label_margin);
  const auto road = mean_scores(kRoadLabel, spec.label_margin);
  for (std::size_t i = 0; i < spec.n_frames; ++i) {
    const KeyframeRecord& kf = keyframes[i];
    const Camera& cam = cameras[i];
    std::unordered_map<long, std::pair<double, PointId>> owner;
    for (std::size_t n = 0; n < points_enu.size(); ++n) {
      const double depth = cam.world_to_cam_enu.row(2).dot(points_enu[n] - cam.center_enu);
      if (depth < kMinDepth || depth > kMaxDepth) continue;
      const auto px = project_point(world.bundle.slam.points[n].position, kf.camera_matrix);
      if (!px) continue;
      const long col = std::lround(px->u);
      const long row = std::lround(px->v);
      if (col < 0 || row < 0 || col >= W || row >= H) continue;
      const long key = row * W + col;
      auto it = owner.find(key);
      if (it == owner.end() || depth < it->second.first) owner[key] = {depth, static_cast<PointId>(n)};
    }

    ScoreRaster raster(spec.image_height, spec.image_width);
    for (long row = 0; row < H; ++row) {
      for (long col = 0; col < W; ++col) {
        auto it = owner.find(row * W + col);
        LabelIndex label = row < H / 2 ? kSkyLabel : kRoadLabel;
        std::array<double, kNumLabels> mu = row < H / 2 ? sky : road;
        if (it != owner.end()) {
          label = world.truth.labels.at(it->second.second);
          mu = mean_scores(label, spec.label_margin);
        }
        draw_dirichlet(rng, mu, spec.concentration, label,
                       raster.pixel(static_cast<std::size_t>(row), static_cast<std::size_t>(col)));
      }
    }
    std::vector<PointId> visible;
    for (const auto& [key, entry] : owner) visible.push_back(entry.second);
    std::sort(visible.begin(), visible.end());
    if (!visible.empty()) world.bundle.slam.visibility[kf.frame_id] = std::move(visible);
    world.bundle.rasters.emplace(kf.frame_id, std::move(raster));
  }
  return world;
}

RasterProvider WorldBundle::raster_provider() const {
  return [this](FrameId frame) -> std::optional<ScoreRaster> {
    auto it = rasters.find(frame);
    if (it == rasters.end()) return std::nullopt;
    return it->second;
  };
}

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json ground_truth_json(const World& world) {
  const auto& t = world.truth;
  json labels = json::array();
  for (const auto& [id, label] : t.labels) labels.push_back({{"id", id}, {"label", label}});
  json landmarks = json::array();
  for (const auto& lm : t.landmarks)
    landmarks.push_back({{"name", lm.name}, {"map_position", vec_json(lm.map_position)}});
  json rot = json::array();
  for (int r = 0; r < 3; ++r) rot.push_back({t.transform.rotation(r, 0), t.transform.rotation(r, 1), t.transform.rotation(r, 2)});
  const auto& s = world.spec;
  return {{"generator_version", kGeneratorVersion},
          {"spec",
           {{"seed", s.seed},
            {"n_points", s.n_points},
            {"n_frames", s.n_frames},
            {"shape", std::string(to_string(s.shape))},
            {"label_margin", s.label_margin},
            {"gps_noise", s.gps_noise},
            {"n_landmarks", s.n_landmarks},
            {"step", s.step},
            {"image_width", s.image_width},
            {"image_height", s.image_height},
            {"concentration", s.concentration},
            {"geo_origin", {{"lat", s.geo_origin.lat}, {"lon", s.geo_origin.lon}, {"alt", s.geo_origin.alt}}}}},
          {"labels", labels},
          {"landmarks", landmarks},
          {"turn_frames", t.turn_frames},
          {"turn_locations", t.turn_locations},
          {"junctions", t.junctions},
          {"transform",
           {{"rotation", rot}, {"scale", t.transform.scale}, {"translation", vec_json(t.transform.translation)}}}};
}

}  // namespace

void write_world(const World& world, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "rasters");
  write_slam_export(dir / "slam.txt", world.bundle.slam);
  for (const auto& [frame, raster] : world.bundle.rasters) write_raster(raster_path(dir / "rasters", frame), raster);
  write_gps_csv(dir / "gps.csv", world.bundle.fixes);
  write_landmark_csv(dir / "landmarks.csv", world.bundle.landmarks);
  {
    std::ofstream out(dir / "ground_truth.json", std::ios::binary);
    if (!out) throw Error("cannot write ground_truth.json");
    out << ground_truth_json(world).dump(2) << '\n';
  }
  PipelineConfig config;
  config.slam = dir / "slam.txt";
  config.rasters = dir / "rasters";
  config.gps = dir / "gps.csv";
  config.landmarks = dir / "landmarks.csv";
  config.output_dir = dir / "out";
  config.allow_partial = true;
  save_pipeline_config(config, dir / "pipeline.json", dir);
}

LabelDistribution oracle_fuse(std::span<const LabelDistribution> observations, const LabelDistribution& prior) {
  if (observations.empty()) throw InvalidArgumentError("oracle_fuse needs at least one observation");
  std::array<long double, kNumLabels> log_mass{};
  std::array<bool, kNumLabels> alive{};
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    alive[i] = prior[i] > 0.0;
    log_mass[i] = alive[i] ? std::log(static_cast<long double>(prior[i])) : 0.0L;
  }
  for (const auto& obs : observations) {
    const LabelDistribution clamped = clamp_observation(obs);
    for (std::size_t i = 0; i < kNumLabels; ++i) log_mass[i] += std::log(static_cast<long double>(clamped[i]));
  }
  long double peak = -std::numeric_limits<long double>::infinity();
  for (std::size_t i = 0; i < kNumLabels; ++i)
    if (alive[i]) peak = std::max(peak, log_mass[i]);
  if (!std::isfinite(static_cast<double>(peak))) throw DegenerateDistributionError("oracle product vanished");

  std::array<long double, kNumLabels> mass{};
  long double total = 0.0L;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    mass[i] = alive[i] ? std::exp(log_mass[i] - peak) : 0.0L;
    total += mass[i];
  }
  LabelDistribution::Storage out{};
  for (std::size_t i = 0; i < kNumLabels; ++i) out[i] = static_cast<double>(mass[i] / total);
  return LabelDistribution::from_scores(out);
}

double oracle_similarity_error(const SimilarityTransform& estimated, const SimilarityTransform& truth,
                               std::span<const Vec3> probes) {
  if (probes.empty()) throw InvalidArgumentError("need at least one probe point");
  double sq = 0.0;
  for (const auto& p : probes) sq += (apply_transform(estimated, p) - apply_transform(truth, p)).squaredNorm();
  return std::sqrt(sq / static_cast<double>(probes.size()));
}

}  // namespace semmap
