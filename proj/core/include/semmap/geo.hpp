#pragma once

#include "semmap/semantic_map.hpp"

#include <optional>

namespace semmap {

/// Spherical Earth radius used for the local tangent approximation.
inline constexpr double kEarthRadius = 6'371'000.0;

/// A WGS84 fix tied to a trajectory frame. Altitude is optional and treated
/// as 0 when absent.
struct GeoFix {
  FrameId frame_id = 0;
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
  std::optional<double> alt;  // meters

  double altitude() const { return alt.value_or(0.0); }

  friend bool operator==(const GeoFix&, const GeoFix&) = default;
};

struct LocalTangentOrigin {
  double lat = 0.0;
  double lon = 0.0;
  double alt = 0.0;

  static LocalTangentOrigin from_fix(const GeoFix& fix) { return {fix.lat, fix.lon, fix.altitude()}; }

  friend bool operator==(const LocalTangentOrigin&, const LocalTangentOrigin&) = default;
};

bool valid_coordinates(double lat, double lon);

/// East-north-up meters relative to `origin` on a sphere of radius
/// kEarthRadius. The longitude difference is wrapped across the antimeridian.
Vec3 wgs84_to_local(const GeoFix& fix, const LocalTangentOrigin& origin);

/// Exact inverse of wgs84_to_local (returns a fix with frame_id 0 and the altitude set).
GeoFix local_to_wgs84(const Vec3& enu, const LocalTangentOrigin& origin);

}  // namespace semmap
