#include "semmap/geo.hpp"

#include "semmap/errors.hpp"

#include <cmath>
#include <numbers>

namespace semmap {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double wrap_degrees(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

}  // namespace

bool valid_coordinates(double lat, double lon) {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 && lon >= -180.0 &&
         lon <= 180.0;
}

Vec3 wgs84_to_local(const GeoFix& fix, const LocalTangentOrigin& origin) {
  const double dlon = wrap_degrees(fix.lon - origin.lon) * kDegToRad;
  const double dlat = (fix.lat - origin.lat) * kDegToRad;
  return {kEarthRadius * dlon * std::cos(origin.lat * kDegToRad), kEarthRadius * dlat,
          fix.altitude() - origin.alt};
}

GeoFix local_to_wgs84(const Vec3& enu, const LocalTangentOrigin& origin) {
  const double cos_lat = std::cos(origin.lat * kDegToRad);
  if (cos_lat <= 0.0) throw InvalidArgumentError("local tangent origin at a pole");
  GeoFix fix;
  fix.lat = origin.lat + enu.y() / kEarthRadius / kDegToRad;
  fix.lon = wrap_degrees(origin.lon + enu.x() / (kEarthRadius * cos_lat) / kDegToRad);
  fix.alt = origin.alt + enu.z();
  return fix;
}

}  // namespace semmap
