#pragma once

#include "semmap/geo.hpp"
#include "semmap/landmarks.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semmap {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict full-string parse; empty on any trailing garbage.
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

/// Splits one CSV record. Fields may be double-quoted; inside quotes a
/// doubled quote is a literal quote and commas are literal. Returns empty
/// on an unterminated quote or stray text after a closing quote.
std::optional<std::vector<std::string>> split_csv_record(std::string_view line);

/// Quotes a field only when it contains a comma, quote or leading/trailing space.
std::string quote_csv_field(std::string_view field);

// GPS fixes: header `frame_id,lat,lon,alt`, alt may be empty.
std::vector<GeoFix> read_gps_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<GeoFix> read_gps_csv(const std::filesystem::path& path);
void write_gps_csv(std::ostream& out, const std::vector<GeoFix>& fixes);
void write_gps_csv(const std::filesystem::path& path, const std::vector<GeoFix>& fixes);

// Landmark gazetteer: header `name,lat,lon` or `name,lat,lon,sigma`. An
// empty or absent sigma takes `default_sigma`.
std::vector<Landmark> read_landmark_csv(std::istream& in, const std::string& source = "<stream>",
                                        double default_sigma = kDefaultLandmarkSigma);
std::vector<Landmark> read_landmark_csv(const std::filesystem::path& path,
                                        double default_sigma = kDefaultLandmarkSigma);
void write_landmark_csv(std::ostream& out, const std::vector<Landmark>& landmarks);
void write_landmark_csv(const std::filesystem::path& path, const std::vector<Landmark>& landmarks);

}  // namespace semmap
