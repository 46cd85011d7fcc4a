#include "semmap/text_io.hpp"

#include "semmap/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

namespace semmap {

std::string format_double(double value) {
  if (!std::isfinite(value)) throw InvalidArgumentError("cannot format a non-finite value");
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, end);
}

std::optional<double> parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::optional<std::vector<std::string>> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  std::size_t i = 0;
  while (true) {
    field.clear();
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            closed = true;
            ++i;
            break;
          }
        } else {
          field.push_back(line[i++]);
        }
      }
      if (!closed) return std::nullopt;
      if (i < line.size() && line[i] != ',') return std::nullopt;
    } else {
      while (i < line.size() && line[i] != ',') {
        if (line[i] == '"') return std::nullopt;
        field.push_back(line[i++]);
      }
    }
    fields.push_back(field);
    if (i >= line.size()) break;
    ++i;  // comma
  }
  return fields;
}

std::string quote_csv_field(std::string_view field) {
  const bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos ||
                     (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

namespace {

struct CsvReader {
  CsvReader(std::istream& stream, std::string name) : in(stream), source(std::move(name)) {}

  std::istream& in;
  std::string source;
  std::size_t line_no = 0;
  std::string line;

  // Next non-blank line with CR and a leading UTF-8 BOM stripped.
  bool next() {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      if (!line.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source, line_no, what); }

  std::vector<std::string> record() const {
    auto fields = split_csv_record(line);
    if (!fields) fail("malformed quoted field");
    return *fields;
  }

  double number(const std::string& field, const char* name) const {
    auto v = parse_double(field);
    if (!v) fail(std::string("invalid ") + name + " '" + field + "'");
    return *v;
  }
};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::vector<GeoFix> read_gps_csv(std::istream& in, const std::string& source) {
  CsvReader r(in, source);
  if (!r.next()) r.fail("missing header");
  if (r.line != "frame_id,lat,lon,alt") r.fail("expected header 'frame_id,lat,lon,alt'");

  std::vector<GeoFix> fixes;
  std::unordered_set<FrameId> seen;
  while (r.next()) {
    const auto f = r.record();
    if (f.size() != 4) r.fail("expected 4 fields, got " + std::to_string(f.size()));
    GeoFix fix;
    auto id = parse_int(f[0]);
    if (!id || *id < 0) r.fail("invalid frame_id '" + f[0] + "'");
    fix.frame_id = *id;
    fix.lat = r.number(f[1], "lat");
    fix.lon = r.number(f[2], "lon");
    if (!f[3].empty()) fix.alt = r.number(f[3], "alt");
    if (!valid_coordinates(fix.lat, fix.lon)) r.fail("latitude/longitude out of range");
    if (!seen.insert(fix.frame_id).second) r.fail("duplicate fix for frame " + f[0]);
    fixes.push_back(fix);
  }
  return fixes;
}

std::vector<GeoFix> read_gps_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_gps_csv(in, path.string());
}

void write_gps_csv(std::ostream& out, const std::vector<GeoFix>& fixes) {
  out << "frame_id,lat,lon,alt\n";
  for (const auto& f : fixes) {
    out << f.frame_id << ',' << format_double(f.lat) << ',' << format_double(f.lon) << ',';
    if (f.alt) out << format_double(*f.alt);
    out << '\n';
  }
}

void write_gps_csv(const std::filesystem::path& path, const std::vector<GeoFix>& fixes) {
  auto out = open_output(path);
  write_gps_csv(out, fixes);
}

std::vector<Landmark> read_landmark_csv(std::istream& in, const std::string& source, double default_sigma) {
  if (!(default_sigma > 0.0) || !std::isfinite(default_sigma))
    throw InvalidArgumentError("default sigma must be positive");
  CsvReader r(in, source);
  if (!r.next()) r.fail("missing header");
  bool has_sigma = false;
  if (r.line == "name,lat,lon,sigma") has_sigma = true;
  else if (r.line != "name,lat,lon") r.fail("expected header 'name,lat,lon[,sigma]'");

  const std::size_t columns = has_sigma ? 4 : 3;
  std::vector<Landmark> out;
  std::set<std::string> names;
  while (r.next()) {
    const auto f = r.record();
    if (f.size() != columns)
      r.fail("expected " + std::to_string(columns) + " fields, got " + std::to_string(f.size()));
    Landmark lm;
    lm.name = f[0];
    if (lm.name.empty()) r.fail("landmark name is empty");
    lm.geo.lat = r.number(f[1], "lat");
    lm.geo.lon = r.number(f[2], "lon");
    if (!valid_coordinates(lm.geo.lat, lm.geo.lon)) r.fail("latitude/longitude out of range");
    lm.sigma = default_sigma;
    if (has_sigma && !f[3].empty()) {
      lm.sigma = r.number(f[3], "sigma");
      if (!(lm.sigma > 0.0)) r.fail("sigma must be positive");
    }
    if (!names.insert(lm.name).second) r.fail("duplicate landmark name '" + lm.name + "'");
    out.push_back(std::move(lm));
  }
  return out;
}

std::vector<Landmark> read_landmark_csv(const std::filesystem::path& path, double default_sigma) {
  auto in = open_input(path);
  return read_landmark_csv(in, path.string(), default_sigma);
}

void write_landmark_csv(std::ostream& out, const std::vector<Landmark>& landmarks) {
  out << "name,lat,lon,sigma\n";
  for (const auto& lm : landmarks)
    out << quote_csv_field(lm.name) << ',' << format_double(lm.geo.lat) << ',' << format_double(lm.geo.lon)
        << ',' << format_double(lm.sigma) << '\n';
}

void write_landmark_csv(const std::filesystem::path& path, const std::vector<Landmark>& landmarks) {
  auto out = open_output(path);
  write_landmark_csv(out, landmarks);
}

}  // namespace semmap
