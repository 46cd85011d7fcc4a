#include "semmap/raster_io.hpp"

#include "semmap/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace semmap {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'S', 'C', 'M'};
// Guards against absurd headers before allocating.
constexpr std::uint64_t kMaxValues = std::uint64_t{1} << 31;

std::uint32_t decode_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void encode_u32(std::uint32_t v, unsigned char* b) {
  b[0] = static_cast<unsigned char>(v & 0xff);
  b[1] = static_cast<unsigned char>((v >> 8) & 0xff);
  b[2] = static_cast<unsigned char>((v >> 16) & 0xff);
  b[3] = static_cast<unsigned char>((v >> 24) & 0xff);
}

}  // namespace

ScoreRaster read_raster(std::istream& in, const std::string& source) {
  std::array<unsigned char, 16> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size()))
    throw ParseError(source, 0, "truncated raster header");
  for (std::size_t i = 0; i < kMagic.size(); ++i)
    if (header[i] != static_cast<unsigned char>(kMagic[i]))
      throw ParseError(source, 0, "bad magic, expected \"SSCM\"");
  const std::uint32_t height = decode_u32(header.data() + 4);
  const std::uint32_t width = decode_u32(header.data() + 8);
  const std::uint32_t channels = decode_u32(header.data() + 12);
  if (channels != kNumLabels)
    throw ParseError(source, 0, "raster has " + std::to_string(channels) + " channels, expected 19");
  const std::uint64_t count = std::uint64_t{height} * width * channels;
  if (count > kMaxValues) throw ParseError(source, 0, "raster dimensions too large");

  const std::uint64_t payload = count * 4;
  // Compare against the real stream length first so a corrupt header cannot
  // trigger a huge allocation.
  if (const auto pos = in.tellg(); pos != std::streampos(-1)) {
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(pos);
    if (end != std::streampos(-1)) {
      const auto remaining = static_cast<std::uint64_t>(end - pos);
      if (remaining < payload) throw ParseError(source, 0, "truncated raster payload");
      if (remaining > payload) throw ParseError(source, 0, "trailing bytes after raster payload");
    }
  }
  std::vector<unsigned char> bytes;
  constexpr std::uint64_t kChunk = std::uint64_t{1} << 20;
  while (bytes.size() < payload) {
    const std::size_t offset = bytes.size();
    const auto n = static_cast<std::size_t>(std::min(kChunk, payload - offset));
    bytes.resize(offset + n);
    if (!in.read(reinterpret_cast<char*>(bytes.data() + offset), static_cast<std::streamsize>(n)))
      throw ParseError(source, 0, "truncated raster payload");
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw ParseError(source, 0, "trailing bytes after raster payload");

  std::vector<float> scores(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const float v = std::bit_cast<float>(decode_u32(bytes.data() + 4 * i));
    if (!std::isfinite(v) || v < 0.0f)
      throw ParseError(source, 0, "score value " + std::to_string(i) + " is negative or non-finite");
    scores[i] = v;
  }
  return ScoreRaster(height, width, std::move(scores));
}

ScoreRaster read_raster(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open raster file");
  return read_raster(in, path.string());
}

void write_raster(std::ostream& out, const ScoreRaster& raster) {
  if (raster.height() > std::numeric_limits<std::uint32_t>::max() ||
      raster.width() > std::numeric_limits<std::uint32_t>::max())
    throw InvalidArgumentError("raster too large for SSCM");
  std::vector<unsigned char> buf(16 + raster.data().size() * 4);
  std::copy(kMagic.begin(), kMagic.end(), buf.begin());
  encode_u32(static_cast<std::uint32_t>(raster.height()), buf.data() + 4);
  encode_u32(static_cast<std::uint32_t>(raster.width()), buf.data() + 8);
  encode_u32(static_cast<std::uint32_t>(kNumLabels), buf.data() + 12);
  for (std::size_t i = 0; i < raster.data().size(); ++i)
    encode_u32(std::bit_cast<std::uint32_t>(raster.data()[i]), buf.data() + 16 + 4 * i);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

void write_raster(const std::filesystem::path& path, const ScoreRaster& raster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_raster(out, raster);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace semmap
