#pragma once

#include "semmap/projection.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace semmap {

// "SSCM" binary raster: 4-byte magic, little-endian u32 height, width,
// channels (always 19), then height*width*19 little-endian float32 values,
// row-major and channel-last.

ScoreRaster read_raster(std::istream& in, const std::string& source = "<stream>");
ScoreRaster read_raster(const std::filesystem::path& path);

void write_raster(std::ostream& out, const ScoreRaster& raster);
void write_raster(const std::filesystem::path& path, const ScoreRaster& raster);

}  // namespace semmap
