#pragma once

#include <filesystem>
#include <string>

#include "srlab/image_grid.hpp"

namespace srlab {

/// Binary 16-bit PGM (P5, maxval 65535, big-endian samples). Values are
/// rounded half-to-even and clamped to [0, 65535] on write.
void write_pgm(const std::filesystem::path& path, const ImageGrid& image);

/// Encoded form of write_pgm, for callers that want bytes.
std::string encode_pgm(const ImageGrid& image);

/// Reads P5 files with maxval up to 65535 (8- or 16-bit samples).
ImageGrid read_pgm(const std::filesystem::path& path, double pitch = 1.0);

ImageGrid decode_pgm(const std::string& bytes, double pitch = 1.0);

}  // namespace srlab
