#include "srlab/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace srlab {
namespace {

// Whitespace and '#' comments between header tokens.
void skip_separators(const std::string& s, std::size_t& pos) {
  while (pos < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    } else if (s[pos] == '#') {
      while (pos < s.size() && s[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
}

long read_header_int(const std::string& s, std::size_t& pos) {
  skip_separators(s, pos);
  const std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    ++pos;
  }
  if (start == pos) throw std::runtime_error("PGM: malformed header");
  return std::stol(s.substr(start, pos - start));
}

}  // namespace

std::string encode_pgm(const ImageGrid& image) {
  std::ostringstream header;
  header << "P5\n" << image.width() << ' ' << image.height() << "\n65535\n";
  std::string out = header.str();
  out.reserve(out.size() + image.count() * 2);
  for (double v : image.data()) {
    // nearbyint honours the default round-to-nearest-even mode.
    const double q = std::clamp(std::nearbyint(v), 0.0, 65535.0);
    const auto u = static_cast<unsigned>(q);
    out.push_back(static_cast<char>((u >> 8) & 0xFF));
    out.push_back(static_cast<char>(u & 0xFF));
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const ImageGrid& image) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open for writing: " + path.string());
  const std::string bytes = encode_pgm(image);
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw std::runtime_error("write failed: " + path.string());
}

ImageGrid decode_pgm(const std::string& bytes, double pitch) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw std::runtime_error("PGM: not a binary P5 file");
  }
  std::size_t pos = 2;
  const long width = read_header_int(bytes, pos);
  const long height = read_header_int(bytes, pos);
  const long maxval = read_header_int(bytes, pos);
  if (maxval < 1 || maxval > 65535) throw std::runtime_error("PGM: bad maxval");
  ++pos;  // single whitespace before raster
  const std::size_t bps = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (bytes.size() < pos + n * bps) throw std::runtime_error("PGM: truncated");
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos + i * bps);
    data[i] = bps == 2 ? (p[0] << 8) | p[1] : p[0];
  }
  return ImageGrid(static_cast<int>(height), static_cast<int>(width),
                   std::move(data), pitch);
}

ImageGrid read_pgm(const std::filesystem::path& path, double pitch) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open image: " + path.string());
  std::ostringstream buf;
  buf << file.rdbuf();
  return decode_pgm(buf.str(), pitch);
}

}  // namespace srlab
