#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ifgi {

/// In-memory portable graymap. maxval <= 65535.
struct Pgm {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> pixels; // row-major, y*width + x

  std::uint16_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

/// Reads P2 (ASCII) or P5 (binary, MSB-first when maxval > 255) graymaps.
/// Throws IoError on missing files or malformed content.
Pgm read_pgm(const std::string& path);

enum class PgmFormat { ascii, binary };

/// Writes atomically (temp file + rename).
void write_pgm(const std::string& path, const Pgm& image, PgmFormat format = PgmFormat::binary);

} // namespace ifgi
