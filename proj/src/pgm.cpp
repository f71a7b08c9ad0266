#include "ifgi/pgm.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ifgi/errors.hpp"

namespace ifgi {

namespace {

// Skips whitespace and '#' comments between header tokens.
int next_header_int(std::istream& in, const std::string& path, const char* what) {
  for (;;) {
    const int c = in.peek();
    if (c == EOF) throw IoError(path + ": truncated graymap header (" + what + ")");
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    break;
  }
  long value = 0;
  if (!(in >> value)) throw IoError(path + ": malformed graymap header (" + what + ")");
  return static_cast<int>(value);
}

} // namespace

Pgm read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open graymap");

  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || (m1 != '2' && m1 != '5'))
    throw IoError(path + ": not a P2/P5 graymap");
  const bool binary = (m1 == '5');

  Pgm img;
  img.width = next_header_int(in, path, "width");
  img.height = next_header_int(in, path, "height");
  img.maxval = next_header_int(in, path, "maxval");
  if (img.width < 1 || img.height < 1)
    throw IoError(path + ": graymap dimensions must be positive");
  if (img.maxval < 1 || img.maxval > 65535)
    throw IoError(path + ": graymap maxval must lie in [1,65535]");

  const size_t n = static_cast<size_t>(img.width) * img.height;
  img.pixels.resize(n);

  if (binary) {
    // Single whitespace byte separates maxval from raster data.
    in.get();
    if (img.maxval > 255) {
      std::vector<std::uint8_t> raw(2 * n);
      in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
      if (static_cast<size_t>(in.gcount()) != raw.size())
        throw IoError(path + ": truncated graymap data");
      for (size_t i = 0; i < n; ++i)
        img.pixels[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    } else {
      std::vector<std::uint8_t> raw(n);
      in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
      if (static_cast<size_t>(in.gcount()) != raw.size())
        throw IoError(path + ": truncated graymap data");
      for (size_t i = 0; i < n; ++i) img.pixels[i] = raw[i];
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      long v = 0;
      if (!(in >> v)) throw IoError(path + ": truncated graymap data");
      if (v < 0 || v > img.maxval)
        throw IoError(path + ": sample outside [0,maxval]");
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  }

  for (const std::uint16_t v : img.pixels)
    if (v > img.maxval) throw IoError(path + ": sample outside [0,maxval]");
  return img;
}

void write_pgm(const std::string& path, const Pgm& image, PgmFormat format) {
  if (image.width < 1 || image.height < 1)
    throw ContractError("graymap dimensions must be positive");
  if (image.maxval < 1 || image.maxval > 65535)
    throw ContractError("graymap maxval must lie in [1,65535]");
  if (image.pixels.size() != static_cast<size_t>(image.width) * image.height)
    throw ContractError("graymap pixel count mismatches dimensions");
  for (const std::uint16_t v : image.pixels)
    if (v > image.maxval) throw ContractError("graymap sample exceeds maxval");

  std::ostringstream out;
  const bool binary = (format == PgmFormat::binary);
  out << (binary ? "P5" : "P2") << "\n"
      << image.width << " " << image.height << "\n"
      << image.maxval << "\n";
  if (binary) {
    if (image.maxval > 255) {
      for (const std::uint16_t v : image.pixels) {
        out.put(static_cast<char>(v >> 8));
        out.put(static_cast<char>(v & 0xff));
      }
    } else {
      for (const std::uint16_t v : image.pixels) out.put(static_cast<char>(v & 0xff));
    }
  } else {
    for (int y = 0; y < image.height; ++y) {
      for (int x = 0; x < image.width; ++x) {
        out << image.at(x, y) << (x + 1 == image.width ? "" : " ");
      }
      out << "\n";
    }
  }

  const std::string tmp = path + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError(tmp + ": cannot open for writing");
    const std::string payload = out.str();
    file.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!file) throw IoError(tmp + ": write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(path + ": rename failed: " + ec.message());
}

} // namespace ifgi
