#include "qimg/pgm.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include "qimg/common.hpp"
#include "qimg/report.hpp"

namespace qimg {

namespace {

// Skips whitespace and '#' comment lines between header tokens.
void skip_separators(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const std::string& path,
                    const char* what) {
  skip_separators(in);
  int v = 0;
  if (!(in >> v)) {
    throw IoError(path + ": missing or malformed " + std::string(what));
  }
  return v;
}

}  // namespace

Pgm read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");

  std::string magic;
  in >> magic;
  if (magic != "P2" && magic != "P5") {
    throw IoError(path + ": not a P2/P5 PGM file");
  }

  Pgm img;
  img.width = read_header_int(in, path, "width");
  img.height = read_header_int(in, path, "height");
  img.maxval = read_header_int(in, path, "maxval");
  if (img.width <= 0 || img.height <= 0) {
    throw IoError(path + ": non-positive dimensions");
  }
  if (img.maxval < 1 || img.maxval > 255) {
    throw IoError(path + ": only 8-bit data supported (maxval 1..255), got " +
                  std::to_string(img.maxval));
  }

  const std::size_t count =
      static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  img.pixels.resize(count);

  if (magic == "P5") {
    // Exactly one whitespace byte separates the header from the raster.
    int c = in.get();
    if (c == EOF || !std::isspace(c)) {
      throw IoError(path + ": malformed raster separator");
    }
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
      throw IoError(path + ": truncated raster");
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const int v = read_header_int(in, path, "pixel value");
      if (v < 0 || v > img.maxval) {
        throw IoError(path + ": pixel value " + std::to_string(v) +
                      " out of range");
      }
      img.pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  for (std::uint8_t v : img.pixels) {
    if (v > img.maxval) {
      throw IoError(path + ": pixel value exceeds maxval");
    }
  }
  return img;
}

void write_pgm(const std::string& path, const Pgm& img, bool binary) {
  const std::size_t count =
      static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  if (img.width <= 0 || img.height <= 0 || img.pixels.size() != count) {
    throw ValidationError("write_pgm: inconsistent image dimensions");
  }

  std::string bytes;
  if (binary) {
    bytes = "P5\n" + std::to_string(img.width) + " " +
            std::to_string(img.height) + "\n255\n";
    bytes.append(reinterpret_cast<const char*>(img.pixels.data()),
                 img.pixels.size());
  } else {
    std::ostringstream out;
    out << "P2\n" << img.width << " " << img.height << "\n255\n";
    for (int row = 0; row < img.height; ++row) {
      for (int col = 0; col < img.width; ++col) {
        out << static_cast<int>(
            img.pixels[static_cast<std::size_t>(row) *
                           static_cast<std::size_t>(img.width) +
                       static_cast<std::size_t>(col)]);
        out << (col + 1 == img.width ? '\n' : ' ');
      }
    }
    bytes = out.str();
  }
  write_file_atomic(path, bytes);
}

}  // namespace qimg
