#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qimg {

// Raw netpbm grayscale container. Validation against the square
// power-of-two image model happens at the GrayImage boundary, not here.
struct Pgm {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint8_t> pixels;
};

// Reads P2 (ASCII) or P5 (binary), 8-bit only (maxval <= 255). Throws
// IoError on missing or corrupt files.
Pgm read_pgm(const std::string& path);

// Writes P5 by default, P2 when binary=false, always maxval 255. Atomic:
// the file appears under its final name only once fully written.
void write_pgm(const std::string& path, const Pgm& img, bool binary = true);

}  // namespace qimg
