#pragma once

// Binary PBM (P4) output of space-time diagrams. Time runs downward: row 0
// is the initial tape. Set bits are black (nonzero) cells.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tmfractal/simulator.hpp"

namespace tmfractal {

struct ImageSpec {
  int scale = 1;   // pixels per cell edge
  int gutter = 2;  // white columns between stacked diagrams, before scaling
};

// Raw 1-bit image: width x height, one byte per pixel.
struct Bitmap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;
};

Bitmap scale_diagram(const DiagramBitmap& diagram, const ImageSpec& spec);
std::string encode_pbm(const Bitmap& image);

std::string diagram_to_pbm(const DiagramBitmap& diagram, const ImageSpec& spec = {});

// Side-by-side montage; shorter diagrams are padded white at the bottom.
std::string stack_diagrams(std::span<const DiagramBitmap> diagrams,
                           const ImageSpec& spec = {});

}  // namespace tmfractal
