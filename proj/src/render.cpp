#include "tmfractal/render.hpp"

#include <algorithm>

#include "tmfractal/errors.hpp"

namespace tmfractal {

namespace {

void check_spec(const ImageSpec& spec) {
  if (spec.scale < 1) throw ValidationError("scale must be >= 1");
  if (spec.gutter < 0) throw ValidationError("gutter must be >= 0");
}

void check_diagram(const DiagramBitmap& diagram) {
  if (diagram.width == 0 || diagram.rows == 0) {
    throw ValidationError("cannot render an empty diagram");
  }
  if (diagram.bits.size() != diagram.width * diagram.rows) {
    throw ValidationError("diagram bit buffer does not match its dimensions");
  }
}

// Copies diagram into image at column offset x0, scaled.
void blit(const DiagramBitmap& diagram, std::size_t scale, Bitmap& image, std::size_t x0) {
  for (std::size_t r = 0; r < diagram.rows; ++r) {
    for (std::size_t c = 0; c < diagram.width; ++c) {
      if (!diagram.at(r, c)) continue;
      for (std::size_t dy = 0; dy < scale; ++dy) {
        auto* row = &image.pixels[(r * scale + dy) * image.width + x0 + c * scale];
        std::fill_n(row, scale, std::uint8_t{1});
      }
    }
  }
}

}  // namespace

Bitmap scale_diagram(const DiagramBitmap& diagram, const ImageSpec& spec) {
  check_spec(spec);
  check_diagram(diagram);
  const auto scale = static_cast<std::size_t>(spec.scale);
  Bitmap image;
  image.width = diagram.width * scale;
  image.height = diagram.rows * scale;
  image.pixels.assign(image.width * image.height, 0);
  blit(diagram, scale, image, 0);
  return image;
}

std::string encode_pbm(const Bitmap& image) {
  if (image.width == 0 || image.height == 0) {
    throw ValidationError("cannot encode a zero-size image");
  }
  std::string out = "P4\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n";
  const std::size_t row_bytes = (image.width + 7) / 8;
  std::string row(row_bytes, '\0');
  for (std::size_t y = 0; y < image.height; ++y) {
    std::fill(row.begin(), row.end(), '\0');
    for (std::size_t x = 0; x < image.width; ++x) {
      if (image.pixels[y * image.width + x]) {
        row[x / 8] = static_cast<char>(row[x / 8] | (0x80 >> (x % 8)));
      }
    }
    out += row;
  }
  return out;
}

std::string diagram_to_pbm(const DiagramBitmap& diagram, const ImageSpec& spec) {
  return encode_pbm(scale_diagram(diagram, spec));
}

std::string stack_diagrams(std::span<const DiagramBitmap> diagrams, const ImageSpec& spec) {
  check_spec(spec);
  if (diagrams.empty()) throw ValidationError("no diagrams to stack");
  const auto scale = static_cast<std::size_t>(spec.scale);
  const auto gutter = static_cast<std::size_t>(spec.gutter);
  std::size_t cells_wide = 0;
  std::size_t rows = 0;
  for (const DiagramBitmap& d : diagrams) {
    check_diagram(d);
    cells_wide += d.width;
    rows = std::max(rows, d.rows);
  }
  cells_wide += gutter * (diagrams.size() - 1);

  Bitmap image;
  image.width = cells_wide * scale;
  image.height = rows * scale;
  image.pixels.assign(image.width * image.height, 0);
  std::size_t x0 = 0;
  for (const DiagramBitmap& d : diagrams) {
    blit(d, scale, image, x0);
    x0 += (d.width + gutter) * scale;
  }
  return encode_pbm(image);
}

}  // namespace tmfractal
