#include "artauth/raster.hpp"

#include <string>

#include "artauth/error.hpp"

namespace artauth {

int channel_count(PixelFormat format) { return format == PixelFormat::Rgb8 ? 3 : 1; }

std::uint16_t depth_max(PixelFormat format) { return format == PixelFormat::Gray16 ? 65535 : 255; }

std::string_view to_string(PixelFormat format) {
  switch (format) {
    case PixelFormat::Gray8:
      return "Gray8";
    case PixelFormat::Gray16:
      return "Gray16";
    case PixelFormat::Rgb8:
      return "Rgb8";
  }
  return "?";
}

RasterImage::RasterImage(int width, int height, PixelFormat format, std::vector<std::uint16_t> pixels)
    : width_(width), height_(height), format_(format), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) {
    throw InputError("raster dimensions must be positive, got " + std::to_string(width) + "x" +
                     std::to_string(height));
  }
  const std::size_t expected = static_cast<std::size_t>(width) * height * channel_count(format);
  if (pixels_.size() != expected) {
    throw InputError("raster pixel buffer has " + std::to_string(pixels_.size()) + " entries, expected " +
                     std::to_string(expected));
  }
  const std::uint16_t top = depth_max(format);
  for (std::uint16_t p : pixels_) {
    if (p > top) throw InputError("pixel value exceeds depth of " + std::string(to_string(format)));
  }
}

RasterImage RasterImage::filled(int width, int height, PixelFormat format, std::uint16_t value) {
  const std::size_t n =
      static_cast<std::size_t>(width > 0 ? width : 0) * (height > 0 ? height : 0) * channel_count(format);
  return RasterImage(width, height, format, std::vector<std::uint16_t>(n, value));
}

}  // namespace artauth
