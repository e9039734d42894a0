#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace artauth {

enum class PixelFormat { Gray8, Gray16, Rgb8 };

int channel_count(PixelFormat format);

/// Largest representable intensity: 255 for 8-bit formats, 65535 for Gray16.
std::uint16_t depth_max(PixelFormat format);

std::string_view to_string(PixelFormat format);

/// Decoded image. Pixels are row-major and interleaved for RGB; every format
/// is stored in 16-bit slots so 8- and 16-bit rasters share one code path.
class RasterImage {
 public:
  RasterImage(int width, int height, PixelFormat format, std::vector<std::uint16_t> pixels);

  static RasterImage filled(int width, int height, PixelFormat format, std::uint16_t value);

  int width() const { return width_; }
  int height() const { return height_; }
  PixelFormat format() const { return format_; }
  int channels() const { return channel_count(format_); }
  std::uint16_t max_value() const { return depth_max(format_); }
  bool is_gray() const { return format_ != PixelFormat::Rgb8; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  std::uint16_t at(int x, int y, int channel = 0) const {
    return pixels_[index(x, y, channel)];
  }
  void set(int x, int y, int channel, std::uint16_t value) { pixels_[index(x, y, channel)] = value; }
  void set(int x, int y, std::uint16_t value) { set(x, y, 0, value); }

  std::span<const std::uint16_t> pixels() const { return pixels_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y, int channel) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels() + channel;
  }

  int width_;
  int height_;
  PixelFormat format_;
  std::vector<std::uint16_t> pixels_;
};

}  // namespace artauth
