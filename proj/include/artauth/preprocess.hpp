#pragma once

#include "artauth/raster.hpp"

namespace artauth {

struct PreprocessConfig {
  int target_size = 512;          ///< square output edge in pixels
  double clahe_clip_limit = 2.0;  ///< multiple of the mean tile-histogram height
  int clahe_tile_grid = 8;        ///< tiles per axis
  int gray_levels = 32;           ///< L used for GLCM and histogram statistics

  /// Throws InputError when any field is out of range.
  void validate() const;
};

/// Separable Keys bicubic (a = -0.5) with pixel-centre alignment and
/// replicated borders. Applied per channel; output is clamped to the depth
/// range and rounded to nearest. Equal-size input is returned unchanged.
RasterImage resize_bicubic(const RasterImage& image, int target_width, int target_height);
inline RasterImage resize_bicubic(const RasterImage& image, int target_size) {
  return resize_bicubic(image, target_size, target_size);
}

/// Contrast limited adaptive histogram equalisation on a single-channel image.
///
/// The image is split into clahe_tile_grid x clahe_tile_grid tiles (virtually
/// padded by reflection when the size is not a multiple of the grid). Each
/// tile histogram over the full depth range is clipped at
/// max(1, floor(clip * tile_area / bins)); the clipped mass is spread evenly,
/// with any remainder handed out at a fixed stride from bin 0. Pixels are then
/// mapped by bilinear interpolation between the four nearest tile LUTs.
RasterImage apply_clahe(const RasterImage& image, const PreprocessConfig& cfg);

/// Luminance 0.299R + 0.587G + 0.114B, rounded half-up. Gray input is
/// returned unchanged.
RasterImage to_grayscale(const RasterImage& image);

/// Replicates a gray8 image into three channels. Gray16 is reduced to 8 bits
/// first (value >> 8). RGB input is returned unchanged.
RasterImage to_rgb(const RasterImage& image);

/// Maps every pixel p to floor(p * levels / (depth_max + 1)).
RasterImage quantise(const RasterImage& image, int levels);

/// Linear min-max stretch of a single-channel image to its full depth range.
/// Used as the radiograph exposure correction. Constant images are returned
/// unchanged.
RasterImage stretch_to_full_depth(const RasterImage& image);

}  // namespace artauth
