#pragma once

#include <filesystem>

#include "artauth/raster.hpp"

namespace artauth {

/// Decodes a PNG, JPEG or TIFF file. 8-bit gray, 8-bit RGB(A) and 16-bit gray
/// are accepted; 16-bit data keeps its full depth. Throws InputError otherwise.
RasterImage load_image(const std::filesystem::path& path);

/// Writes a lossless PNG (8-bit gray, 16-bit gray or RGB).
void save_png(const std::filesystem::path& path, const RasterImage& image);

}  // namespace artauth
