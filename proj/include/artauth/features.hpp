#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "artauth/descriptors.hpp"
#include "artauth/preprocess.hpp"
#include "artauth/raster.hpp"

namespace artauth {

enum class Modality { Visual, Xray };

std::string_view to_string(Modality m);
Modality parse_modality(std::string_view text);

inline constexpr std::size_t kFeatureCount = 14;

/// Bumped whenever descriptor definitions or ordering change. Model files
/// record it so a model is never scored against an incompatible extractor.
inline constexpr int kFeatureSchemaVersion = 1;

/// Descriptor names in vector order for one modality. The first eleven are
/// shared; the last three are the colour trio (visual) or the grayscale
/// substitutes (X-ray).
const std::array<std::string_view, kFeatureCount>& feature_schema(Modality m);

struct FeatureVector {
  Modality modality = Modality::Visual;
  int schema_version = kFeatureSchemaVersion;
  std::array<double, kFeatureCount> values{};
  /// Non-fatal extraction events (e.g. degenerate GLCM correlation).
  std::vector<std::string> notes;

  const std::array<std::string_view, kFeatureCount>& schema() const { return feature_schema(modality); }
};

struct ExtractionConfig {
  PreprocessConfig preprocess;
  HueVarianceMode hue_mode = HueVarianceMode::Circular;
};

/// Intermediate rasters of the preprocessing chain.
struct PreparedImage {
  RasterImage equalised;               ///< grayscale after resize, exposure stretch (X-ray) and CLAHE
  RasterImage quantised;               ///< `equalised` reduced to gray_levels
  std::optional<RasterImage> colour;   ///< resized, un-equalised RGB (visual only)
};

/// Visual: resize -> grayscale -> CLAHE; the resized RGB image is kept for HSV
/// statistics. X-ray: grayscale -> resize -> min-max exposure stretch -> CLAHE.
PreparedImage prepare_image(const RasterImage& image, Modality modality, const PreprocessConfig& cfg);

/// Full 14-descriptor extraction for one image.
FeatureVector extract_features(const RasterImage& image, Modality modality, const ExtractionConfig& cfg = {});

}  // namespace artauth
