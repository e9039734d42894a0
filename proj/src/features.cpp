#include "artauth/features.hpp"

#include <cmath>

#include "artauth/error.hpp"
#include "artauth/glcm.hpp"
#include "artauth/lbp.hpp"

namespace artauth {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kVisualSchema{
    "glcm_contrast", "glcm_homogeneity", "glcm_energy",     "glcm_correlation", "lbp_mean",
    "lbp_variance",  "lbp_uniformity",   "entropy",         "intensity_energy", "intensity_mean",
    "intensity_std", "hue_variance",     "saturation_mean", "value_mean",
};

constexpr std::array<std::string_view, kFeatureCount> kXraySchema{
    "glcm_contrast", "glcm_homogeneity", "glcm_energy", "glcm_correlation", "lbp_mean",
    "lbp_variance",  "lbp_uniformity",   "entropy",     "intensity_energy", "intensity_mean",
    "intensity_std", "skewness",         "kurtosis",    "median",
};

}  // namespace

std::string_view to_string(Modality m) { return m == Modality::Visual ? "visual" : "xray"; }

Modality parse_modality(std::string_view text) {
  if (text == "visual") return Modality::Visual;
  if (text == "xray") return Modality::Xray;
  throw InputError("unknown modality '" + std::string(text) + "' (expected visual or xray)");
}

const std::array<std::string_view, kFeatureCount>& feature_schema(Modality m) {
  return m == Modality::Visual ? kVisualSchema : kXraySchema;
}

PreparedImage prepare_image(const RasterImage& image, Modality modality, const PreprocessConfig& cfg) {
  cfg.validate();
  if (modality == Modality::Visual) {
    RasterImage colour = to_rgb(resize_bicubic(image, cfg.target_size));
    RasterImage equalised = apply_clahe(to_grayscale(colour), cfg);
    RasterImage q = quantise(equalised, cfg.gray_levels);
    return {std::move(equalised), std::move(q), std::move(colour)};
  }
  RasterImage gray = resize_bicubic(to_grayscale(image), cfg.target_size);
  RasterImage equalised = apply_clahe(stretch_to_full_depth(gray), cfg);
  RasterImage q = quantise(equalised, cfg.gray_levels);
  return {std::move(equalised), std::move(q), std::nullopt};
}

FeatureVector extract_features(const RasterImage& image, Modality modality, const ExtractionConfig& cfg) {
  const PreparedImage prepared = prepare_image(image, modality, cfg.preprocess);

  FeatureVector fv;
  fv.modality = modality;
  auto& v = fv.values;

  const auto offsets = default_glcm_offsets();
  const GlcmMatrix g = compute_glcm(prepared.quantised, cfg.preprocess.gray_levels, offsets);
  v[0] = glcm_contrast(g);
  v[1] = glcm_homogeneity(g);
  v[2] = glcm_energy(g);
  v[3] = glcm_correlation(g);
  if (glcm_correlation_degenerate(g)) fv.notes.emplace_back("glcm_correlation: degenerate marginal, set to 0");

  const LbpStatistics lbp = lbp_statistics(compute_lbp_riu2(prepared.equalised));
  v[4] = lbp.mean;
  v[5] = lbp.variance;
  v[6] = lbp.uniformity;

  const IntensityStatistics is = intensity_statistics(prepared.equalised, cfg.preprocess.gray_levels);
  v[7] = is.entropy;
  v[8] = is.energy;
  v[9] = is.mean;
  v[10] = is.std;

  if (modality == Modality::Visual) {
    const ColourStatistics cs = colour_statistics(*prepared.colour, cfg.hue_mode);
    v[11] = cs.hue_variance;
    v[12] = cs.saturation_mean;
    v[13] = cs.value_mean;
  } else {
    const GraySubstitutes gs = grayscale_substitutes(prepared.equalised);
    v[11] = gs.skewness;
    v[12] = gs.kurtosis;
    v[13] = gs.median;
  }

  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!std::isfinite(v[i])) throw NumericalError("non-finite descriptor " + std::string(fv.schema()[i]));
  }
  return fv;
}

}  // namespace artauth
