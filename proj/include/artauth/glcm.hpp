#pragma once

#include <span>
#include <vector>

#include "artauth/raster.hpp"

namespace artauth {

struct GlcmOffset {
  int distance;  ///< pixels
  int angle;     ///< degrees, one of 0, 45, 90, 135

  friend bool operator==(const GlcmOffset&, const GlcmOffset&) = default;
};

/// Column/row displacement for an offset. 0 deg points right, 90 deg up.
struct Displacement {
  int dx;
  int dy;
};
Displacement displacement(GlcmOffset offset);

/// Pooled, symmetric, normalised grey-level co-occurrence matrix.
struct GlcmMatrix {
  int levels = 0;
  std::vector<double> probs;  ///< levels x levels, row-major
  std::vector<GlcmOffset> offsets;

  double operator()(int i, int j) const { return probs[static_cast<std::size_t>(i) * levels + j]; }
};

/// The 8 (distance, angle) pairs used by the feature pipeline: d in {1,2},
/// angle in {0,45,90,135}.
std::vector<GlcmOffset> default_glcm_offsets();

/// Accumulates co-occurrence counts over every offset, counting each pair in
/// both directions, then normalises the pooled matrix to sum 1.
/// `quantised` must hold level indices in [0, levels).
GlcmMatrix compute_glcm(const RasterImage& quantised, int levels, std::span<const int> distances,
                        std::span<const int> angles);
GlcmMatrix compute_glcm(const RasterImage& quantised, int levels, std::span<const GlcmOffset> offsets);

double glcm_contrast(const GlcmMatrix& g);
double glcm_homogeneity(const GlcmMatrix& g);
double glcm_energy(const GlcmMatrix& g);

/// True when a marginal standard deviation is (numerically) zero, in which
/// case glcm_correlation returns 0.
bool glcm_correlation_degenerate(const GlcmMatrix& g);
double glcm_correlation(const GlcmMatrix& g);

}  // namespace artauth
