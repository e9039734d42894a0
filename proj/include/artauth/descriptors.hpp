#pragma once

#include "artauth/raster.hpp"

namespace artauth {

struct IntensityStatistics {
  double entropy;  ///< bits, over the `levels`-bin quantised histogram
  double energy;   ///< sum of squared histogram probabilities
  double mean;     ///< of intensities normalised to [0, 1]
  double std;      ///< population standard deviation of the same
};

/// Histogram entropy/energy on the L-level quantisation of `gray`; mean/std
/// on the un-quantised intensities divided by the depth maximum.
IntensityStatistics intensity_statistics(const RasterImage& gray, int levels);

enum class HueVarianceMode {
  Circular,  ///< 1 - mean resultant length of hue unit vectors
  Linear,    ///< variance of hue in degrees divided by 180^2
};

struct ColourStatistics {
  double hue_variance;  ///< in [0, 1]
  double saturation_mean;
  double value_mean;
};

struct Hsv {
  double h;  ///< degrees in [0, 360)
  double s;  ///< [0, 1]
  double v;  ///< [0, 1]
};

Hsv rgb_to_hsv(int r, int g, int b);

/// HSV statistics of an RGB image. Achromatic pixels (S = 0) do not take part
/// in the hue statistic; an image with no chromatic pixel has hue variance 0.
ColourStatistics colour_statistics(const RasterImage& rgb, HueVarianceMode mode = HueVarianceMode::Circular);

struct GraySubstitutes {
  double skewness;  ///< population third standardised moment
  double kurtosis;  ///< population excess kurtosis
  double median;    ///< of normalised intensities
};

/// Radiograph stand-ins for the colour trio. A zero-variance image yields
/// skewness = kurtosis = 0.
GraySubstitutes grayscale_substitutes(const RasterImage& gray);

}  // namespace artauth
