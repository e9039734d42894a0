#include "artauth/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "artauth/error.hpp"
#include "artauth/preprocess.hpp"

namespace artauth {

IntensityStatistics intensity_statistics(const RasterImage& gray, int levels) {
  if (!gray.is_gray()) throw InputError("intensity statistics require a single-channel image");
  const RasterImage q = quantise(gray, levels);

  std::vector<std::uint64_t> hist(levels, 0);
  for (std::uint16_t p : q.pixels()) ++hist[p];
  const double n = static_cast<double>(gray.pixel_count());

  IntensityStatistics s{};
  for (auto c : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    s.entropy -= p * std::log2(p);
    s.energy += p * p;
  }
  // -0.0 for a point histogram reads oddly in CSV output.
  if (s.entropy == 0.0) s.entropy = 0.0;

  // Integer moments keep a flat image at exactly zero spread.
  const double top = gray.max_value();
  std::uint64_t sum = 0;
  unsigned __int128 sum_sq = 0;
  for (std::uint16_t p : gray.pixels()) {
    sum += p;
    sum_sq += static_cast<unsigned __int128>(p) * p;
  }
  const auto count = static_cast<unsigned __int128>(gray.pixel_count());
  const unsigned __int128 spread = count * sum_sq - static_cast<unsigned __int128>(sum) * sum;  // n^2 var
  s.mean = static_cast<double>(sum) / n / top;
  s.std = std::sqrt(static_cast<double>(spread)) / n / top;
  return s;
}

Hsv rgb_to_hsv(int r, int g, int b) {
  const int mx = std::max({r, g, b});
  const int mn = std::min({r, g, b});
  Hsv out{0.0, 0.0, mx / 255.0};
  if (mx == 0) return out;
  const int delta = mx - mn;
  out.s = static_cast<double>(delta) / mx;
  if (delta == 0) return out;
  double h;
  if (mx == r) {
    h = 60.0 * static_cast<double>(g - b) / delta;
  } else if (mx == g) {
    h = 60.0 * (2.0 + static_cast<double>(b - r) / delta);
  } else {
    h = 60.0 * (4.0 + static_cast<double>(r - g) / delta);
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

ColourStatistics colour_statistics(const RasterImage& rgb, HueVarianceMode mode) {
  if (rgb.format() != PixelFormat::Rgb8) {
    throw InputError("colour statistics require an RGB image; use grayscale_substitutes for gray input");
  }
  const double n = static_cast<double>(rgb.pixel_count());
  double sat = 0.0;
  double val = 0.0;
  double cos_sum = 0.0;
  double sin_sum = 0.0;
  std::vector<double> hues;
  std::size_t chromatic = 0;

  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      const Hsv c = rgb_to_hsv(rgb.at(x, y, 0), rgb.at(x, y, 1), rgb.at(x, y, 2));
      sat += c.s;
      val += c.v;
      if (c.s > 0.0) {
        ++chromatic;
        if (mode == HueVarianceMode::Circular) {
          const double rad = c.h * std::numbers::pi / 180.0;
          cos_sum += std::cos(rad);
          sin_sum += std::sin(rad);
        } else {
          hues.push_back(c.h);
        }
      }
    }
  }

  ColourStatistics out{0.0, sat / n, val / n};
  if (chromatic == 0) return out;
  const double m = static_cast<double>(chromatic);
  if (mode == HueVarianceMode::Circular) {
    const double resultant = std::hypot(cos_sum / m, sin_sum / m);
    out.hue_variance = std::clamp(1.0 - resultant, 0.0, 1.0);
  } else {
    double mean = 0.0;
    for (double h : hues) mean += h;
    mean /= m;
    double var = 0.0;
    for (double h : hues) var += (h - mean) * (h - mean);
    out.hue_variance = (var / m) / (180.0 * 180.0);
  }
  return out;
}

GraySubstitutes grayscale_substitutes(const RasterImage& gray) {
  if (!gray.is_gray()) throw InputError("grayscale substitutes require a single-channel image");
  const double top = gray.max_value();
  const double n = static_cast<double>(gray.pixel_count());

  double mean = 0.0;
  for (std::uint16_t p : gray.pixels()) mean += p / top;
  mean /= n;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (std::uint16_t p : gray.pixels()) {
    const double d = p / top - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;

  GraySubstitutes out{0.0, 0.0, 0.0};
  const double sigma = std::sqrt(m2);
  if (sigma >= 1e-12) {
    out.skewness = m3 / (m2 * sigma);
    out.kurtosis = m4 / (m2 * m2) - 3.0;
  }

  std::vector<std::uint16_t> sorted(gray.pixels().begin(), gray.pixels().end());
  const std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
  double median = sorted[mid];
  if (sorted.size() % 2 == 0) {
    const auto lower = *std::max_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  out.median = median / top;
  return out;
}

}  // namespace artauth
