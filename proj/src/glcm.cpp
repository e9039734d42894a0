#include "artauth/glcm.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>

#include "artauth/error.hpp"

namespace artauth {

namespace {
constexpr double kDegenerateSigma = 1e-12;

struct Marginal {
  double mean;
  double sigma;
};

// The pooled matrix is symmetric, so the row and column marginals coincide.
Marginal marginal(const GlcmMatrix& g) {
  const int L = g.levels;
  double mean = 0.0;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) mean += i * g(i, j);
  double var = 0.0;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) var += (i - mean) * (i - mean) * g(i, j);
  return {mean, std::sqrt(var)};
}
}  // namespace

Displacement displacement(GlcmOffset offset) {
  const int d = offset.distance;
  switch (offset.angle) {
    case 0:
      return {d, 0};
    case 45:
      return {d, -d};
    case 90:
      return {0, -d};
    case 135:
      return {-d, -d};
    default:
      throw InputError("GLCM angle must be one of 0, 45, 90, 135; got " + std::to_string(offset.angle));
  }
}

std::vector<GlcmOffset> default_glcm_offsets() {
  std::vector<GlcmOffset> out;
  for (int d : {1, 2})
    for (int a : {0, 45, 90, 135}) out.push_back({d, a});
  return out;
}

GlcmMatrix compute_glcm(const RasterImage& quantised, int levels, std::span<const int> distances,
                        std::span<const int> angles) {
  if (distances.empty() || angles.empty()) throw InputError("GLCM needs at least one distance and one angle");
  std::vector<GlcmOffset> offsets;
  for (int d : distances)
    for (int a : angles) offsets.push_back({d, a});
  return compute_glcm(quantised, levels, offsets);
}

GlcmMatrix compute_glcm(const RasterImage& quantised, int levels, std::span<const GlcmOffset> offsets) {
  if (!quantised.is_gray()) throw InputError("GLCM requires a single-channel quantised image");
  if (levels < 2 || levels > 256) throw InputError("GLCM levels must be in [2, 256]");
  if (offsets.empty()) throw InputError("GLCM needs at least one offset");

  const int w = quantised.width();
  const int h = quantised.height();
  for (std::uint16_t p : quantised.pixels()) {
    if (p >= levels) throw InputError("GLCM input contains level " + std::to_string(p) + " >= " + std::to_string(levels));
  }

  std::vector<std::uint64_t> counts(static_cast<std::size_t>(levels) * levels, 0);
  for (const GlcmOffset& off : offsets) {
    if (off.distance < 1) throw InputError("GLCM distance must be >= 1");
    const auto [dx, dy] = displacement(off);
    if (std::abs(dx) >= w || std::abs(dy) >= h) {
      throw InputError("image " + std::to_string(w) + "x" + std::to_string(h) + " too small for GLCM offset (d=" +
                       std::to_string(off.distance) + ", angle=" + std::to_string(off.angle) + ")");
    }
    const int y0 = dy < 0 ? -dy : 0;
    const int y1 = dy > 0 ? h - dy : h;
    const int x0 = dx < 0 ? -dx : 0;
    const int x1 = dx > 0 ? w - dx : w;
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        const std::size_t a = quantised.at(x, y);
        const std::size_t b = quantised.at(x + dx, y + dy);
        ++counts[a * levels + b];
        ++counts[b * levels + a];
      }
    }
  }

  std::uint64_t total = 0;
  for (auto c : counts) total += c;

  GlcmMatrix g;
  g.levels = levels;
  g.offsets.assign(offsets.begin(), offsets.end());
  g.probs.resize(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    g.probs[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  }
  return g;
}

double glcm_contrast(const GlcmMatrix& g) {
  double s = 0.0;
  for (int i = 0; i < g.levels; ++i)
    for (int j = 0; j < g.levels; ++j) s += static_cast<double>((i - j) * (i - j)) * g(i, j);
  return s;
}

double glcm_homogeneity(const GlcmMatrix& g) {
  double s = 0.0;
  for (int i = 0; i < g.levels; ++i)
    for (int j = 0; j < g.levels; ++j) s += g(i, j) / (1.0 + std::abs(i - j));
  return s;
}

double glcm_energy(const GlcmMatrix& g) {
  double s = 0.0;
  for (double p : g.probs) s += p * p;
  return s;
}

bool glcm_correlation_degenerate(const GlcmMatrix& g) { return marginal(g).sigma < kDegenerateSigma; }

double glcm_correlation(const GlcmMatrix& g) {
  const auto [mean, sigma] = marginal(g);
  if (sigma < kDegenerateSigma) return 0.0;
  double s = 0.0;
  for (int i = 0; i < g.levels; ++i)
    for (int j = 0; j < g.levels; ++j) s += (i - mean) * (j - mean) * g(i, j);
  return s / (sigma * sigma);
}

}  // namespace artauth
