#include "artauth/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "artauth/error.hpp"

namespace artauth {

void PreprocessConfig::validate() const {
  if (target_size < 32) throw InputError("target_size must be >= 32, got " + std::to_string(target_size));
  if (gray_levels < 2 || gray_levels > 256) {
    throw InputError("gray_levels must be in [2, 256], got " + std::to_string(gray_levels));
  }
  if (!(clahe_clip_limit > 0.0) || !std::isfinite(clahe_clip_limit)) {
    throw InputError("clahe_clip_limit must be > 0");
  }
  if (clahe_tile_grid < 1) throw InputError("clahe_tile_grid must be >= 1");
}

namespace {

double cubic_weight(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

struct Taps {
  std::array<int, 4> index;
  std::array<double, 4> weight;
};

std::vector<Taps> make_taps(int src_len, int dst_len) {
  std::vector<Taps> taps(dst_len);
  const double scale = static_cast<double>(src_len) / dst_len;
  for (int d = 0; d < dst_len; ++d) {
    const double s = (d + 0.5) * scale - 0.5;
    const int base = static_cast<int>(std::floor(s));
    const double frac = s - base;
    for (int k = 0; k < 4; ++k) {
      taps[d].index[k] = std::clamp(base - 1 + k, 0, src_len - 1);
      taps[d].weight[k] = cubic_weight(frac - (k - 1));
    }
  }
  return taps;
}

int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

}  // namespace

RasterImage resize_bicubic(const RasterImage& image, int target_width, int target_height) {
  if (target_width <= 0 || target_height <= 0) throw InputError("resize target must be positive");
  if (image.width() == target_width && image.height() == target_height) return image;

  const int sw = image.width();
  const int sh = image.height();
  const int ch = image.channels();
  const double top = image.max_value();
  const auto xt = make_taps(sw, target_width);
  const auto yt = make_taps(sh, target_height);

  // Horizontal pass into a double buffer, then vertical pass.
  std::vector<double> tmp(static_cast<std::size_t>(sh) * target_width * ch);
  for (int y = 0; y < sh; ++y) {
    for (int x = 0; x < target_width; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) acc += xt[x].weight[k] * image.at(xt[x].index[k], y, c);
        tmp[(static_cast<std::size_t>(y) * target_width + x) * ch + c] = acc;
      }
    }
  }

  std::vector<std::uint16_t> out(static_cast<std::size_t>(target_width) * target_height * ch);
  for (int y = 0; y < target_height; ++y) {
    for (int x = 0; x < target_width; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) {
          acc += yt[y].weight[k] * tmp[(static_cast<std::size_t>(yt[y].index[k]) * target_width + x) * ch + c];
        }
        out[(static_cast<std::size_t>(y) * target_width + x) * ch + c] =
            static_cast<std::uint16_t>(std::lround(std::clamp(acc, 0.0, top)));
      }
    }
  }
  return RasterImage(target_width, target_height, image.format(), std::move(out));
}

RasterImage apply_clahe(const RasterImage& image, const PreprocessConfig& cfg) {
  if (!image.is_gray()) throw InputError("CLAHE requires a single-channel image; convert to grayscale first");
  if (!(cfg.clahe_clip_limit > 0.0)) throw InputError("clahe_clip_limit must be > 0");
  if (cfg.clahe_tile_grid < 1) throw InputError("clahe_tile_grid must be >= 1");

  const int w = image.width();
  const int h = image.height();
  const int grid = cfg.clahe_tile_grid;
  const int bins = image.max_value() + 1;
  const int tile_w = (w + grid - 1) / grid;
  const int tile_h = (h + grid - 1) / grid;
  const long long area = static_cast<long long>(tile_w) * tile_h;
  const long long clip =
      std::max<long long>(1, static_cast<long long>(cfg.clahe_clip_limit * static_cast<double>(area) / bins));

  std::vector<std::uint16_t> luts(static_cast<std::size_t>(grid) * grid * bins);
  std::vector<long long> hist(bins);
  for (int ty = 0; ty < grid; ++ty) {
    for (int tx = 0; tx < grid; ++tx) {
      std::fill(hist.begin(), hist.end(), 0);
      for (int y = ty * tile_h; y < (ty + 1) * tile_h; ++y) {
        const int sy = reflect101(y, h);
        for (int x = tx * tile_w; x < (tx + 1) * tile_w; ++x) ++hist[image.at(reflect101(x, w), sy)];
      }

      long long clipped = 0;
      for (auto& c : hist) {
        if (c > clip) {
          clipped += c - clip;
          c = clip;
        }
      }
      const long long batch = clipped / bins;
      long long residual = clipped - batch * bins;
      for (auto& c : hist) c += batch;
      if (residual > 0) {
        const long long step = std::max<long long>(bins / residual, 1);
        for (long long i = 0; i < bins && residual > 0; i += step, --residual) ++hist[i];
      }

      auto* lut = &luts[(static_cast<std::size_t>(ty) * grid + tx) * bins];
      long long sum = 0;
      for (int i = 0; i < bins; ++i) {
        sum += hist[i];
        // round(sum * (bins - 1) / area), half up, in exact integer arithmetic
        const long long v = (2 * sum * (bins - 1) + area) / (2 * area);
        lut[i] = static_cast<std::uint16_t>(std::min<long long>(v, bins - 1));
      }
    }
  }

  auto axis = [grid](int pos, int tile) {
    const double f = (pos + 0.5) / tile - 0.5;
    const int lo = static_cast<int>(std::floor(f));
    const double frac = f - lo;
    return std::tuple{std::clamp(lo, 0, grid - 1), std::clamp(lo + 1, 0, grid - 1), frac};
  };

  std::vector<std::uint16_t> out(image.pixel_count());
  for (int y = 0; y < h; ++y) {
    const auto [ty0, ty1, fy] = axis(y, tile_h);
    for (int x = 0; x < w; ++x) {
      const auto [tx0, tx1, fx] = axis(x, tile_w);
      const int v = image.at(x, y);
      auto lut_at = [&](int ty, int tx) {
        return static_cast<double>(luts[(static_cast<std::size_t>(ty) * grid + tx) * bins + v]);
      };
      const double top = lut_at(ty0, tx0) * (1.0 - fx) + lut_at(ty0, tx1) * fx;
      const double bottom = lut_at(ty1, tx0) * (1.0 - fx) + lut_at(ty1, tx1) * fx;
      const double r = top * (1.0 - fy) + bottom * fy;
      out[static_cast<std::size_t>(y) * w + x] =
          static_cast<std::uint16_t>(std::clamp(std::round(r), 0.0, static_cast<double>(bins - 1)));
    }
  }
  return RasterImage(w, h, image.format(), std::move(out));
}

RasterImage to_grayscale(const RasterImage& image) {
  if (image.is_gray()) return image;
  std::vector<std::uint16_t> out(image.pixel_count());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const std::uint32_t weighted =
          299u * image.at(x, y, 0) + 587u * image.at(x, y, 1) + 114u * image.at(x, y, 2);
      out[static_cast<std::size_t>(y) * image.width() + x] = static_cast<std::uint16_t>((weighted + 500u) / 1000u);
    }
  }
  return RasterImage(image.width(), image.height(), PixelFormat::Gray8, std::move(out));
}

RasterImage to_rgb(const RasterImage& image) {
  if (!image.is_gray()) return image;
  const int shift = image.format() == PixelFormat::Gray16 ? 8 : 0;
  std::vector<std::uint16_t> out(image.pixel_count() * 3);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const auto v = static_cast<std::uint16_t>(image.pixels()[i] >> shift);
    out[3 * i] = out[3 * i + 1] = out[3 * i + 2] = v;
  }
  return RasterImage(image.width(), image.height(), PixelFormat::Rgb8, std::move(out));
}

RasterImage quantise(const RasterImage& image, int levels) {
  if (levels < 2 || levels > 256) throw InputError("quantisation levels must be in [2, 256]");
  if (!image.is_gray()) throw InputError("quantise requires a single-channel image");
  const std::uint32_t denom = static_cast<std::uint32_t>(image.max_value()) + 1u;
  std::vector<std::uint16_t> out(image.pixel_count());
  const auto px = image.pixels();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint16_t>(static_cast<std::uint32_t>(px[i]) * static_cast<std::uint32_t>(levels) / denom);
  }
  // The quantised raster keeps the source format tag; its values are level indices.
  return RasterImage(image.width(), image.height(), image.format(), std::move(out));
}

RasterImage stretch_to_full_depth(const RasterImage& image) {
  if (!image.is_gray()) throw InputError("exposure stretch requires a single-channel image");
  const auto px = image.pixels();
  const auto [lo_it, hi_it] = std::minmax_element(px.begin(), px.end());
  const std::uint32_t lo = *lo_it;
  const std::uint32_t hi = *hi_it;
  if (lo == hi) return image;
  const std::uint64_t top = image.max_value();
  const std::uint64_t span = hi - lo;
  std::vector<std::uint16_t> out(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    // Rounded integer rescale: (p - lo) * top / span.
    out[i] = static_cast<std::uint16_t>(((px[i] - lo) * top * 2 + span) / (2 * span));
  }
  return RasterImage(image.width(), image.height(), image.format(), std::move(out));
}

}  // namespace artauth
