#include <cmath>

#include <gtest/gtest.h>
#include <opencv2/imgproc.hpp>

#include "artauth/error.hpp"
#include "artauth/preprocess.hpp"
#include "oracles.hpp"
#include "printers.hpp"

using namespace artauth;

namespace {

int reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * n - 2 - i;
  return i;
}

/// Per-pixel CLAHE: every output pixel rebuilds the clipped histograms of its
/// four neighbouring tiles from scratch.
RasterImage naive_clahe(const RasterImage& img, double clip_limit, int grid) {
  const int w = img.width(), h = img.height(), bins = img.max_value() + 1;
  const int tw = (w + grid - 1) / grid, th = (h + grid - 1) / grid;
  const long long area = static_cast<long long>(tw) * th;
  const long long clip = std::max(1LL, static_cast<long long>(std::floor(clip_limit * area / bins)));

  auto mapped = [&](int tx, int ty, int value) {
    std::vector<long long> hist(bins, 0);
    for (int y = ty * th; y < (ty + 1) * th; ++y)
      for (int x = tx * tw; x < (tx + 1) * tw; ++x) hist[img.at(reflect(x, w), reflect(y, h))]++;
    long long excess = 0;
    for (auto& c : hist)
      if (c > clip) excess += c - clip, c = clip;
    for (auto& c : hist) c += excess / bins;
    long long left = excess % bins;
    const long long stride = left ? std::max(1LL, bins / left) : 1;
    for (long long i = 0; left > 0 && i < bins; i += stride, --left) hist[i]++;
    long long cdf = 0;
    for (int i = 0; i <= value; ++i) cdf += hist[i];
    return std::min<double>(bins - 1, std::round(cdf * static_cast<double>(bins - 1) / area));
  };

  RasterImage out = img;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double gx = (x + 0.5) / tw - 0.5, gy = (y + 0.5) / th - 0.5;
      const int x0 = static_cast<int>(std::floor(gx)), y0 = static_cast<int>(std::floor(gy));
      const double fx = gx - x0, fy = gy - y0;
      auto tile = [&](int t) { return std::clamp(t, 0, grid - 1); };
      const int v = img.at(x, y);
      const double top = mapped(tile(x0), tile(y0), v) * (1 - fx) + mapped(tile(x0 + 1), tile(y0), v) * fx;
      const double bot = mapped(tile(x0), tile(y0 + 1), v) * (1 - fx) + mapped(tile(x0 + 1), tile(y0 + 1), v) * fx;
      out.set(x, y, 0, static_cast<std::uint16_t>(std::round(top * (1 - fy) + bot * fy)));
    }
  return out;
}

RasterImage smooth_random(Rng& rng, int w, int h) {
  std::vector<std::uint16_t> px(static_cast<std::size_t>(w) * h);
  const double a = rng.uniform(0.05, 0.3), b = rng.uniform(0.05, 0.3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double v = 90 + 50 * std::sin(a * x) * std::cos(b * y) + 20 * rng.uniform();
      px[static_cast<std::size_t>(y) * w + x] = static_cast<std::uint16_t>(std::clamp(v, 0.0, 255.0));
    }
  return RasterImage(w, h, PixelFormat::Gray8, std::move(px));
}

}  // namespace

TEST(Grayscale, IntegerLuminanceRoundsHalfUp) {
  const RasterImage rgb(3, 1, PixelFormat::Rgb8, {255, 0, 0, 0, 255, 0, 10, 20, 30});
  const auto g = to_grayscale(rgb);
  EXPECT_EQ(g.format(), PixelFormat::Gray8);
  EXPECT_EQ(g.at(0, 0), 76);   // 76.245
  EXPECT_EQ(g.at(1, 0), 150);  // 149.685
  EXPECT_EQ(g.at(2, 0), 18);   // 18.15
  const RasterImage gray(1, 1, PixelFormat::Gray8, {9});
  EXPECT_EQ(to_grayscale(gray), gray);
}

TEST(Quantise, FloorMappingCoversEveryLevel) {
  std::vector<std::uint16_t> px(256);
  for (int i = 0; i < 256; ++i) px[i] = static_cast<std::uint16_t>(i);
  const auto q = quantise(RasterImage(256, 1, PixelFormat::Gray8, px), 32);
  for (int i = 0; i < 256; ++i) EXPECT_EQ(q.at(i, 0), i / 8);
  const auto q16 = quantise(RasterImage(2, 1, PixelFormat::Gray16, {65535, 2047}), 32);
  EXPECT_EQ(q16.at(0, 0), 31);
  EXPECT_EQ(q16.at(1, 0), 0);
  EXPECT_THROW(quantise(q, 1), InputError);
}

TEST(Stretch, MapsExtremesToFullRange) {
  const auto s = stretch_to_full_depth(RasterImage(3, 1, PixelFormat::Gray16, {1000, 2000, 3000}));
  EXPECT_EQ(s.at(0, 0), 0);
  EXPECT_EQ(s.at(1, 0), 32768);  // 32767.5 rounds up
  EXPECT_EQ(s.at(2, 0), 65535);
  const RasterImage flat = RasterImage::filled(4, 4, PixelFormat::Gray16, 77);
  EXPECT_EQ(stretch_to_full_depth(flat), flat);
}

TEST(Bicubic, IdentityAndConstantsArePreserved) {
  Rng rng(3);
  const auto img = oracle::random_gray(rng, 9, 7, 256);
  EXPECT_EQ(resize_bicubic(img, 9, 7), img);
  const auto flat = RasterImage::filled(5, 5, PixelFormat::Gray16, 40000);
  EXPECT_EQ(resize_bicubic(flat, 17), RasterImage::filled(17, 17, PixelFormat::Gray16, 40000));
}

TEST(Bicubic, ReproducesLinearRampAwayFromBorders) {
  // Keys' cubic reproduces linear functions exactly; clamped borders only
  // disturb the outermost samples.
  std::vector<std::uint16_t> px(64 * 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 64; ++x) px[y * 64 + x] = static_cast<std::uint16_t>(3 * x + 10);
  const auto up = resize_bicubic(RasterImage(64, 4, PixelFormat::Gray8, px), 128, 4);
  for (int x = 4; x < 124; ++x) {
    const double src = (x + 0.5) * 0.5 - 0.5;
    EXPECT_NEAR(up.at(x, 2), 3 * src + 10, 0.5 + 1e-9) << x;
  }
}

TEST(Bicubic, RgbChannelsAreIndependent) {
  Rng rng(5);
  const auto r = oracle::random_gray(rng, 8, 8, 256), g = oracle::random_gray(rng, 8, 8, 256);
  std::vector<std::uint16_t> px;
  for (std::size_t i = 0; i < 64; ++i) px.insert(px.end(), {r.pixels()[i], g.pixels()[i], 0});
  const auto out = resize_bicubic(RasterImage(8, 8, PixelFormat::Rgb8, px), 13, 11);
  const auto rr = resize_bicubic(r, 13, 11), gg = resize_bicubic(g, 13, 11);
  for (int y = 0; y < 11; ++y)
    for (int x = 0; x < 13; ++x) {
      EXPECT_EQ(out.at(x, y, 0), rr.at(x, y));
      EXPECT_EQ(out.at(x, y, 1), gg.at(x, y));
      EXPECT_EQ(out.at(x, y, 2), 0);
    }
}

TEST(Clahe, MatchesPerPixelReference) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 8 + static_cast<int>(rng.below(30)), h = 8 + static_cast<int>(rng.below(30));
    const int grid = 1 + static_cast<int>(rng.below(4));
    const double clip = rng.uniform(0.5, 5.0);
    const auto img = trial % 2 ? oracle::random_gray(rng, w, h, 256) : smooth_random(rng, w, h);
    PreprocessConfig cfg;
    cfg.clahe_clip_limit = clip;
    cfg.clahe_tile_grid = grid;
    EXPECT_EQ(apply_clahe(img, cfg), naive_clahe(img, clip, grid)) << w << "x" << h << " grid " << grid;
  }
}

TEST(Clahe, StaysCloseToOpenCv) {
  // OpenCV samples tile centres at x / tile - 0.5 rather than pixel centres,
  // so agreement is close but not exact.
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto img = smooth_random(rng, 128, 96);
    cv::Mat src(96, 128, CV_8UC1);
    for (int y = 0; y < 96; ++y)
      for (int x = 0; x < 128; ++x) src.at<std::uint8_t>(y, x) = static_cast<std::uint8_t>(img.at(x, y));
    cv::Mat ref;
    cv::createCLAHE(2.0, cv::Size(8, 8))->apply(src, ref);
    const auto ours = apply_clahe(img, PreprocessConfig{});
    double diff = 0;
    for (int y = 0; y < 96; ++y)
      for (int x = 0; x < 128; ++x) diff += std::abs(ours.at(x, y) - ref.at<std::uint8_t>(y, x));
    EXPECT_LT(diff / (128 * 96), 2.0);
  }
}

TEST(Clahe, SingleTileIsMonotone) {
  Rng rng(13);
  const auto img = oracle::random_gray(rng, 40, 30, 256);
  PreprocessConfig cfg;
  cfg.clahe_tile_grid = 1;
  const auto out = apply_clahe(img, cfg);
  std::vector<int> lut(256, -1);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    auto& slot = lut[img.pixels()[i]];
    ASSERT_TRUE(slot == -1 || slot == out.pixels()[i]);
    slot = out.pixels()[i];
  }
  int last = -1;
  for (int v : lut)
    if (v >= 0) EXPECT_GE(v, last), last = v;
}

TEST(Clahe, RejectsColourAndBadConfig) {
  EXPECT_THROW(apply_clahe(RasterImage::filled(4, 4, PixelFormat::Rgb8, 1), {}), InputError);
  PreprocessConfig bad;
  bad.clahe_tile_grid = 0;
  EXPECT_THROW(bad.validate(), InputError);
  bad = {};
  bad.gray_levels = 1;
  EXPECT_THROW(bad.validate(), InputError);
}
