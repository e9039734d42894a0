#include <gtest/gtest.h>

#include "artauth/error.hpp"
#include "artauth/lbp.hpp"
#include "oracles.hpp"

using namespace artauth;

namespace {

int transitions(std::uint8_t p) {
  int t = 0;
  for (int k = 0; k < 8; ++k) t += ((p >> k) & 1) != ((p >> ((k + 1) % 8)) & 1);
  return t;
}

}  // namespace

TEST(Lbp, LabelTableAgreesWithDefinition) {
  int uniform = 0;
  for (int p = 0; p < 256; ++p) {
    const auto code = static_cast<std::uint8_t>(p);
    const int expected = transitions(code) <= 2 ? __builtin_popcount(p) : 9;
    EXPECT_EQ(riu2_label(code), expected) << p;
    uniform += transitions(code) <= 2;
  }
  EXPECT_EQ(uniform, 58);
}

TEST(Lbp, MatchesNaiveOracleOnRandomImages) {
  Rng rng(201);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = 3 + static_cast<int>(rng.below(30)), h = 3 + static_cast<int>(rng.below(30));
    const auto img = oracle::random_gray(rng, w, h, trial % 2 ? 4 : 256);
    const auto h1 = compute_lbp_riu2(img);
    const auto ref = oracle::lbp_riu2(img);
    for (int b = 0; b < kLbpBins; ++b) EXPECT_EQ(h1.bins[b], ref[b]);
    EXPECT_EQ(h1.total, static_cast<std::uint64_t>((w - 2) * (h - 2)));
  }
}

TEST(Lbp, InvariantUnderQuarterTurns) {
  Rng rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    auto img = oracle::random_gray(rng, 5 + static_cast<int>(rng.below(20)), 5 + static_cast<int>(rng.below(20)), 16);
    const auto base = compute_lbp_riu2(img).bins;
    for (int turn = 1; turn <= 3; ++turn) {
      img = oracle::rotate90(img);
      EXPECT_EQ(compute_lbp_riu2(img).bins, base) << "turn " << turn;
    }
  }
}

TEST(Lbp, ConstantImageIsAllOnes) {
  // Every neighbour equals the centre, so every bit is set.
  const auto h = compute_lbp_riu2(RasterImage::filled(6, 5, PixelFormat::Gray8, 40));
  EXPECT_EQ(h.bins[8], 12u);
  EXPECT_EQ(h.total, 12u);
  const auto s = lbp_statistics(h);
  EXPECT_DOUBLE_EQ(s.mean, 8.0);
  EXPECT_DOUBLE_EQ(s.variance, 0.0);
  EXPECT_DOUBLE_EQ(s.uniformity, 1.0);
}

TEST(Lbp, StatisticsFromHistogram) {
  LbpHistogram h;
  h.bins[0] = 1;
  h.bins[9] = 3;
  h.total = 4;
  const auto s = lbp_statistics(h);
  EXPECT_DOUBLE_EQ(s.mean, 0.25 * 0 + 0.75 * 9);
  EXPECT_DOUBLE_EQ(s.variance, 0.25 * 6.75 * 6.75 + 0.75 * 2.25 * 2.25);
  EXPECT_DOUBLE_EQ(s.uniformity, 0.0625 + 0.5625);
  EXPECT_THROW(lbp_statistics(LbpHistogram{}), InputError);
  EXPECT_THROW(compute_lbp_riu2(RasterImage::filled(2, 9, PixelFormat::Gray8, 0)), InputError);
}
