#include "artauth/lbp.hpp"

#include <bit>

#include "artauth/error.hpp"

namespace artauth {

namespace {

// Ring order (dx, dy), walked clockwise from the top-left neighbour.
constexpr std::array<std::array<int, 2>, 8> kRing{{
    {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0},
}};

constexpr std::array<std::uint8_t, 256> make_label_table() {
  std::array<std::uint8_t, 256> table{};
  for (int p = 0; p < 256; ++p) {
    const auto rotated = static_cast<std::uint8_t>((p >> 1) | ((p & 1) << 7));
    const int transitions = std::popcount(static_cast<unsigned>(static_cast<std::uint8_t>(p) ^ rotated));
    table[p] = static_cast<std::uint8_t>(transitions <= 2 ? std::popcount(static_cast<unsigned>(p)) : kLbpNonUniformBin);
  }
  return table;
}

constexpr auto kLabels = make_label_table();

}  // namespace

int riu2_label(std::uint8_t pattern) { return kLabels[pattern]; }

LbpHistogram compute_lbp_riu2(const RasterImage& gray) {
  if (!gray.is_gray()) throw InputError("LBP requires a single-channel image");
  if (gray.width() < 3 || gray.height() < 3) throw InputError("LBP requires an image of at least 3x3 pixels");

  LbpHistogram h;
  for (int y = 1; y < gray.height() - 1; ++y) {
    for (int x = 1; x < gray.width() - 1; ++x) {
      const int centre = gray.at(x, y);
      unsigned pattern = 0;
      for (int p = 0; p < 8; ++p) {
        if (gray.at(x + kRing[p][0], y + kRing[p][1]) >= centre) pattern |= 1u << p;
      }
      ++h.bins[kLabels[pattern]];
    }
  }
  h.total = static_cast<std::uint64_t>(gray.width() - 2) * static_cast<std::uint64_t>(gray.height() - 2);
  return h;
}

LbpStatistics lbp_statistics(const LbpHistogram& h) {
  if (h.total == 0) throw InputError("LBP histogram is empty");
  const double n = static_cast<double>(h.total);
  double mean = 0.0;
  double uniformity = 0.0;
  for (int k = 0; k < kLbpBins; ++k) {
    const double p = static_cast<double>(h.bins[k]) / n;
    mean += k * p;
    uniformity += p * p;
  }
  double variance = 0.0;
  for (int k = 0; k < kLbpBins; ++k) {
    const double p = static_cast<double>(h.bins[k]) / n;
    variance += (k - mean) * (k - mean) * p;
  }
  return {mean, variance, uniformity};
}

}  // namespace artauth
