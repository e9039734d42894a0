#pragma once

#include <array>
#include <cstdint>

#include "artauth/raster.hpp"

namespace artauth {

inline constexpr int kLbpBins = 10;
inline constexpr int kLbpNonUniformBin = 9;

/// Rotation-invariant uniform (riu2) LBP histogram with P = 8, R = 1.
/// Bins 0..8 count uniform patterns by their number of set bits; bin 9 holds
/// every pattern with more than two circular 0/1 transitions.
struct LbpHistogram {
  std::array<std::uint64_t, kLbpBins> bins{};
  std::uint64_t total = 0;
};

/// riu2 label of an 8-bit circular pattern.
int riu2_label(std::uint8_t pattern);

/// Codes every interior pixel against its 8-connected ring (s(x) = 1 iff
/// x >= 0). Needs at least a 3x3 single-channel image.
LbpHistogram compute_lbp_riu2(const RasterImage& gray);

struct LbpStatistics {
  double mean;
  double variance;
  double uniformity;  ///< sum of squared bin probabilities
};

LbpStatistics lbp_statistics(const LbpHistogram& h);

}  // namespace artauth
