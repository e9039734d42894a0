#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "artauth/features.hpp"

namespace artauth {

using Vector = std::vector<double>;

inline constexpr std::size_t kFusedCount = 2 * kFeatureCount;

/// One painting's feature row. Produced by `fuse` with the 28 entries
/// [visual | xray]; `select_features` narrows it to a single modality block.
struct FusedVector {
  std::string painting_id;
  Vector values;
};

/// Which block of the fused row a model consumes.
enum class FeatureSet { Fused, Visual, Xray };

std::string_view to_string(FeatureSet set);
FeatureSet parse_feature_set(std::string_view text);
std::size_t dimension(FeatureSet set);

/// Column names: "visual_<descriptor>" then "xray_<descriptor>".
std::vector<std::string> fused_schema();
std::vector<std::string> schema_for(FeatureSet set);

/// Concatenates [visual | xray]. Throws InputError on a modality or schema
/// version mismatch.
FusedVector fuse(const FeatureVector& visual, const FeatureVector& xray, std::string painting_id);

/// Returns the columns used by `set` (a copy of the row for Fused).
FusedVector select_features(const FusedVector& row, FeatureSet set);

/// Per-dimension z-score standardisation fitted on training rows.
struct Scaler {
  static constexpr double kEpsilon = 1e-12;

  Vector means;
  Vector stds;  ///< population std; 1 where the dimension is degenerate
  std::vector<bool> degenerate;

  std::size_t dimension() const { return means.size(); }
  bool fitted() const { return !means.empty(); }
};

Scaler fit_scaler(std::span<const FusedVector> train);
Scaler fit_scaler(std::span<const Vector> train);

/// z_i = (x_i - mu_i) / sigma_i; degenerate dimensions map to 0.
Vector transform(const Scaler& s, std::span<const double> v);
FusedVector transform(const Scaler& s, const FusedVector& v);

/// x_i = z_i * sigma_i + mu_i (degenerate dimensions return mu_i).
Vector inverse_transform(const Scaler& s, std::span<const double> z);

}  // namespace artauth
