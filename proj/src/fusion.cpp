#include "artauth/fusion.hpp"

#include <cmath>

#include "artauth/error.hpp"

namespace artauth {

std::string_view to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::Fused:
      return "fused";
    case FeatureSet::Visual:
      return "visual";
    case FeatureSet::Xray:
      return "xray";
  }
  return "?";
}

FeatureSet parse_feature_set(std::string_view text) {
  if (text == "fused") return FeatureSet::Fused;
  if (text == "visual") return FeatureSet::Visual;
  if (text == "xray") return FeatureSet::Xray;
  throw InputError("unknown modality filter '" + std::string(text) + "' (expected visual, xray or fused)");
}

std::size_t dimension(FeatureSet set) { return set == FeatureSet::Fused ? kFusedCount : kFeatureCount; }

std::vector<std::string> fused_schema() {
  std::vector<std::string> names;
  for (Modality m : {Modality::Visual, Modality::Xray}) {
    for (auto name : feature_schema(m)) names.push_back(std::string(to_string(m)) + "_" + std::string(name));
  }
  return names;
}

std::vector<std::string> schema_for(FeatureSet set) {
  auto all = fused_schema();
  switch (set) {
    case FeatureSet::Fused:
      return all;
    case FeatureSet::Visual:
      return {all.begin(), all.begin() + kFeatureCount};
    case FeatureSet::Xray:
      return {all.begin() + kFeatureCount, all.end()};
  }
  return all;
}

FusedVector fuse(const FeatureVector& visual, const FeatureVector& xray, std::string painting_id) {
  if (visual.modality != Modality::Visual || xray.modality != Modality::Xray) {
    throw InputError("fuse expects (visual, xray) feature vectors for painting '" + painting_id + "'");
  }
  if (visual.schema_version != xray.schema_version) {
    throw InputError("feature schema version mismatch for painting '" + painting_id + "'");
  }
  FusedVector out{std::move(painting_id), {}};
  out.values.reserve(kFusedCount);
  out.values.insert(out.values.end(), visual.values.begin(), visual.values.end());
  out.values.insert(out.values.end(), xray.values.begin(), xray.values.end());
  return out;
}

FusedVector select_features(const FusedVector& row, FeatureSet set) {
  if (row.values.size() != kFusedCount) {
    throw InputError("row '" + row.painting_id + "' has " + std::to_string(row.values.size()) +
                     " features, expected " + std::to_string(kFusedCount));
  }
  switch (set) {
    case FeatureSet::Fused:
      return row;
    case FeatureSet::Visual:
      return {row.painting_id, Vector(row.values.begin(), row.values.begin() + kFeatureCount)};
    case FeatureSet::Xray:
      return {row.painting_id, Vector(row.values.begin() + kFeatureCount, row.values.end())};
  }
  return row;
}

Scaler fit_scaler(std::span<const Vector> train) {
  if (train.size() < 2) throw InputError("fit_scaler needs at least 2 vectors");
  const std::size_t d = train.front().size();
  for (const auto& v : train) {
    if (v.size() != d) throw InputError("fit_scaler: inconsistent vector dimensions");
  }
  const double n = static_cast<double>(train.size());
  Scaler s;
  s.means.assign(d, 0.0);
  s.stds.assign(d, 0.0);
  s.degenerate.assign(d, false);
  for (const auto& v : train)
    for (std::size_t i = 0; i < d; ++i) s.means[i] += v[i];
  for (auto& m : s.means) m /= n;
  for (const auto& v : train)
    for (std::size_t i = 0; i < d; ++i) s.stds[i] += (v[i] - s.means[i]) * (v[i] - s.means[i]);
  for (std::size_t i = 0; i < d; ++i) {
    s.stds[i] = std::sqrt(s.stds[i] / n);
    if (s.stds[i] < Scaler::kEpsilon) {
      s.stds[i] = 1.0;
      s.degenerate[i] = true;
    }
  }
  return s;
}

Scaler fit_scaler(std::span<const FusedVector> train) {
  std::vector<Vector> rows;
  rows.reserve(train.size());
  for (const auto& r : train) rows.push_back(r.values);
  return fit_scaler(std::span<const Vector>(rows));
}

Vector transform(const Scaler& s, std::span<const double> v) {
  if (v.size() != s.dimension()) {
    throw InputError("scaler dimension " + std::to_string(s.dimension()) + " does not match vector of size " +
                     std::to_string(v.size()));
  }
  Vector z(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) z[i] = s.degenerate[i] ? 0.0 : (v[i] - s.means[i]) / s.stds[i];
  return z;
}

FusedVector transform(const Scaler& s, const FusedVector& v) { return {v.painting_id, transform(s, v.values)}; }

Vector inverse_transform(const Scaler& s, std::span<const double> z) {
  if (z.size() != s.dimension()) throw InputError("inverse_transform: dimension mismatch");
  Vector x(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) x[i] = s.degenerate[i] ? s.means[i] : z[i] * s.stds[i] + s.means[i];
  return x;
}

}  // namespace artauth
