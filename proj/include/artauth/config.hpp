#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "artauth/features.hpp"
#include "artauth/modelsel.hpp"
#include "artauth/synth.hpp"

namespace artauth {

/// Flat `key = value` text. `#` starts a comment; blank lines are ignored;
/// list values are comma separated. Duplicate keys are an error.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return entries_; }
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

  std::optional<std::string> get(const std::string& key) const;
  std::optional<long long> get_int(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<std::vector<double>> get_list(const std::string& key) const;

  /// Throws InputError naming the first key not in `known`.
  void require_known(const std::vector<std::string>& known) const;

 private:
  std::string origin_;
  std::map<std::string, std::string> entries_;
};

/// Every tunable of the extract -> cv -> score workflow.
struct PipelineConfig {
  ExtractionConfig extraction;
  GridConfig grid;
  double test_fraction = 0.2;
  double calibration_offset = 0.0;  ///< added to z before the normal CDF

  /// Canonical text form (sorted keys, shortest round-trip numbers); the
  /// model file stores a hash of it.
  std::string canonical() const;
  std::uint64_t hash() const;
};

/// Builds a PipelineConfig from documented keys, starting from defaults:
/// target_size, clahe_clip_limit, clahe_tile_grid, gray_levels, hue_variance
/// (circular|linear), nus, gammas, folds, seed, test_fraction,
/// solver_tolerance, solver_max_iterations, calibration_offset.
PipelineConfig pipeline_config_from(const KeyValueConfig& kv);

/// Keys mirror CorpusSpec field names.
CorpusSpec corpus_spec_from(const KeyValueConfig& kv);

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t v);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace artauth
