#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "artauth/analysis.hpp"
#include "artauth/config.hpp"
#include "artauth/fusion.hpp"
#include "artauth/modelsel.hpp"
#include "artauth/ocsvm.hpp"

namespace artauth {

inline constexpr int kModelFormatVersion = 1;

std::string tool_version();

struct Provenance {
  std::uint64_t seed = 0;
  std::string config_hash;  ///< hex FNV-1a of PipelineConfig::canonical()
  std::string tool_version;
  std::size_t n_train = 0;
};

/// Everything needed to score a new painting: scaler, SVM, calibration,
/// feature layout and the extraction settings used in training.
struct ModelFile {
  OcSvmModel model;
  FeatureSet feature_set = FeatureSet::Fused;
  int feature_schema_version = kFeatureSchemaVersion;
  ExtractionConfig extraction;
  Provenance provenance;

  std::vector<std::string> schema() const { return schema_for(feature_set); }
};

std::string model_to_json(const ModelFile& m);
/// Rejects unknown format versions, malformed JSON and inconsistent shapes.
ModelFile model_from_json(const std::string& text);
void save_model(const std::filesystem::path& path, const ModelFile& m);
ModelFile load_model(const std::filesystem::path& path);

/// One row per painting with its optional label.
struct FeatureTable {
  std::vector<FusedVector> rows;
  std::vector<std::optional<Label>> labels;

  bool has_labels() const;
};

/// CSV: id[,label],<28 fused columns>. Numbers use the shortest round-trip form.
std::string feature_table_to_csv(const FeatureTable& t);
/// JSON records: {"id", "label"?, "visual": {name: value}, "xray": {...}}.
std::string feature_table_to_json(const FeatureTable& t);
FeatureTable feature_table_from_csv(const std::string& text);
FeatureTable feature_table_from_json(const std::string& text);
/// Dispatches on the .json extension; anything else is read as CSV.
FeatureTable load_feature_table(const std::filesystem::path& path);

std::string label_name(Label l);
Label parse_label(const std::string& text);

struct ManifestRow {
  std::string id;
  std::filesystem::path visual;
  std::filesystem::path xray;
  std::optional<Label> label;
};

/// CSV with header id,visual_path,xray_path[,label]. Relative paths are
/// resolved against the manifest's directory. Ids must be unique.
std::vector<ManifestRow> load_manifest(const std::filesystem::path& path);

std::string cv_report_to_json(const CvReport& r);
std::string importance_to_json(const ImportanceReport& r, const std::vector<std::string>& names);
std::string calibrated_to_json(const CalibratedScore& s, Verdict verdict, const std::string& feature_set);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace artauth
