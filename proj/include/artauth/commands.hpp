#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "artauth/config.hpp"
#include "artauth/persistence.hpp"

namespace artauth {

/// Thrown by commands that finished their work but must still exit non-zero
/// (e.g. extraction with failed rows). `numerical` selects exit code 2.
struct CommandFailure : std::runtime_error {
  CommandFailure(const std::string& what, bool numerical_failure)
      : std::runtime_error(what), numerical(numerical_failure) {}
  bool numerical;
};

struct RowError {
  std::string painting_id;
  std::string message;
  bool numerical = false;
};

struct ExtractOutcome {
  FeatureTable table;  ///< successful rows, manifest order
  std::vector<RowError> errors;
};

/// Extracts both modalities of every manifest row. Rows run in parallel;
/// output order and values do not depend on scheduling.
ExtractOutcome extract_manifest(const std::vector<ManifestRow>& rows, const ExtractionConfig& cfg,
                                const std::optional<std::filesystem::path>& debug_dir = std::nullopt);

struct ExtractArgs {
  std::filesystem::path manifest;
  std::filesystem::path out;  ///< .json writes records, anything else CSV
  ExtractionConfig extraction;
  bool allow_partial = false;
  std::optional<std::filesystem::path> debug_dir;
};
void cmd_extract(const ExtractArgs& args, std::ostream& log);

struct CvArgs {
  std::filesystem::path features;
  std::filesystem::path out;  ///< report JSON
  std::optional<std::filesystem::path> model_out;  ///< default: <out stem>.model.json next to `out`
  PipelineConfig config;
  FeatureSet feature_set = FeatureSet::Fused;
};

struct TestEvaluation {
  std::vector<std::string> ids;
  std::vector<Label> labels;
  Vector decisions;
  std::vector<Verdict> verdicts;
  Confusion confusion;
  Metrics metrics;
};

struct CvOutcome {
  TrainTestSplit split;  ///< indices into the authentic rows of the table
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  CvReport report;
  ModelFile model;
  TestEvaluation test;
  std::string report_json;
};

/// Authentic (or unlabelled) rows are split into train/test; the grid search
/// runs on the training side and the refit winner is evaluated on the held
/// out authentic rows plus every labelled forgery.
CvOutcome run_cv(const FeatureTable& table, const PipelineConfig& config, FeatureSet set);
void cmd_cv(const CvArgs& args, std::ostream& log);

struct TrainArgs {
  std::filesystem::path features;
  std::filesystem::path out;
  PipelineConfig config;
  FeatureSet feature_set = FeatureSet::Fused;
  double nu = 0.1;
  double gamma = 0.01;
};
/// Fits one (nu, gamma) on every authentic or unlabelled row.
ModelFile run_train(const FeatureTable& table, const PipelineConfig& config, FeatureSet set, double nu, double gamma);
void cmd_train(const TrainArgs& args, std::ostream& log);

struct ScoreArgs {
  std::filesystem::path model;
  std::filesystem::path visual;
  std::filesystem::path xray;
  std::optional<std::filesystem::path> out;  ///< stdout when absent
  std::optional<double> calibration_offset;
};
struct ScoreOutcome {
  CalibratedScore score;
  Verdict verdict;
  std::string json;
};
ScoreOutcome run_score(const ModelFile& model, const RasterImage& visual, const RasterImage& xray,
                       double calibration_offset = 0.0);
void cmd_score(const ScoreArgs& args, std::ostream& out);

struct SynthArgs {
  std::filesystem::path out_dir;
  CorpusSpec spec;
};
void cmd_synth(const SynthArgs& args, std::ostream& log);

struct ImportanceArgs {
  std::filesystem::path input;  ///< model file or feature table
  std::optional<std::filesystem::path> out;
  FeatureSet feature_set = FeatureSet::Fused;  ///< ignored for model files
  std::size_t max_components = 0;
};
struct ImportanceOutcome {
  ImportanceReport report;
  std::vector<std::string> names;
  std::string json;
  std::string table;  ///< human-readable, sorted by contribution
};
ImportanceOutcome run_importance(const std::filesystem::path& input, FeatureSet set, std::size_t max_components);
/// Writes the table to `table_out` and the JSON to args.out, or to `json_out`
/// when no path is given.
void cmd_importance(const ImportanceArgs& args, std::ostream& json_out, std::ostream& table_out);

}  // namespace artauth
