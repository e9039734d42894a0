// artauth: extract -> cv/train -> score workflow for paired visual/X-ray images.
//
// Exit codes: 0 success, 1 input or validation error, 2 numerical failure.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "artauth/commands.hpp"
#include "artauth/error.hpp"

using namespace artauth;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool linear_hue = false;
  std::string modality = "fused";
};

PipelineConfig load_pipeline(const Common& c) {
  KeyValueConfig kv;
  if (!c.config.empty()) kv = KeyValueConfig::load(c.config);
  PipelineConfig cfg = pipeline_config_from(kv);
  if (c.seed) cfg.grid.seed = *c.seed;
  if (c.linear_hue) cfg.extraction.hue_mode = HueVarianceMode::Linear;
  return cfg;
}

void add_config(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "key = value configuration file")->check(CLI::ExistingFile);
}

void add_modality(CLI::App* cmd, Common& c) {
  cmd->add_option("--modality", c.modality, "feature set used by the model")
      ->check(CLI::IsMember({"fused", "visual", "xray"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimodal (visual + X-ray) painting authentication"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  Common common;
  bool allow_partial = false;
  std::string manifest, features, out, model_out, debug_dir, model, visual, xray, input;
  double nu = 0.1, gamma = 0.01;
  std::optional<double> offset;
  std::size_t components = 0;

  auto* extract = app.add_subcommand("extract", "extract fused feature rows from a manifest");
  extract->add_option("manifest", manifest, "CSV with id,visual_path,xray_path[,label]")->required();
  extract->add_option("--out", out, "feature table (.csv or .json)")->required();
  extract->add_flag("--allow-partial", allow_partial, "write successful rows even when some paintings fail");
  extract->add_option("--debug-dir", debug_dir, "dump preprocessed rasters here");
  extract->add_flag("--linear-hue", common.linear_hue, "linear hue variance instead of circular");
  add_config(extract, common);

  auto* cv = app.add_subcommand("cv", "grouped k-fold grid search, refit and held-out evaluation");
  cv->add_option("features", features, "feature table from 'extract'")->required();
  cv->add_option("--out", out, "report JSON")->required();
  cv->add_option("--model-out", model_out, "model file (default <report stem>.model.json)");
  cv->add_option("--seed", common.seed, "overrides the configured seed");
  cv->add_flag("--linear-hue", common.linear_hue, "record linear hue variance in the model");
  add_config(cv, common);
  add_modality(cv, common);

  auto* train = app.add_subcommand("train", "fit one (nu, gamma) on all authentic rows");
  train->add_option("features", features, "feature table from 'extract'")->required();
  train->add_option("--out", out, "model file")->required();
  train->add_option("--nu", nu, "upper bound on the training outlier fraction")->check(CLI::Range(0.0, 1.0));
  train->add_option("--gamma", gamma, "RBF kernel width")->check(CLI::PositiveNumber);
  train->add_option("--seed", common.seed, "recorded in provenance");
  train->add_flag("--linear-hue", common.linear_hue, "record linear hue variance in the model");
  add_config(train, common);
  add_modality(train, common);

  auto* score = app.add_subcommand("score", "score one visual/X-ray pair against a model");
  score->add_option("model", model, "model file")->required()->check(CLI::ExistingFile);
  score->add_option("visual", visual, "visual image")->required();
  score->add_option("xray", xray, "X-ray image")->required();
  score->add_option("--out", out, "write JSON here instead of stdout");
  score->add_option("--offset", offset, "added to z before the normal CDF");
  add_config(score, common);

  auto* synth = app.add_subcommand("synth", "generate a synthetic paired corpus");
  synth->add_option("--out", out, "output directory")->required();
  synth->add_option("--seed", common.seed, "overrides the spec seed");
  add_config(synth, common);

  auto* importance = app.add_subcommand("importance", "PCA feature attribution");
  importance->add_option("input", input, "model file or feature table")->required()->check(CLI::ExistingFile);
  importance->add_option("--out", out, "write JSON here; the table still goes to stdout");
  importance->add_option("--components", components, "leading components to use (0 = all)");
  add_modality(importance, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) {
      PipelineConfig cfg = load_pipeline(common);
      ExtractArgs a{manifest, out, cfg.extraction, allow_partial, std::nullopt};
      if (!debug_dir.empty()) a.debug_dir = debug_dir;
      cmd_extract(a, std::cerr);
    } else if (*cv) {
      CvArgs a{features, out, std::nullopt, load_pipeline(common), parse_feature_set(common.modality)};
      if (!model_out.empty()) a.model_out = model_out;
      cmd_cv(a, std::cerr);
    } else if (*train) {
      TrainArgs a{features, out, load_pipeline(common), parse_feature_set(common.modality), nu, gamma};
      cmd_train(a, std::cerr);
    } else if (*score) {
      ScoreArgs a{model, visual, xray, std::nullopt, offset};
      if (!offset && !common.config.empty()) a.calibration_offset = load_pipeline(common).calibration_offset;
      if (!out.empty()) a.out = out;
      cmd_score(a, std::cout);
    } else if (*synth) {
      KeyValueConfig kv;
      if (!common.config.empty()) kv = KeyValueConfig::load(common.config);
      CorpusSpec spec = corpus_spec_from(kv);
      if (common.seed) spec.seed = *common.seed;
      cmd_synth({out, spec}, std::cerr);
    } else if (*importance) {
      ImportanceArgs a{input, std::nullopt, parse_feature_set(common.modality), components};
      if (!out.empty()) {
        a.out = out;
        cmd_importance(a, std::cout, std::cout);
      } else {
        // Keep stdout pure JSON when it carries the report.
        cmd_importance(a, std::cout, std::cerr);
      }
    }
  } catch (const CommandFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.numerical ? 2 : 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
