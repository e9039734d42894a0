#include "artauth/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "artauth/error.hpp"
#include "artauth/image_io.hpp"
#include "artauth/random.hpp"

namespace artauth {

using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kTestSplitStream = 1;

std::vector<Vector> selected_values(std::span<const FusedVector> rows, FeatureSet set) {
  std::vector<Vector> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(select_features(r, set).values);
  return out;
}

std::vector<FusedVector> authentic_rows(const FeatureTable& t) {
  std::vector<FusedVector> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const bool labelled = i < t.labels.size() && t.labels[i].has_value();
    if (!labelled || *t.labels[i] == Label::Positive) out.push_back(t.rows[i]);
  }
  return out;
}

ModelFile wrap_model(OcSvmModel model, const PipelineConfig& config, FeatureSet set, std::size_t n_train) {
  ModelFile m;
  m.model = std::move(model);
  m.feature_set = set;
  m.extraction = config.extraction;
  m.provenance = {config.grid.seed, hex64(config.hash()), tool_version(), n_train};
  return m;
}

void dump_debug(const std::filesystem::path& dir, const std::string& id, Modality m, const RasterImage& img,
                const PreprocessConfig& cfg) {
  const auto prepared = prepare_image(img, m, cfg);
  const std::string stem = id + "_" + std::string(to_string(m));
  save_png(dir / (stem + "_equalised.png"), prepared.equalised);
  // Stretch the quantised levels so the dump is viewable.
  std::vector<std::uint16_t> px(prepared.quantised.pixels().begin(), prepared.quantised.pixels().end());
  const int levels = cfg.gray_levels;
  for (auto& p : px) p = static_cast<std::uint16_t>(levels > 1 ? p * 255 / (levels - 1) : 0);
  save_png(dir / (stem + "_quantised.png"),
           RasterImage(prepared.quantised.width(), prepared.quantised.height(), PixelFormat::Gray8, std::move(px)));
}

std::string join_errors(const std::vector<RowError>& errors) {
  std::string s;
  for (const auto& e : errors) s += "  " + e.painting_id + ": " + e.message + "\n";
  return s;
}

}  // namespace

ExtractOutcome extract_manifest(const std::vector<ManifestRow>& rows, const ExtractionConfig& cfg,
                                const std::optional<std::filesystem::path>& debug_dir) {
  cfg.preprocess.validate();
  if (debug_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*debug_dir, ec);
    if (ec) throw InputError("cannot create debug directory '" + debug_dir->string() + "'");
  }

  struct Slot {
    std::optional<FusedVector> row;
    std::optional<RowError> error;
  };
  std::vector<Slot> slots(rows.size());

  auto work = [&](std::size_t i) {
    const auto& r = rows[i];
    try {
      if (r.visual.empty()) throw InputError("missing visual path");
      if (r.xray.empty()) throw InputError("missing xray path");
      const RasterImage vis = load_image(r.visual);
      const RasterImage xr = load_image(r.xray);
      const auto fv = extract_features(vis, Modality::Visual, cfg);
      const auto fx = extract_features(xr, Modality::Xray, cfg);
      slots[i].row = fuse(fv, fx, r.id);
      if (debug_dir) {
        dump_debug(*debug_dir, r.id, Modality::Visual, vis, cfg.preprocess);
        dump_debug(*debug_dir, r.id, Modality::Xray, xr, cfg.preprocess);
      }
    } catch (const NumericalError& e) {
      slots[i].error = RowError{r.id, e.what(), true};
    } catch (const std::exception& e) {
      slots[i].error = RowError{r.id, e.what(), false};
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(rows.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) work(i);
      });
    }
  }

  ExtractOutcome out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (slots[i].error) {
      out.errors.push_back(*slots[i].error);
    } else {
      out.table.rows.push_back(std::move(*slots[i].row));
      out.table.labels.push_back(rows[i].label);
    }
  }
  return out;
}

void cmd_extract(const ExtractArgs& args, std::ostream& log) {
  const auto rows = load_manifest(args.manifest);
  if (rows.empty()) throw InputError("manifest '" + args.manifest.string() + "' has no rows");
  const auto outcome = extract_manifest(rows, args.extraction, args.debug_dir);

  const bool write = outcome.errors.empty() || args.allow_partial;
  if (write) {
    const std::string text = args.out.extension() == ".json" ? feature_table_to_json(outcome.table)
                                                             : feature_table_to_csv(outcome.table);
    write_file_atomic(args.out, text);
    log << "wrote " << outcome.table.rows.size() << " feature rows to " << args.out.string() << "\n";
  }
  if (!outcome.errors.empty()) {
    const bool numerical = std::all_of(outcome.errors.begin(), outcome.errors.end(),
                                       [](const RowError& e) { return e.numerical; });
    std::string msg = std::to_string(outcome.errors.size()) + " of " + std::to_string(rows.size()) +
                      " paintings failed" + (write ? "" : " (no output written; use --allow-partial)") + ":\n" +
                      join_errors(outcome.errors);
    if (!msg.empty() && msg.back() == '\n') msg.pop_back();
    throw CommandFailure(msg, numerical);
  }
}

CvOutcome run_cv(const FeatureTable& table, const PipelineConfig& config, FeatureSet set) {
  config.grid.validate();
  const auto positives = authentic_rows(table);
  if (positives.size() < 2) throw InputError("cross-validation needs at least 2 authentic paintings");

  CvOutcome out;
  out.split = split_train_test(positives.size(), config.test_fraction, derive_seed(config.grid.seed, kTestSplitStream));
  std::vector<FusedVector> train;
  for (std::size_t i : out.split.train) {
    train.push_back(select_features(positives[i], set));
    out.train_ids.push_back(positives[i].painting_id);
  }
  for (std::size_t i : out.split.test) out.test_ids.push_back(positives[i].painting_id);
  if (train.size() < config.grid.folds) {
    throw InputError("cannot run " + std::to_string(config.grid.folds) + "-fold cross-validation on " +
                     std::to_string(train.size()) + " training paintings");
  }

  auto result = grid_search(train, config.grid);
  out.report = std::move(result.report);
  out.model = wrap_model(std::move(result.model), config, set, train.size());

  auto& t = out.test;
  auto add = [&](const FusedVector& row, Label label) {
    const double d = score_raw(out.model.model, select_features(row, set).values);
    t.ids.push_back(row.painting_id);
    t.labels.push_back(label);
    t.decisions.push_back(d);
    t.verdicts.push_back(classify(d));
  };
  for (std::size_t i : out.split.test) add(positives[i], Label::Positive);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (i < table.labels.size() && table.labels[i] == Label::Negative) add(table.rows[i], Label::Negative);
  }
  t.confusion = confusion(t.verdicts, t.labels);
  t.metrics = metrics_from(t.confusion);

  json j;
  j["tool_version"] = tool_version();
  j["feature_set"] = std::string(to_string(set));
  j["config_hash"] = out.model.provenance.config_hash;
  j["split"] = {{"seed", config.grid.seed},
                {"test_fraction", config.test_fraction},
                {"train_ids", out.train_ids},
                {"test_ids", out.test_ids}};
  j["cross_validation"] = json::parse(cv_report_to_json(out.report));
  json per = json::array();
  for (std::size_t i = 0; i < t.ids.size(); ++i) {
    per.push_back({{"id", t.ids[i]},
                   {"label", label_name(t.labels[i])},
                   {"decision_value", t.decisions[i]},
                   {"classification", t.verdicts[i] == Verdict::Authentic ? "authentic" : "anomalous"}});
  }
  const auto& m = t.metrics;
  j["test"] = {{"n_authentic", out.test_ids.size()},
               {"n_forgery", t.ids.size() - out.test_ids.size()},
               {"confusion", {{"tp", t.confusion.tp}, {"fp", t.confusion.fp}, {"tn", t.confusion.tn}, {"fn", t.confusion.fn}}},
               {"metrics",
                {{"accuracy", m.accuracy},
                 {"precision", m.precision},
                 {"recall", m.recall},
                 {"f1", m.f1},
                 {"fpr", m.fpr},
                 {"undefined_ratio", m.undefined_ratio}}},
               {"paintings", std::move(per)}};
  out.report_json = j.dump(2) + "\n";
  return out;
}

void cmd_cv(const CvArgs& args, std::ostream& log) {
  const auto table = load_feature_table(args.features);
  const auto outcome = run_cv(table, args.config, args.feature_set);
  auto model_path = args.model_out;
  if (!model_path) model_path = args.out.parent_path() / (args.out.stem().string() + ".model.json");
  save_model(*model_path, outcome.model);
  write_file_atomic(args.out, outcome.report_json);
  const auto& best = outcome.report.best();
  const auto& tm = outcome.test.metrics;
  char line[256];
  std::snprintf(line, sizeof line, "best nu=%g gamma=%g cv_f1=%.4f | test accuracy=%.4f fpr=%.4f (%zu paintings)\n",
                best.nu, best.gamma, best.f1.mean, tm.accuracy, tm.fpr, outcome.test.ids.size());
  log << line << "report: " << args.out.string() << "\nmodel: " << model_path->string() << "\n";
}

ModelFile run_train(const FeatureTable& table, const PipelineConfig& config, FeatureSet set, double nu, double gamma) {
  const auto positives = authentic_rows(table);
  if (positives.size() < 2) throw InputError("training needs at least 2 authentic paintings");
  const auto rows = selected_values(positives, set);
  auto model = fit_pipeline(rows, nu, KernelParams{gamma}, config.grid.solver);
  return wrap_model(std::move(model), config, set, rows.size());
}

void cmd_train(const TrainArgs& args, std::ostream& log) {
  const auto table = load_feature_table(args.features);
  const auto model = run_train(table, args.config, args.feature_set, args.nu, args.gamma);
  save_model(args.out, model);
  log << "trained on " << model.provenance.n_train << " paintings, " << model.model.support_vectors.size()
      << " support vectors; model: " << args.out.string() << "\n";
}

ScoreOutcome run_score(const ModelFile& model, const RasterImage& visual, const RasterImage& xray,
                       double calibration_offset) {
  if (model.feature_schema_version != kFeatureSchemaVersion) {
    throw InputError("model was trained with feature schema version " + std::to_string(model.feature_schema_version) +
                     " but this extractor produces version " + std::to_string(kFeatureSchemaVersion));
  }
  const auto fv = extract_features(visual, Modality::Visual, model.extraction);
  const auto fx = extract_features(xray, Modality::Xray, model.extraction);
  const auto row = select_features(fuse(fv, fx, "query"), model.feature_set);
  const double d = score_raw(model.model, row.values);
  ScoreOutcome out{calibrate(model.model, d, calibration_offset), classify(d), {}};
  out.json = calibrated_to_json(out.score, out.verdict, std::string(to_string(model.feature_set)));
  return out;
}

void cmd_score(const ScoreArgs& args, std::ostream& out) {
  const auto model = load_model(args.model);
  const auto visual = load_image(args.visual);
  const auto xray = load_image(args.xray);
  const auto result = run_score(model, visual, xray, args.calibration_offset.value_or(0.0));
  if (args.out) {
    write_file_atomic(*args.out, result.json);
  } else {
    out << result.json;
  }
}

void cmd_synth(const SynthArgs& args, std::ostream& log) {
  const auto corpus = generate_corpus(args.spec);
  write_corpus(corpus, args.spec, args.out_dir);
  log << "wrote " << corpus.size() << " painting pairs to " << args.out_dir.string() << "\n";
}

ImportanceOutcome run_importance(const std::filesystem::path& input, FeatureSet set, std::size_t max_components) {
  ImportanceOutcome out;
  std::vector<Vector> rows;
  const std::string text = read_file(input);
  const bool is_model = input.extension() == ".json" && text.find("\"artauth-model\"") != std::string::npos;
  if (is_model) {
    // Support vectors are already standardised.
    const auto model = model_from_json(text);
    rows = model.model.support_vectors;
    out.names = model.schema();
  } else {
    const auto table = input.extension() == ".json" ? feature_table_from_json(text) : feature_table_from_csv(text);
    const auto raw = selected_values(table.rows, set);
    if (raw.size() < 3) throw InputError("importance needs at least 3 feature rows, got " + std::to_string(raw.size()));
    const auto scaler = fit_scaler(std::span<const Vector>(raw));
    for (const auto& r : raw) rows.push_back(transform(scaler, r));
    out.names = schema_for(set);
  }
  if (rows.size() < 3) throw InputError("importance needs at least 3 rows, got " + std::to_string(rows.size()));
  out.report = feature_importance(rows, max_components);
  out.json = importance_to_json(out.report, out.names);

  std::vector<std::size_t> order(out.report.contributions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.report.contributions[a] > out.report.contributions[b];
  });
  std::ostringstream table;
  char line[128];
  std::snprintf(line, sizeof line, "%-4s %-28s %12s\n", "rank", "feature", "contribution");
  table << line;
  for (std::size_t r = 0; r < order.size(); ++r) {
    std::snprintf(line, sizeof line, "%-4zu %-28s %12.6f\n", r + 1, out.names[order[r]].c_str(),
                  out.report.contributions[order[r]]);
    table << line;
  }
  out.table = table.str();
  return out;
}

void cmd_importance(const ImportanceArgs& args, std::ostream& json_out, std::ostream& table_out) {
  const auto result = run_importance(args.input, args.feature_set, args.max_components);
  table_out << result.table;
  if (args.out) {
    write_file_atomic(*args.out, result.json);
  } else {
    json_out << result.json;
  }
}

}  // namespace artauth
