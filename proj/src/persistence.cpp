#include "artauth/persistence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "artauth/error.hpp"

#ifndef ARTAUTH_VERSION
#define ARTAUTH_VERSION "dev"
#endif

namespace artauth {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kModelFormat = "artauth-model";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const std::string& context) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw InputError(context + ": '" + s + "' is not a number");
  return v;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericalError("refusing to serialise a non-finite value");
    a.push_back(x);
  }
  return a;
}

json metrics_json(const Metrics& m) {
  return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall},
          {"f1", m.f1},             {"fpr", m.fpr},             {"undefined_ratio", m.undefined_ratio}};
}

json confusion_json(const Confusion& c) { return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}}; }

json summary_json(const MetricSummary& s) { return {{"mean", s.mean}, {"std", s.std}}; }

}  // namespace

std::string tool_version() { return ARTAUTH_VERSION; }

std::string model_to_json(const ModelFile& m) {
  const auto& mod = m.model;
  json j;
  j["format"] = kModelFormat;
  j["format_version"] = kModelFormatVersion;
  j["feature_schema_version"] = m.feature_schema_version;
  j["feature_set"] = std::string(to_string(m.feature_set));
  j["schema"] = m.schema();
  const auto& pre = m.extraction.preprocess;
  j["extraction"] = {{"target_size", pre.target_size},
                     {"clahe_clip_limit", pre.clahe_clip_limit},
                     {"clahe_tile_grid", pre.clahe_tile_grid},
                     {"gray_levels", pre.gray_levels},
                     {"hue_variance", m.extraction.hue_mode == HueVarianceMode::Circular ? "circular" : "linear"}};
  j["scaler"] = {{"means", vector_json(mod.scaler.means)},
                 {"stds", vector_json(mod.scaler.stds)},
                 {"degenerate", mod.scaler.degenerate}};
  j["svm"] = {{"nu", mod.nu}, {"gamma", mod.params.gamma}, {"rho", mod.rho}, {"alphas", vector_json(mod.alphas)}};
  json svs = json::array();
  for (const auto& sv : mod.support_vectors) svs.push_back(vector_json(sv));
  j["svm"]["support_vectors"] = std::move(svs);
  j["calibration"] = {{"train_score_mean", mod.train_score_mean}, {"train_score_std", mod.train_score_std}};
  j["provenance"] = {{"seed", m.provenance.seed},
                     {"config_hash", m.provenance.config_hash},
                     {"tool_version", m.provenance.tool_version},
                     {"n_train", m.provenance.n_train}};
  return j.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != kModelFormat) throw InputError("not an artauth model file");
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw InputError("unsupported model format version " + std::to_string(version) + " (expected " +
                       std::to_string(kModelFormatVersion) + ")");
    }
    ModelFile m;
    m.feature_schema_version = j.at("feature_schema_version").get<int>();
    m.feature_set = parse_feature_set(j.at("feature_set").get<std::string>());
    if (j.at("schema").get<std::vector<std::string>>() != m.schema()) {
      throw InputError("model feature schema does not match this extractor");
    }

    const auto& ex = j.at("extraction");
    auto& pre = m.extraction.preprocess;
    pre.target_size = ex.at("target_size").get<int>();
    pre.clahe_clip_limit = ex.at("clahe_clip_limit").get<double>();
    pre.clahe_tile_grid = ex.at("clahe_tile_grid").get<int>();
    pre.gray_levels = ex.at("gray_levels").get<int>();
    const auto hue = ex.at("hue_variance").get<std::string>();
    if (hue != "circular" && hue != "linear") throw InputError("model has unknown hue_variance mode");
    m.extraction.hue_mode = hue == "circular" ? HueVarianceMode::Circular : HueVarianceMode::Linear;
    pre.validate();

    auto& mod = m.model;
    const auto& sc = j.at("scaler");
    mod.scaler.means = sc.at("means").get<Vector>();
    mod.scaler.stds = sc.at("stds").get<Vector>();
    mod.scaler.degenerate = sc.at("degenerate").get<std::vector<bool>>();
    const std::size_t d = dimension(m.feature_set);
    if (mod.scaler.means.size() != d || mod.scaler.stds.size() != d || mod.scaler.degenerate.size() != d) {
      throw InputError("model scaler has the wrong dimension");
    }

    const auto& svm = j.at("svm");
    mod.nu = svm.at("nu").get<double>();
    mod.params.gamma = svm.at("gamma").get<double>();
    mod.rho = svm.at("rho").get<double>();
    mod.alphas = svm.at("alphas").get<Vector>();
    mod.support_vectors = svm.at("support_vectors").get<std::vector<Vector>>();
    if (mod.alphas.size() != mod.support_vectors.size() || mod.alphas.empty()) {
      throw InputError("model support vectors and coefficients disagree");
    }
    for (const auto& sv : mod.support_vectors) {
      if (sv.size() != d) throw InputError("model support vector has the wrong dimension");
    }
    for (double a : mod.alphas) {
      if (!(a > 0.0)) throw InputError("model contains a non-positive coefficient");
    }
    if (!(mod.params.gamma > 0.0) || !(mod.nu > 0.0 && mod.nu <= 1.0)) {
      throw InputError("model hyperparameters out of range");
    }

    const auto& cal = j.at("calibration");
    mod.train_score_mean = cal.at("train_score_mean").get<double>();
    mod.train_score_std = cal.at("train_score_std").get<double>();

    const auto& prov = j.at("provenance");
    m.provenance.seed = prov.at("seed").get<std::uint64_t>();
    m.provenance.config_hash = prov.at("config_hash").get<std::string>();
    m.provenance.tool_version = prov.at("tool_version").get<std::string>();
    m.provenance.n_train = prov.at("n_train").get<std::size_t>();
    return m;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const ModelFile& m) { write_file_atomic(path, model_to_json(m)); }

ModelFile load_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

bool FeatureTable::has_labels() const {
  return !labels.empty() && std::all_of(labels.begin(), labels.end(), [](const auto& l) { return l.has_value(); });
}

std::string label_name(Label l) { return l == Label::Positive ? "authentic" : "forgery"; }

Label parse_label(const std::string& text) {
  if (text == "authentic" || text == "positive" || text == "1") return Label::Positive;
  if (text == "forgery" || text == "negative" || text == "0") return Label::Negative;
  throw InputError("unknown label '" + text + "' (expected authentic or forgery)");
}

std::string feature_table_to_csv(const FeatureTable& t) {
  const bool labelled = t.has_labels();
  std::ostringstream os;
  os << "id";
  if (labelled) os << ",label";
  for (const auto& name : fused_schema()) os << ',' << name;
  os << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.painting_id.find_first_of(",\n\r") != std::string::npos) {
      throw InputError("painting id '" + row.painting_id + "' contains a CSV delimiter");
    }
    if (row.values.size() != kFusedCount) throw InputError("feature row has the wrong width");
    os << row.painting_id;
    if (labelled) os << ',' << label_name(*t.labels[r]);
    for (double v : row.values) os << ',' << format_double(v);
    os << '\n';
  }
  return os.str();
}

std::string feature_table_to_json(const FeatureTable& t) {
  json out = json::array();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    json rec;
    rec["id"] = row.painting_id;
    if (r < t.labels.size() && t.labels[r]) rec["label"] = label_name(*t.labels[r]);
    for (Modality m : {Modality::Visual, Modality::Xray}) {
      json block;
      const std::size_t base = m == Modality::Visual ? 0 : kFeatureCount;
      for (std::size_t i = 0; i < kFeatureCount; ++i) block[std::string(feature_schema(m)[i])] = row.values[base + i];
      rec[std::string(to_string(m))] = std::move(block);
    }
    out.push_back(std::move(rec));
  }
  return out.dump(2) + "\n";
}

FeatureTable feature_table_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("feature table is empty");
  const auto header = split_csv_line(line);
  const auto names = fused_schema();
  if (header.empty() || header[0] != "id") throw InputError("feature table must start with an 'id' column");
  const bool labelled = header.size() > 1 && header[1] == "label";
  const std::size_t first = labelled ? 2 : 1;
  if (header.size() != first + kFusedCount ||
      !std::equal(names.begin(), names.end(), header.begin() + static_cast<std::ptrdiff_t>(first))) {
    throw InputError("feature table header does not match the fused feature schema");
  }

  FeatureTable t;
  std::set<std::string> seen;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    const std::string ctx = "feature table line " + std::to_string(lineno);
    if (cells.size() != header.size()) throw InputError(ctx + ": expected " + std::to_string(header.size()) + " columns");
    if (!seen.insert(cells[0]).second) throw InputError(ctx + ": duplicate id '" + cells[0] + "'");
    FusedVector row{cells[0], Vector(kFusedCount)};
    for (std::size_t i = 0; i < kFusedCount; ++i) row.values[i] = parse_number(cells[first + i], ctx);
    t.rows.push_back(std::move(row));
    t.labels.push_back(labelled ? std::optional<Label>(parse_label(cells[1])) : std::nullopt);
  }
  return t;
}

FeatureTable feature_table_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (!j.is_array()) throw InputError("feature JSON must be an array of records");
    FeatureTable t;
    std::set<std::string> seen;
    for (const auto& rec : j) {
      FusedVector row{rec.at("id").get<std::string>(), Vector(kFusedCount)};
      if (!seen.insert(row.painting_id).second) throw InputError("duplicate id '" + row.painting_id + "'");
      for (Modality m : {Modality::Visual, Modality::Xray}) {
        const auto& block = rec.at(std::string(to_string(m)));
        const std::size_t base = m == Modality::Visual ? 0 : kFeatureCount;
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
          row.values[base + i] = block.at(std::string(feature_schema(m)[i])).get<double>();
        }
      }
      t.rows.push_back(std::move(row));
      t.labels.push_back(rec.contains("label") ? std::optional<Label>(parse_label(rec["label"].get<std::string>()))
                                              : std::nullopt);
    }
    return t;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed feature JSON: ") + e.what());
  }
}

FeatureTable load_feature_table(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return path.extension() == ".json" ? feature_table_from_json(text) : feature_table_from_csv(text);
}

std::vector<ManifestRow> load_manifest(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto base = path.parent_path();
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("manifest '" + path.string() + "' is empty");
  const auto header = split_csv_line(line);
  const bool ok_header = header.size() >= 3 && header[0] == "id" && header[1] == "visual_path" &&
                         header[2] == "xray_path" && (header.size() == 3 || (header.size() == 4 && header[3] == "label"));
  if (!ok_header) throw InputError("manifest header must be id,visual_path,xray_path[,label]");
  const bool labelled = header.size() == 4;

  std::vector<ManifestRow> rows;
  std::set<std::string> seen;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    const std::string ctx = path.string() + ":" + std::to_string(lineno);
    if (cells.size() < 3 || cells.size() > header.size()) throw InputError(ctx + ": wrong number of columns");
    cells.resize(header.size());
    ManifestRow row;
    row.id = cells[0];
    if (row.id.empty()) throw InputError(ctx + ": empty painting id");
    if (!seen.insert(row.id).second) throw InputError(ctx + ": duplicate painting id '" + row.id + "'");
    auto resolve = [&](const std::string& p) {
      std::filesystem::path fp(p);
      return fp.is_absolute() ? fp : base / fp;
    };
    // Missing paths are reported per painting at extraction time.
    row.visual = cells[1].empty() ? std::filesystem::path{} : resolve(cells[1]);
    row.xray = cells[2].empty() ? std::filesystem::path{} : resolve(cells[2]);
    if (labelled && !cells[3].empty()) row.label = parse_label(cells[3]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string cv_report_to_json(const CvReport& r) {
  json j;
  j["n_train_paintings"] = r.n_train_paintings;
  j["folds"] = r.folds;
  j["seed"] = r.seed;
  j["negatives"] = r.negative_descriptor;
  j["best"] = {{"cell", r.best_cell}, {"nu", r.best_nu}, {"gamma", r.best_gamma}};
  json cells = json::array();
  for (const auto& c : r.cells) {
    json cj;
    cj["nu"] = c.nu;
    cj["gamma"] = c.gamma;
    cj["accuracy"] = summary_json(c.accuracy);
    cj["precision"] = summary_json(c.precision);
    cj["recall"] = summary_json(c.recall);
    cj["f1"] = summary_json(c.f1);
    cj["fpr"] = summary_json(c.fpr);
    json folds = json::array();
    for (const auto& f : c.folds) {
      folds.push_back({{"fold", f.fold},
                       {"train_ids", f.train_ids},
                       {"validation_ids", f.validation_ids},
                       {"negatives", f.negatives},
                       {"confusion", confusion_json(f.confusion)},
                       {"metrics", metrics_json(f.metrics)}});
    }
    cj["per_fold"] = std::move(folds);
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

std::string importance_to_json(const ImportanceReport& r, const std::vector<std::string>& names) {
  json j;
  j["dimension"] = r.dimension;
  j["components_used"] = r.components_used;
  std::vector<std::size_t> order(r.contributions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r.contributions[a] > r.contributions[b]; });
  json contrib = json::array();
  for (std::size_t i : order) {
    contrib.push_back({{"feature", i < names.size() ? names[i] : std::to_string(i)},
                       {"index", i},
                       {"contribution", r.contributions[i]}});
  }
  j["contributions"] = std::move(contrib);
  j["eigenvalues"] = r.eigenvalues;
  j["explained_variance_ratio"] = r.explained_variance_ratio;
  json loadings = json::array();
  for (std::size_t f = 0; f < r.dimension; ++f) {
    Vector row(r.loadings.begin() + static_cast<std::ptrdiff_t>(f * r.dimension),
               r.loadings.begin() + static_cast<std::ptrdiff_t>((f + 1) * r.dimension));
    loadings.push_back(row);
  }
  j["loadings"] = std::move(loadings);
  return j.dump(2) + "\n";
}

std::string calibrated_to_json(const CalibratedScore& s, Verdict verdict, const std::string& feature_set) {
  json j;
  j["decision_value"] = s.decision_value;
  j["z_score"] = s.z_score;
  j["confidence"] = s.confidence;
  j["classification"] = verdict == Verdict::Authentic ? "authentic" : "anomalous";
  j["degenerate_calibration"] = s.degenerate;
  j["feature_set"] = feature_set;
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write '" + path.string() + "'");
    f << content;
    f.flush();
    if (!f) throw InputError("failed writing '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot move output into place at '" + path.string() + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace artauth
