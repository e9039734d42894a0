#include <fstream>

#include <gtest/gtest.h>

#include "artauth/error.hpp"
#include "artauth/persistence.hpp"
#include "artauth/random.hpp"
#include "oracles.hpp"
#include "tempdir.hpp"

using namespace artauth;

namespace {

ModelFile fitted_model(FeatureSet set, std::uint64_t seed) {
  Rng rng(seed);
  const auto x = oracle::gaussian_points(rng, 30, dimension(set));
  ModelFile m;
  m.model = fit_pipeline(x, 0.2, {0.05});
  m.feature_set = set;
  m.provenance = {seed, hex64(seed * 31), tool_version(), 30};
  return m;
}

FeatureTable random_table(std::size_t n, bool labelled, std::uint64_t seed) {
  Rng rng(seed);
  FeatureTable t;
  for (std::size_t i = 0; i < n; ++i) {
    Vector v(fused_schema().size());
    for (auto& x : v) x = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.below(40)) - 20);
    t.rows.push_back({"painting-" + std::to_string(i), v});
    if (labelled) t.labels.push_back(i % 3 ? Label::Positive : Label::Negative);
  }
  if (!labelled) t.labels.assign(n, std::nullopt);
  return t;
}

void write_text(const std::filesystem::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST(ModelJson, RoundTripPreservesDecisionsExactly) {
  TempDir dir;
  Rng rng(2);
  for (FeatureSet set : {FeatureSet::Fused, FeatureSet::Visual, FeatureSet::Xray}) {
    const auto m = fitted_model(set, 5);
    save_model(dir / "m.json", m);
    const auto back = load_model(dir / "m.json");
    EXPECT_EQ(back.feature_set, set);
    EXPECT_EQ(back.model.rho, m.model.rho);
    EXPECT_EQ(back.model.alphas, m.model.alphas);
    EXPECT_EQ(back.model.train_score_std, m.model.train_score_std);
    EXPECT_EQ(back.provenance.config_hash, m.provenance.config_hash);
    for (const auto& probe : oracle::gaussian_points(rng, 100, dimension(set))) {
      EXPECT_EQ(score_raw(back.model, probe), score_raw(m.model, probe));
    }
    EXPECT_EQ(model_to_json(back), model_to_json(m));
  }
}

TEST(ModelJson, RejectsForeignOrInconsistentFiles) {
  const std::string good = model_to_json(fitted_model(FeatureSet::Visual, 1));
  auto mutate = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    const auto at = s.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    return s.replace(at, from.size(), to);
  };
  EXPECT_NO_THROW(model_from_json(good));
  EXPECT_THROW(model_from_json(mutate("\"format_version\": 1", "\"format_version\": 2")), InputError);
  EXPECT_THROW(model_from_json(mutate("artauth-model", "other-model")), InputError);
  EXPECT_THROW(model_from_json(mutate("\"feature_set\": \"visual\"", "\"feature_set\": \"xray\"")), InputError);
  EXPECT_THROW(model_from_json(good.substr(0, good.size() / 2)), InputError);
  EXPECT_THROW(model_from_json("[]"), InputError);
  EXPECT_THROW(model_from_json(""), InputError);
}

TEST(ModelJson, MissingFileIsInputError) {
  EXPECT_THROW(load_model("/nonexistent/model.json"), InputError);
}

TEST(FeatureTable, CsvRoundTripIsExact) {
  for (bool labelled : {true, false}) {
    const auto t = random_table(25, labelled, 8);
    const auto back = feature_table_from_csv(feature_table_to_csv(t));
    ASSERT_EQ(back.rows.size(), t.rows.size());
    EXPECT_EQ(back.has_labels(), labelled);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      EXPECT_EQ(back.rows[i].painting_id, t.rows[i].painting_id);
      EXPECT_EQ(back.rows[i].values, t.rows[i].values);
      EXPECT_EQ(back.labels[i], t.labels[i]);
    }
    EXPECT_EQ(feature_table_to_csv(back), feature_table_to_csv(t));
  }
}

TEST(FeatureTable, JsonRoundTripIsExact) {
  const auto t = random_table(10, true, 9);
  const auto back = feature_table_from_json(feature_table_to_json(t));
  for (std::size_t i = 0; i < t.rows.size(); ++i) EXPECT_EQ(back.rows[i].values, t.rows[i].values);
  EXPECT_EQ(back.labels, t.labels);
}

TEST(FeatureTable, LoadDispatchesOnExtension) {
  TempDir dir;
  const auto t = random_table(4, false, 1);
  write_text(dir / "t.json", feature_table_to_json(t));
  write_text(dir / "t.csv", feature_table_to_csv(t));
  EXPECT_EQ(load_feature_table(dir / "t.json").rows[3].values, t.rows[3].values);
  EXPECT_EQ(load_feature_table(dir / "t.csv").rows[3].values, t.rows[3].values);
}

TEST(FeatureTable, RejectsMalformedCsv) {
  const std::string csv = feature_table_to_csv(random_table(3, false, 2));
  const auto header = csv.substr(0, csv.find('\n') + 1);
  EXPECT_THROW(feature_table_from_csv(""), InputError);
  EXPECT_THROW(feature_table_from_csv("name" + csv.substr(2)), InputError);
  EXPECT_THROW(feature_table_from_csv(header + "a,1,2\n"), InputError);
  const auto first_row = csv.substr(header.size(), csv.find('\n', header.size()) + 1 - header.size());
  EXPECT_THROW(feature_table_from_csv(header + first_row + first_row), InputError);
  auto bad = random_table(1, false, 3);
  bad.rows[0].painting_id = "a,b";
  EXPECT_THROW(feature_table_to_csv(bad), InputError);
}

TEST(Manifest, ResolvesRelativePathsAndLabels) {
  TempDir dir;
  write_text(dir / "m.csv",
             "id,visual_path,xray_path,label\n"
             "a,img/a_v.png,img/a_x.png,authentic\n"
             "b,/abs/b_v.png,/abs/b_x.png,forgery\n"
             "c,c_v.png,c_x.png,\n");
  const auto rows = load_manifest(dir / "m.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].visual, dir.path() / "img/a_v.png");
  EXPECT_EQ(rows[1].xray, std::filesystem::path("/abs/b_x.png"));
  EXPECT_EQ(rows[0].label, Label::Positive);
  EXPECT_EQ(rows[1].label, Label::Negative);
  EXPECT_FALSE(rows[2].label);
}

TEST(Manifest, RejectsBadFiles) {
  TempDir dir;
  write_text(dir / "dup.csv", "id,visual_path,xray_path\na,v,x\na,v2,x2\n");
  write_text(dir / "hdr.csv", "name,visual,xray\na,v,x\n");
  write_text(dir / "lbl.csv", "id,visual_path,xray_path,label\na,v,x,maybe\n");
  write_text(dir / "empty.csv", "");
  for (const char* f : {"dup.csv", "hdr.csv", "lbl.csv", "empty.csv", "missing.csv"}) {
    EXPECT_THROW(load_manifest(dir / f), InputError) << f;
  }
}

TEST(Reports, ImportanceJsonIsSortedDescending) {
  ImportanceReport r;
  r.dimension = 3;
  r.components_used = 3;
  r.contributions = {0.2, 0.5, 0.3};
  r.eigenvalues = {2, 1, 0.5};
  r.explained_variance_ratio = {0.4, 0.4, 0.2};
  r.loadings.assign(9, 0.0);
  const auto j = importance_to_json(r, {"x", "y", "z"});
  EXPECT_LT(j.find("\"y\""), j.find("\"z\""));
  EXPECT_LT(j.find("\"z\""), j.find("\"x\""));
}

TEST(AtomicWrite, ReplacesContent) {
  TempDir dir;
  write_file_atomic(dir / "f.txt", "one");
  write_file_atomic(dir / "f.txt", "two");
  EXPECT_EQ(read_file(dir / "f.txt"), "two");
  EXPECT_FALSE(std::filesystem::exists(dir / "f.txt.tmp"));
  EXPECT_THROW(write_file_atomic("/nonexistent/dir/f.txt", "x"), InputError);
}
