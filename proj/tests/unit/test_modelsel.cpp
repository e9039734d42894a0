#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "artauth/error.hpp"
#include "artauth/modelsel.hpp"
#include "artauth/random.hpp"
#include "oracles.hpp"

using namespace artauth;

namespace {

std::vector<FusedVector> gaussian_rows(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  const auto pts = oracle::gaussian_points(rng, n, d);
  std::vector<FusedVector> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back({"p" + std::to_string(i), pts[i]});
  return rows;
}

}  // namespace

TEST(Split, SizesUseCeiling) {
  EXPECT_EQ(split_train_test(19, 0.2, 1).test.size(), 4u);
  EXPECT_EQ(split_train_test(20, 0.2, 1).test.size(), 4u);
  EXPECT_EQ(split_train_test(21, 0.2, 1).test.size(), 5u);
  EXPECT_EQ(split_train_test(2, 0.01, 1).test.size(), 1u);
  EXPECT_EQ(split_train_test(2, 0.99, 1).train.size(), 1u);
}

TEST(Split, PartitionAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = split_train_test(37, 0.25, seed);
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    for (std::size_t i : s.test) EXPECT_TRUE(all.insert(i).second) << "index on both sides";
    EXPECT_EQ(all.size(), 37u);
    const auto again = split_train_test(37, 0.25, seed);
    EXPECT_EQ(s.test, again.test);
  }
  EXPECT_NE(split_train_test(37, 0.25, 1).test, split_train_test(37, 0.25, 2).test);
}

TEST(Split, RejectsBadArguments) {
  EXPECT_THROW(split_train_test(1, 0.2, 0), InputError);
  EXPECT_THROW(split_train_test(10, 0.0, 0), InputError);
  EXPECT_THROW(split_train_test(10, 1.0, 0), InputError);
}

TEST(GroupedKFold, PartitionsPaintings) {
  for (std::size_t n : {10u, 17u, 23u}) {
    for (std::size_t k : {2u, 5u, 10u}) {
      const auto folds = grouped_kfold(n, k, 7);
      ASSERT_EQ(folds.size(), k);
      std::vector<int> seen(n, 0);
      for (std::size_t f = 0; f < k; ++f) {
        const auto& fold = folds[f];
        const std::size_t expect = n / k + (f < n % k ? 1 : 0);
        EXPECT_EQ(fold.validation.size(), expect);
        EXPECT_EQ(fold.train.size() + fold.validation.size(), n);
        for (std::size_t v : fold.validation) {
          ++seen[v];
          EXPECT_FALSE(std::binary_search(fold.train.begin(), fold.train.end(), v));
        }
      }
      for (int c : seen) EXPECT_EQ(c, 1);
    }
  }
}

TEST(GroupedKFold, DeterministicAndRejectsTooManyFolds) {
  const auto a = grouped_kfold(20, 4, 3);
  const auto b = grouped_kfold(20, 4, 3);
  for (std::size_t f = 0; f < 4; ++f) EXPECT_EQ(a[f].validation, b[f].validation);
  EXPECT_THROW(grouped_kfold(5, 6, 0), InputError);
  EXPECT_THROW(grouped_kfold(5, 1, 0), InputError);
}

TEST(Negatives, CountRangeAndDeterminism) {
  Rng rng(11);
  const auto train = oracle::gaussian_points(rng, 9, 4);
  for (std::size_t count : {1u, 2u, 7u, 30u}) {
    const auto neg = synthesize_negatives(train, count, 5);
    ASSERT_EQ(neg.size(), count);
    EXPECT_EQ(neg, synthesize_negatives(train, count, 5));
    for (std::size_t j = 0; j < 4; ++j) {
      double lo = train[0][j], hi = train[0][j];
      for (const auto& r : train) lo = std::min(lo, r[j]), hi = std::max(hi, r[j]);
      for (std::size_t r = 0; r < count; ++r) {
        EXPECT_GE(neg[r][j], lo - 1.0);
        EXPECT_LE(neg[r][j], hi + 1.0);
      }
      // Permutation rows reuse observed values in each dimension.
      for (std::size_t r = 0; r < (count + 1) / 2; ++r) {
        EXPECT_TRUE(std::any_of(train.begin(), train.end(), [&](const Vector& t) { return t[j] == neg[r][j]; }));
      }
    }
  }
  EXPECT_THROW(synthesize_negatives({}, 3, 0), InputError);
  EXPECT_THROW(synthesize_negatives(train, 0, 0), InputError);
}

TEST(Metrics, FromCounts) {
  const std::vector<Verdict> pred{Verdict::Authentic, Verdict::Authentic, Verdict::Anomalous, Verdict::Anomalous,
                                  Verdict::Authentic};
  const std::vector<Label> lab{Label::Positive, Label::Negative, Label::Negative, Label::Positive,
                               Label::Positive};
  const auto c = confusion(pred, lab);
  EXPECT_EQ(c.tp, 2u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.tn, 1u);
  EXPECT_EQ(c.fn, 1u);
  const auto m = metrics_from(c);
  EXPECT_DOUBLE_EQ(m.accuracy, 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(m.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.fpr, 0.5);
  EXPECT_DOUBLE_EQ(m.f1, 2 * m.precision * m.recall / (m.precision + m.recall));
  EXPECT_FALSE(m.undefined_ratio);
}

TEST(Metrics, ZeroDenominatorsAreFlagged) {
  const std::vector<Verdict> pred{Verdict::Anomalous, Verdict::Anomalous};
  const std::vector<Label> lab{Label::Negative, Label::Negative};
  const auto m = compute_metrics(pred, lab);
  EXPECT_TRUE(m.undefined_ratio);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_THROW(compute_metrics(pred, std::vector<Label>{Label::Negative}), InputError);
  EXPECT_THROW(compute_metrics({}, {}), InputError);
}

TEST(GridSearch, ReportShape) {
  const auto rows = gaussian_rows(24, 5, 31);
  GridConfig cfg;
  cfg.folds = 4;
  const auto result = grid_search(rows, cfg);
  const auto& r = result.report;
  ASSERT_EQ(r.cells.size(), 20u);
  EXPECT_EQ(r.n_train_paintings, 24u);
  for (std::size_t c = 0; c < r.cells.size(); ++c) {
    EXPECT_EQ(r.cells[c].nu, cfg.nus[c / 4]);
    EXPECT_EQ(r.cells[c].gamma, cfg.gammas[c % 4]);
    ASSERT_EQ(r.cells[c].folds.size(), 4u);
    for (const auto& f : r.cells[c].folds) {
      EXPECT_EQ(f.negatives, f.validation_ids.size());
      EXPECT_EQ(f.confusion.total(), 2 * f.validation_ids.size());
    }
    EXPECT_LE(r.cells[c].f1.mean, r.best().f1.mean);
  }
  EXPECT_EQ(r.best_nu, r.best().nu);
  EXPECT_EQ(result.model.nu, r.best_nu);
  EXPECT_EQ(result.model.params.gamma, r.best_gamma);
}

TEST(GridSearch, TiesGoToSmallerNuThenGamma) {
  const auto rows = gaussian_rows(12, 3, 4);
  GridConfig cfg;
  cfg.folds = 3;
  cfg.nus = {0.2, 0.1};
  cfg.gammas = {1.0, 0.1, 1.0};
  const auto r = grid_search(rows, cfg).report;
  double best = -1;
  for (const auto& c : r.cells) best = std::max(best, c.f1.mean);
  double nu = 2, gamma = 2;
  for (const auto& c : r.cells) {
    if (c.f1.mean == best && (c.nu < nu || (c.nu == nu && c.gamma < gamma))) nu = c.nu, gamma = c.gamma;
  }
  EXPECT_EQ(r.best_nu, nu);
  EXPECT_EQ(r.best_gamma, gamma);
  // Repeated cells score identically; the earlier one wins.
  EXPECT_EQ(r.cells[0].f1.mean, r.cells[2].f1.mean);
  EXPECT_NE(r.best_cell % 3, 2u);
}

TEST(GridSearch, ScalerSeesOnlyFoldTrainRows) {
  const auto rows = gaussian_rows(19, 4, 77);
  GridConfig cfg;
  std::size_t calls = 0;
  grid_search(rows, cfg, [&](const FoldAudit& a) {
    ++calls;
    std::vector<Vector> train;
    for (std::size_t i : a.split.train) train.push_back(rows[i].values);
    const Scaler ref = fit_scaler(std::span<const Vector>(train));
    EXPECT_EQ(a.scaler.means, ref.means);
    EXPECT_EQ(a.scaler.stds, ref.stds);
    for (std::size_t v : a.split.validation) {
      EXPECT_FALSE(std::binary_search(a.split.train.begin(), a.split.train.end(), v));
    }
  });
  EXPECT_EQ(calls, 20u * 10u);
}

TEST(GridSearch, RejectsTooFewPaintings) {
  const auto rows = gaussian_rows(5, 2, 1);
  GridConfig cfg;
  EXPECT_THROW(grid_search(rows, cfg), InputError);
  cfg.nus = {};
  EXPECT_THROW(cfg.validate(), InputError);
  cfg.nus = {1.5};
  EXPECT_THROW(cfg.validate(), InputError);
}
