#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "artauth/analysis.hpp"
#include "artauth/error.hpp"
#include "artauth/random.hpp"
#include "oracles.hpp"

using namespace artauth;

namespace {

std::vector<double> random_symmetric(Rng& rng, std::size_t n) {
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) a[i * n + j] = a[j * n + i] = rng.uniform(-1, 1);
  }
  return a;
}

}  // namespace

TEST(Jacobi, EigenvaluesMatchOracle) {
  Rng rng(3);
  for (std::size_t n : {1u, 2u, 4u, 9u, 28u}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = random_symmetric(rng, n);
      const auto e = jacobi_eigen(a, n);
      const auto ref = oracle::symmetric_eigenvalues(a, n);
      ASSERT_EQ(e.values.size(), n);
      for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(e.values[k], ref[k], 1e-8) << n;
    }
  }
}

TEST(Jacobi, EigenpairsReconstruct) {
  Rng rng(4);
  const std::size_t n = 12;
  const auto a = random_symmetric(rng, n);
  const auto e = jacobi_eigen(a, n);
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0, biggest = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double av = 0;
      for (std::size_t j = 0; j < n; ++j) av += a[i * n + j] * e.vector_entry(j, k);
      EXPECT_NEAR(av, e.values[k] * e.vector_entry(i, k), 1e-8);
      norm += e.vector_entry(i, k) * e.vector_entry(i, k);
      if (std::abs(e.vector_entry(i, k)) > std::abs(biggest)) biggest = e.vector_entry(i, k);
    }
    EXPECT_NEAR(norm, 1.0, 1e-10);
    EXPECT_GT(biggest, 0.0);
  }
}

TEST(Jacobi, RejectsAsymmetricAndMisshapen) {
  EXPECT_THROW(jacobi_eigen(std::vector<double>{1, 2, 3, 4}, 2), InputError);
  EXPECT_THROW(jacobi_eigen(std::vector<double>{1, 2, 3}, 2), InputError);
}

TEST(Covariance, SampleDefinition) {
  const std::vector<Vector> rows{{1, 2}, {3, 6}, {5, 4}};
  const auto c = covariance_matrix(rows);
  EXPECT_DOUBLE_EQ(c[0], 4.0);
  EXPECT_DOUBLE_EQ(c[3], 4.0);
  EXPECT_DOUBLE_EQ(c[1], 2.0);
  EXPECT_EQ(c[1], c[2]);
}

TEST(Importance, SumsToOneAndRatiosSumToOne) {
  Rng rng(9);
  const auto rows = oracle::gaussian_points(rng, 40, 6);
  for (std::size_t comps : {0u, 1u, 3u, 6u}) {
    const auto r = feature_importance(rows, comps);
    EXPECT_NEAR(std::accumulate(r.contributions.begin(), r.contributions.end(), 0.0), 1.0, 1e-12);
    EXPECT_NEAR(std::accumulate(r.explained_variance_ratio.begin(), r.explained_variance_ratio.end(), 0.0), 1.0,
                1e-12);
    EXPECT_EQ(r.components_used, comps == 0 ? 6u : comps);
    for (double c : r.contributions) EXPECT_GE(c, 0.0);
    EXPECT_TRUE(std::is_sorted(r.eigenvalues.rbegin(), r.eigenvalues.rend()));
  }
}

TEST(Importance, SingleVaryingDimensionTakesAll) {
  Rng rng(10);
  std::vector<Vector> rows;
  for (int i = 0; i < 30; ++i) rows.push_back({0.5, rng.uniform(-3, 3), 2.0, -1.0});
  const auto r = feature_importance(rows);
  EXPECT_NEAR(r.contributions[1], 1.0, 1e-12);
}

TEST(Importance, PermutingColumnsPermutesContributions) {
  Rng rng(12);
  auto rows = oracle::gaussian_points(rng, 50, 5);
  for (auto& r : rows) r[2] *= 4.0, r[4] = r[2] + 0.3 * r[4];
  const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
  std::vector<Vector> permuted;
  for (const auto& r : rows) {
    Vector p(5);
    for (std::size_t j = 0; j < 5; ++j) p[j] = r[perm[j]];
    permuted.push_back(p);
  }
  const auto a = feature_importance(rows, 2);
  const auto b = feature_importance(permuted, 2);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(b.contributions[j], a.contributions[perm[j]], 1e-9);
}

TEST(NormalCdf, MatchesSeries) {
  for (double x : {-3.0, -1.2, 0.0, 0.4, 1.87, 3.0}) EXPECT_NEAR(normal_cdf(x), oracle::normal_cdf_series(x), 1e-12);
  EXPECT_NEAR(normal_cdf(1.87), 0.969258, 1e-6);
  EXPECT_EQ(normal_cdf(0.0), 0.5);
}

TEST(Calibrate, MonotoneInDecision) {
  OcSvmModel m;
  m.support_vectors = {{0.0}};
  m.alphas = {1.0};
  m.train_score_mean = 0.02;
  m.train_score_std = 0.01;
  double prev = -1;
  for (double d = -0.1; d <= 0.1; d += 0.005) {
    const auto s = calibrate(m, d);
    EXPECT_GE(s.confidence, prev);
    EXPECT_NEAR(s.z_score, (d - 0.02) / 0.01, 1e-12);
    EXPECT_FALSE(s.degenerate);
    prev = s.confidence;
  }
  EXPECT_NEAR(calibrate(m, 0.02, 1.0).confidence, normal_cdf(1.0), 1e-15);
}

TEST(Calibrate, ZeroSpreadIsAStep) {
  OcSvmModel m;
  m.support_vectors = {{0.0}};
  m.alphas = {1.0};
  m.train_score_mean = 0.5;
  const auto hi = calibrate(m, 0.5);
  EXPECT_TRUE(hi.degenerate);
  EXPECT_EQ(hi.confidence, 1.0);
  EXPECT_EQ(calibrate(m, 0.49).confidence, 0.0);
  m.support_vectors.clear();
  EXPECT_THROW(calibrate(m, 0.0), InputError);
}
