#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "artauth/fusion.hpp"
#include "artauth/ocsvm.hpp"

namespace artauth {

enum class Label { Positive, Negative };

struct TrainTestSplit {
  std::vector<std::size_t> train;  ///< row indices into the input
  std::vector<std::size_t> test;
};

/// Painting-level split after a seeded shuffle. The test side gets
/// ceil(n * test_fraction) paintings (at least 1, leaving at least 1 to train).
TrainTestSplit split_train_test(std::size_t n_paintings, double test_fraction, std::uint64_t seed);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Seeded shuffle of painting indices, then contiguous chunks; the first
/// n mod k folds carry one extra painting.
std::vector<Fold> grouped_kfold(std::size_t n_paintings, std::size_t k, std::uint64_t seed);

/// Pseudo-anomalies around standardised training rows: the first ceil(count/2)
/// combine per-dimension independent permutations of training values, the rest
/// are uniform over [min - 1, max + 1] per dimension.
std::vector<Vector> synthesize_negatives(std::span<const Vector> train, std::size_t count, std::uint64_t seed);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double fpr = 0.0;
  /// Set when a ratio had a zero denominator and was reported as 0.
  bool undefined_ratio = false;
};

/// Positive label = authentic; Authentic verdict = predicted positive.
Confusion confusion(std::span<const Verdict> predictions, std::span<const Label> labels);
Metrics metrics_from(const Confusion& c);
Metrics compute_metrics(std::span<const Verdict> predictions, std::span<const Label> labels);

struct GridConfig {
  std::vector<double> nus{0.01, 0.05, 0.1, 0.15, 0.2};
  std::vector<double> gammas{0.001, 0.01, 0.1, 1.0};
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  SolverOptions solver;

  void validate() const;
};

struct FoldResult {
  std::size_t fold = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> validation_ids;
  std::size_t negatives = 0;
  Confusion confusion;
  Metrics metrics;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  ///< population std across folds
};

struct CellResult {
  double nu = 0.0;
  double gamma = 0.0;
  std::vector<FoldResult> folds;
  MetricSummary accuracy, precision, recall, f1, fpr;
};

struct CvReport {
  std::vector<CellResult> cells;  ///< in (nu, gamma) grid order
  std::size_t best_cell = 0;
  double best_nu = 0.0;
  double best_gamma = 0.0;
  std::size_t n_train_paintings = 0;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::string negative_descriptor;

  const CellResult& best() const { return cells.at(best_cell); }
};

/// Called once per (cell, fold) with the fold's standardising scaler, before
/// validation rows are scored. Lets callers audit leakage.
struct FoldAudit {
  std::size_t cell;
  std::size_t fold;
  const Fold& split;
  const Scaler& scaler;
};
using FoldObserver = std::function<void(const FoldAudit&)>;

struct GridSearchResult {
  CvReport report;
  OcSvmModel model;  ///< winning (nu, gamma) refit on every training row
};

/// Grouped k-fold grid search maximising mean validation F1 over the
/// (nu, gamma) grid. Each fold fits its own scaler on fold-train rows,
/// trains on them, then scores the validation positives plus one synthetic
/// negative per validation positive. Ties go to smaller nu, then smaller gamma.
/// Training failures are rethrown with the grid cell attached.
GridSearchResult grid_search(std::span<const FusedVector> train, const GridConfig& cfg,
                             const FoldObserver& observer = {});

/// Seed for the synthetic negatives of a fold; shared by every grid cell.
std::uint64_t fold_negative_seed(std::uint64_t seed, std::size_t fold);

}  // namespace artauth
