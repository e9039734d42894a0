#include "artauth/modelsel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "artauth/error.hpp"
#include "artauth/random.hpp"

namespace artauth {

namespace {

constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kFoldStream = 2;
constexpr std::uint64_t kNegativeStream = 1000;

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(idx));
  return idx;
}

MetricSummary summarise(const std::vector<FoldResult>& folds, double Metrics::*field) {
  MetricSummary s;
  if (folds.empty()) return s;
  const double n = static_cast<double>(folds.size());
  for (const auto& f : folds) s.mean += f.metrics.*field;
  s.mean /= n;
  double var = 0.0;
  for (const auto& f : folds) var += (f.metrics.*field - s.mean) * (f.metrics.*field - s.mean);
  s.std = std::sqrt(var / n);
  return s;
}

std::string cell_tag(double nu, double gamma, std::size_t fold) {
  std::ostringstream os;
  os << "grid cell (nu=" << nu << ", gamma=" << gamma << ") fold " << fold << ": ";
  return os.str();
}

}  // namespace

TrainTestSplit split_train_test(std::size_t n_paintings, double test_fraction, std::uint64_t seed) {
  if (n_paintings < 2) throw InputError("train/test split needs at least 2 paintings");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw InputError("test_fraction must be in (0, 1)");

  const double raw = static_cast<double>(n_paintings) * test_fraction;
  auto n_test = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  n_test = std::clamp<std::size_t>(n_test, 1, n_paintings - 1);

  const auto order = shuffled_indices(n_paintings, derive_seed(seed, kSplitStream));
  TrainTestSplit split;
  split.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  split.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

std::vector<Fold> grouped_kfold(std::size_t n_paintings, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InputError("cross-validation needs at least 2 folds");
  if (k > n_paintings) {
    throw InputError("cannot build " + std::to_string(k) + " folds from " + std::to_string(n_paintings) +
                     " paintings");
  }
  const auto order = shuffled_indices(n_paintings, derive_seed(seed, kFoldStream));
  const std::size_t base = n_paintings / k;
  const std::size_t extra = n_paintings % k;

  std::vector<Fold> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    folds[f].validation.assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                               order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    std::sort(folds[f].validation.begin(), folds[f].validation.end());
    pos += size;
  }
  for (std::size_t f = 0; f < k; ++f) {
    for (std::size_t g = 0; g < k; ++g) {
      if (g != f) folds[f].train.insert(folds[f].train.end(), folds[g].validation.begin(), folds[g].validation.end());
    }
    std::sort(folds[f].train.begin(), folds[f].train.end());
  }
  return folds;
}

std::vector<Vector> synthesize_negatives(std::span<const Vector> train, std::size_t count, std::uint64_t seed) {
  if (train.empty()) throw InputError("synthesize_negatives needs training rows");
  if (count == 0) throw InputError("synthesize_negatives: count must be positive");
  const std::size_t m = train.size();
  const std::size_t d = train.front().size();

  Rng rng(seed);
  std::vector<Vector> out;
  out.reserve(count);

  const std::size_t n_shuffled = (count + 1) / 2;
  std::vector<std::vector<std::size_t>> perms(d, std::vector<std::size_t>(m));
  for (std::size_t r = 0; r < n_shuffled; ++r) {
    if (r % m == 0) {
      for (auto& p : perms) {
        std::iota(p.begin(), p.end(), 0);
        rng.shuffle(std::span<std::size_t>(p));
      }
    }
    Vector v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = train[perms[j][r % m]][j];
    out.push_back(std::move(v));
  }

  Vector lo(d, 0.0);
  Vector hi(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    lo[j] = hi[j] = train[0][j];
    for (const auto& row : train) {
      lo[j] = std::min(lo[j], row[j]);
      hi[j] = std::max(hi[j], row[j]);
    }
  }
  for (std::size_t r = n_shuffled; r < count; ++r) {
    Vector v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = rng.uniform(lo[j] - 1.0, hi[j] + 1.0);
    out.push_back(std::move(v));
  }
  return out;
}

Confusion confusion(std::span<const Verdict> predictions, std::span<const Label> labels) {
  if (predictions.size() != labels.size()) throw InputError("predictions and labels differ in length");
  if (predictions.empty()) throw InputError("cannot score an empty prediction set");
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool pred_pos = predictions[i] == Verdict::Authentic;
    const bool is_pos = labels[i] == Label::Positive;
    if (pred_pos && is_pos) ++c.tp;
    if (pred_pos && !is_pos) ++c.fp;
    if (!pred_pos && !is_pos) ++c.tn;
    if (!pred_pos && is_pos) ++c.fn;
  }
  return c;
}

Metrics metrics_from(const Confusion& c) {
  Metrics m;
  auto ratio = [&m](std::size_t num, std::size_t den) {
    if (den == 0) {
      m.undefined_ratio = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.fpr = ratio(c.fp, c.fp + c.tn);
  // F1 from counts: 2TP / (2TP + FP + FN), the harmonic mean of precision and recall.
  m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  return m;
}

Metrics compute_metrics(std::span<const Verdict> predictions, std::span<const Label> labels) {
  return metrics_from(confusion(predictions, labels));
}

void GridConfig::validate() const {
  if (nus.empty() || gammas.empty()) throw InputError("grid needs at least one nu and one gamma");
  for (double nu : nus) {
    if (!(nu > 0.0 && nu <= 1.0)) throw InputError("grid nu values must be in (0, 1]");
  }
  for (double g : gammas) {
    if (!(g > 0.0) || !std::isfinite(g)) throw InputError("grid gamma values must be > 0");
  }
  if (folds < 2) throw InputError("grid search needs at least 2 folds");
}

std::uint64_t fold_negative_seed(std::uint64_t seed, std::size_t fold) {
  return derive_seed(seed, kNegativeStream + fold);
}

GridSearchResult grid_search(std::span<const FusedVector> train, const GridConfig& cfg, const FoldObserver& observer) {
  cfg.validate();
  const std::size_t n = train.size();
  if (n < 2) throw InputError("grid search needs at least 2 training paintings");
  const auto folds = grouped_kfold(n, cfg.folds, cfg.seed);

  CvReport report;
  report.n_train_paintings = n;
  report.folds = cfg.folds;
  report.seed = cfg.seed;
  report.negative_descriptor =
      "synthetic, one per validation positive; ceil(k/2) rows from per-dimension permutations of standardised "
      "fold-train values, the rest uniform over [min-1, max+1] of each standardised fold-train dimension; "
      "seeded per fold and shared across grid cells";

  for (double nu : cfg.nus) {
    for (double gamma : cfg.gammas) {
      CellResult cell;
      cell.nu = nu;
      cell.gamma = gamma;
      const std::size_t cell_index = report.cells.size();

      for (std::size_t f = 0; f < folds.size(); ++f) {
        const Fold& fold = folds[f];
        FoldResult fr;
        fr.fold = f;

        std::vector<Vector> fold_train;
        for (std::size_t i : fold.train) {
          fold_train.push_back(train[i].values);
          fr.train_ids.push_back(train[i].painting_id);
        }
        for (std::size_t i : fold.validation) fr.validation_ids.push_back(train[i].painting_id);

        try {
          const Scaler scaler = fit_scaler(std::span<const Vector>(fold_train));
          if (observer) observer(FoldAudit{cell_index, f, fold, scaler});

          std::vector<Vector> scaled;
          scaled.reserve(fold_train.size());
          for (const auto& r : fold_train) scaled.push_back(transform(scaler, r));
          const OcSvmModel model = artauth::train(scaled, nu, KernelParams{gamma}, cfg.solver);

          std::vector<Verdict> preds;
          std::vector<Label> labels;
          for (std::size_t i : fold.validation) {
            preds.push_back(classify(model, transform(scaler, train[i].values)));
            labels.push_back(Label::Positive);
          }
          const auto negatives =
              synthesize_negatives(scaled, fold.validation.size(), fold_negative_seed(cfg.seed, f));
          fr.negatives = negatives.size();
          for (const auto& neg : negatives) {
            preds.push_back(classify(model, neg));
            labels.push_back(Label::Negative);
          }
          fr.confusion = confusion(preds, labels);
          fr.metrics = metrics_from(fr.confusion);
        } catch (const NumericalError& e) {
          throw NumericalError(cell_tag(nu, gamma, f) + e.what());
        } catch (const InputError& e) {
          throw InputError(cell_tag(nu, gamma, f) + e.what());
        }
        cell.folds.push_back(std::move(fr));
      }

      cell.accuracy = summarise(cell.folds, &Metrics::accuracy);
      cell.precision = summarise(cell.folds, &Metrics::precision);
      cell.recall = summarise(cell.folds, &Metrics::recall);
      cell.f1 = summarise(cell.folds, &Metrics::f1);
      cell.fpr = summarise(cell.folds, &Metrics::fpr);
      report.cells.push_back(std::move(cell));
    }
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < report.cells.size(); ++c) {
    const auto& cand = report.cells[c];
    const auto& cur = report.cells[best];
    if (cand.f1.mean > cur.f1.mean ||
        (cand.f1.mean == cur.f1.mean &&
         (cand.nu < cur.nu || (cand.nu == cur.nu && cand.gamma < cur.gamma)))) {
      best = c;
    }
  }
  report.best_cell = best;
  report.best_nu = report.cells[best].nu;
  report.best_gamma = report.cells[best].gamma;

  std::vector<Vector> all;
  all.reserve(n);
  for (const auto& row : train) all.push_back(row.values);
  GridSearchResult result{std::move(report), {}};
  try {
    result.model = fit_pipeline(all, result.report.best_nu, KernelParams{result.report.best_gamma}, cfg.solver);
  } catch (const NumericalError& e) {
    throw NumericalError("refit of winning cell: " + std::string(e.what()));
  }
  return result;
}

}  // namespace artauth
