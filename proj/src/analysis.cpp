#include "artauth/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "artauth/error.hpp"

namespace artauth {

SymmetricEigen jacobi_eigen(std::span<const double> matrix, std::size_t n, double tolerance, std::size_t max_sweeps) {
  if (n == 0 || matrix.size() != n * n) throw InputError("jacobi_eigen: matrix must be n x n");
  for (double v : matrix) {
    if (!std::isfinite(v)) throw NumericalError("jacobi_eigen: matrix has non-finite entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = matrix[i * n + j], y = matrix[j * n + i];
      if (std::abs(x - y) > 1e-12 * std::max({1.0, std::abs(x), std::abs(y)})) {
        throw InputError("jacobi_eigen: matrix is not symmetric");
      }
    }
  }

  std::vector<double> a(matrix.begin(), matrix.end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double frob = 0.0;
  for (double x : a) frob += x * x;
  const double threshold = tolerance * std::max(1.0, std::sqrt(frob));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(s);
  };

  std::size_t sweep = 0;
  while (off_norm() > threshold) {
    if (sweep >= max_sweeps) throw NumericalError("jacobi_eigen: no convergence");
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // A <- J' A J on rows/columns p and q.
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });

  SymmetricEigen out;
  out.n = n;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a[src * n + src];
    std::size_t pivot = 0;
    for (std::size_t r = 1; r < n; ++r) {
      if (std::abs(v[r * n + src]) > std::abs(v[pivot * n + src])) pivot = r;
    }
    const double sign = v[pivot * n + src] < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + k] = sign * v[r * n + src];
  }
  return out;
}

std::vector<double> covariance_matrix(std::span<const Vector> rows) {
  if (rows.size() < 2) throw InputError("covariance needs at least 2 rows");
  const std::size_t d = rows.front().size();
  Vector mean(d, 0.0);
  for (const auto& r : rows) {
    if (r.size() != d) throw InputError("covariance: inconsistent row dimensions");
    for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
  }
  for (auto& m : mean) m /= static_cast<double>(rows.size());
  std::vector<double> cov(d * d, 0.0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < d; ++i) {
      const double di = r[i] - mean[i];
      for (std::size_t j = i; j < d; ++j) cov[i * d + j] += di * (r[j] - mean[j]);
    }
  }
  const double denom = static_cast<double>(rows.size() - 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i * d + j] /= denom;
      cov[j * d + i] = cov[i * d + j];
    }
  }
  return cov;
}

ImportanceReport feature_importance(std::span<const Vector> rows, std::size_t max_components) {
  if (rows.size() < 3) throw InputError("feature importance needs at least 3 rows");
  const auto cov = covariance_matrix(rows);
  const std::size_t d = rows.front().size();
  for (double c : cov) {
    if (!std::isfinite(c)) throw NumericalError("covariance is not finite");
  }
  const SymmetricEigen eig = jacobi_eigen(cov, d);

  ImportanceReport rep;
  rep.dimension = d;
  rep.eigenvalues.resize(d);
  double total = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    rep.eigenvalues[k] = std::max(0.0, eig.values[k]);
    total += rep.eigenvalues[k];
  }
  if (!(total > 0.0)) throw NumericalError("feature importance: data has zero variance");
  rep.explained_variance_ratio.resize(d);
  for (std::size_t k = 0; k < d; ++k) rep.explained_variance_ratio[k] = rep.eigenvalues[k] / total;
  rep.loadings = eig.vectors;

  rep.components_used = max_components == 0 ? d : std::min(max_components, d);
  rep.contributions.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < rep.components_used; ++k) {
      const double l = eig.vector_entry(j, k);
      rep.contributions[j] += l * l * rep.explained_variance_ratio[k];
    }
  }
  const double sum = std::accumulate(rep.contributions.begin(), rep.contributions.end(), 0.0);
  if (!(sum > 0.0)) throw NumericalError("feature importance: leading components carry no variance");
  for (auto& c : rep.contributions) c /= sum;
  return rep;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

CalibratedScore calibrate(const OcSvmModel& model, double decision_value, double offset) {
  if (model.support_vectors.empty() || !std::isfinite(model.train_score_mean) ||
      !std::isfinite(model.train_score_std) || model.train_score_std < 0.0) {
    throw InputError("model has no fitted calibration statistics");
  }
  CalibratedScore out;
  out.decision_value = decision_value;
  if (model.train_score_std > 0.0) {
    out.z_score = (decision_value - model.train_score_mean) / model.train_score_std;
    out.confidence = normal_cdf(out.z_score + offset);
  } else {
    out.degenerate = true;
    out.z_score = 0.0;
    out.confidence = decision_value >= model.train_score_mean ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace artauth
