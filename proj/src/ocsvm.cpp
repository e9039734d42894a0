#include "artauth/ocsvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "artauth/error.hpp"

namespace artauth {

double rbf_kernel(std::span<const double> a, std::span<const double> b, KernelParams p) {
  if (a.size() != b.size()) {
    throw InputError("rbf_kernel: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-p.gamma * d2);
}

std::vector<double> gram_matrix(std::span<const Vector> data, KernelParams p) {
  const std::size_t m = data.size();
  std::vector<double> q(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    q[i * m + i] = rbf_kernel(data[i], data[i], p);
    for (std::size_t j = i + 1; j < m; ++j) q[i * m + j] = q[j * m + i] = rbf_kernel(data[i], data[j], p);
  }
  return q;
}

double recover_rho(std::span<const double> gradient, std::span<const double> alphas, double upper_bound) {
  double free_sum = 0.0;
  std::size_t free_count = 0;
  // alpha = C  =>  G <= rho ;  alpha = 0  =>  G >= rho
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] >= upper_bound) {
      lower = std::max(lower, gradient[i]);
    } else if (alphas[i] <= 0.0) {
      upper = std::min(upper, gradient[i]);
    } else {
      free_sum += gradient[i];
      ++free_count;
    }
  }
  if (free_count > 0) return free_sum / static_cast<double>(free_count);
  if (std::isinf(lower)) return upper;
  if (std::isinf(upper)) return lower;
  return 0.5 * (lower + upper);
}

DualSolution solve_dual(std::span<const double> gram, std::size_t m, double upper_bound, const SolverOptions& opts) {
  if (m == 0) throw InputError("solve_dual: empty problem");
  if (gram.size() != m * m) throw InputError("solve_dual: kernel matrix has wrong size");
  if (!(upper_bound * static_cast<double>(m) >= 1.0 - 1e-12)) {
    throw InputError("solve_dual: box bound too small for sum(alpha) = 1");
  }

  const double C = upper_bound;
  DualSolution sol;
  sol.upper_bound = C;
  sol.alphas.assign(m, std::min(1.0 / static_cast<double>(m), C));
  auto& a = sol.alphas;

  Vector grad(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) grad[i] += gram[i * m + j] * a[j];

  constexpr double kTau = 1e-12;
  std::size_t iter = 0;
  double violation = 0.0;
  for (;;) {
    // i: steepest feasible increase, j: steepest feasible decrease.
    std::size_t up = m;
    std::size_t low = m;
    for (std::size_t k = 0; k < m; ++k) {
      if (a[k] < C && (up == m || grad[k] < grad[up])) up = k;
      if (a[k] > 0.0 && (low == m || grad[k] > grad[low])) low = k;
    }
    violation = (up == m || low == m) ? 0.0 : grad[low] - grad[up];
    if (violation <= opts.tolerance) break;
    if (iter >= opts.max_iterations) {
      std::ostringstream msg;
      msg << "OC-SVM solver did not converge within " << opts.max_iterations
          << " iterations (KKT violation " << violation << ")";
      throw NumericalError(msg.str());
    }
    ++iter;

    const std::size_t i = up;
    const std::size_t j = low;
    double eta = gram[i * m + i] + gram[j * m + j] - 2.0 * gram[i * m + j];
    if (eta <= kTau) eta = kTau;
    double delta = (grad[j] - grad[i]) / eta;
    const double room_i = C - a[i];
    const double room_j = a[j];
    const double room = std::min(room_i, room_j);
    if (delta >= room) {
      // Land exactly on the bound(s) so the box constraints hold without drift.
      delta = room;
      a[i] = room_i == room ? C : a[i] + delta;
      a[j] = room_j == room ? 0.0 : a[j] - delta;
    } else {
      a[i] += delta;
      a[j] -= delta;
    }
    for (std::size_t k = 0; k < m; ++k) grad[k] += delta * (gram[k * m + i] - gram[k * m + j]);
  }

  // Fresh gradient for the offset so accumulated update error does not leak into rho.
  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) grad[i] += gram[i * m + j] * a[j];

  sol.rho = recover_rho(grad, a, C);
  sol.iterations = iter;
  sol.kkt_violation = violation;
  return sol;
}

OcSvmModel train(std::span<const Vector> data, double nu, KernelParams p, const SolverOptions& opts) {
  if (!(nu > 0.0 && nu <= 1.0)) throw InputError("nu must be in (0, 1]");
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) throw InputError("gamma must be > 0");
  if (data.empty()) throw InputError("cannot train on an empty set");
  const std::size_t dim = data.front().size();
  for (const auto& row : data) {
    if (row.size() != dim) throw InputError("training rows have inconsistent dimensions");
  }

  const std::size_t m = data.size();
  const auto q = gram_matrix(data, p);
  const DualSolution sol = solve_dual(q, m, 1.0 / (nu * static_cast<double>(m)), opts);

  OcSvmModel model;
  model.params = p;
  model.nu = nu;
  model.rho = sol.rho;
  for (std::size_t i = 0; i < m; ++i) {
    if (sol.alphas[i] > 0.0) {
      model.support_vectors.push_back(data[i]);
      model.alphas.push_back(sol.alphas[i]);
    }
  }

  double mean = 0.0;
  Vector scores(m);
  for (std::size_t i = 0; i < m; ++i) {
    scores[i] = decision_value(model, data[i]);
    mean += scores[i];
  }
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  model.train_score_mean = mean;
  model.train_score_std = std::sqrt(var / static_cast<double>(m));
  return model;
}

double decision_value(const OcSvmModel& model, std::span<const double> v) {
  if (v.size() != model.dimension()) {
    throw InputError("decision_value: query has " + std::to_string(v.size()) + " features, model expects " +
                     std::to_string(model.dimension()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    s += model.alphas[i] * rbf_kernel(model.support_vectors[i], v, model.params);
  }
  return s - model.rho;
}

Verdict classify(double decision) { return decision >= 0.0 ? Verdict::Authentic : Verdict::Anomalous; }

Verdict classify(const OcSvmModel& model, std::span<const double> v) { return classify(decision_value(model, v)); }

Vector slack_variables(const OcSvmModel& model, std::span<const Vector> data) {
  Vector xi;
  xi.reserve(data.size());
  for (const auto& row : data) xi.push_back(std::max(0.0, -decision_value(model, row)));
  return xi;
}

OcSvmModel fit_pipeline(std::span<const Vector> raw, double nu, KernelParams p, const SolverOptions& opts) {
  Scaler scaler = fit_scaler(raw);
  std::vector<Vector> scaled;
  scaled.reserve(raw.size());
  for (const auto& r : raw) scaled.push_back(transform(scaler, r));
  OcSvmModel model = train(scaled, nu, p, opts);
  model.scaler = std::move(scaler);
  return model;
}

double score_raw(const OcSvmModel& model, std::span<const double> raw) {
  if (!model.scaler.fitted()) throw InputError("model has no fitted scaler");
  return decision_value(model, transform(model.scaler, raw));
}

}  // namespace artauth
