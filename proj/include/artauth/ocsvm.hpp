#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "artauth/fusion.hpp"

namespace artauth {

struct KernelParams {
  double gamma = 0.1;
};

/// exp(-gamma * ||a - b||^2).
double rbf_kernel(std::span<const double> a, std::span<const double> b, KernelParams p);

/// Dense m x m kernel matrix, row-major.
std::vector<double> gram_matrix(std::span<const Vector> data, KernelParams p);

struct SolverOptions {
  double tolerance = 1e-8;             ///< stop when the maximal KKT violation drops below this
  std::size_t max_iterations = 100000; ///< working-set steps
};

struct DualSolution {
  Vector alphas;
  double rho = 0.0;
  double upper_bound = 0.0;  ///< 1 / (nu m)
  std::size_t iterations = 0;
  double kkt_violation = 0.0;
};

/// Solves  min 1/2 a'Qa  s.t.  0 <= a_i <= upper_bound,  sum a = 1
/// with two-variable SMO: each step takes the maximal violating pair
/// (i = argmin gradient over a_i < C, j = argmax gradient over a_j > 0, lowest
/// index on ties) and solves that pair exactly. Starts from a_i = 1/m.
/// Throws NumericalError when max_iterations is exhausted.
DualSolution solve_dual(std::span<const double> gram, std::size_t m, double upper_bound,
                        const SolverOptions& opts = {});

/// Offset for a dual solution: mean gradient over free multipliers, or the
/// midpoint of the KKT interval when every multiplier sits at a bound.
double recover_rho(std::span<const double> gradient, std::span<const double> alphas, double upper_bound);

struct OcSvmModel {
  std::vector<Vector> support_vectors;  ///< standardised rows with alpha > 0
  Vector alphas;
  double rho = 0.0;
  KernelParams params;
  double nu = 0.5;
  Scaler scaler;  ///< left empty by `train`; attached by the fitting pipeline
  double train_score_mean = 0.0;
  double train_score_std = 0.0;

  std::size_t dimension() const { return support_vectors.empty() ? 0 : support_vectors.front().size(); }
};

/// Trains on standardised rows. Requires 0 < nu <= 1 and at least one row.
OcSvmModel train(std::span<const Vector> data, double nu, KernelParams p, const SolverOptions& opts = {});

/// sum_i alpha_i K(x_i, v) - rho, for a standardised query.
double decision_value(const OcSvmModel& model, std::span<const double> v);

enum class Verdict { Authentic, Anomalous };

/// Authentic iff the decision value is >= 0.
Verdict classify(double decision);
Verdict classify(const OcSvmModel& model, std::span<const double> v);

/// Slack of each row: max(0, rho - sum_j alpha_j K(x_j, x_i)).
Vector slack_variables(const OcSvmModel& model, std::span<const Vector> data);

/// Fits the scaler on raw rows, trains on the standardised rows and attaches
/// the scaler to the model.
OcSvmModel fit_pipeline(std::span<const Vector> raw, double nu, KernelParams p, const SolverOptions& opts = {});

/// Standardises a raw row with the model's scaler, then evaluates it.
double score_raw(const OcSvmModel& model, std::span<const double> raw);

}  // namespace artauth
