#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "artauth/fusion.hpp"
#include "artauth/ocsvm.hpp"

namespace artauth {

struct SymmetricEigen {
  std::size_t n = 0;
  Vector values;                ///< descending
  std::vector<double> vectors;  ///< n x n row-major; column k is the k-th eigenvector
  std::size_t sweeps = 0;

  double vector_entry(std::size_t row, std::size_t component) const { return vectors[row * n + component]; }
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major n x n).
/// Sweeps until the off-diagonal Frobenius norm falls below
/// `tolerance * max(1, ||A||_F)`. Each eigenvector is signed so its
/// largest-magnitude entry is positive.
SymmetricEigen jacobi_eigen(std::span<const double> matrix, std::size_t n, double tolerance = 1e-10,
                            std::size_t max_sweeps = 100);

/// Sample covariance (1/(n-1)) of the rows, row-major d x d.
std::vector<double> covariance_matrix(std::span<const Vector> rows);

struct ImportanceReport {
  std::size_t dimension = 0;
  std::size_t components_used = 0;
  Vector contributions;              ///< per feature, sums to 1
  Vector eigenvalues;                ///< descending, negatives from round-off clamped to 0
  Vector explained_variance_ratio;   ///< per component, sums to 1
  std::vector<double> loadings;      ///< dimension x dimension, [feature * dimension + component]
};

/// PCA attribution: contribution_j = sum_k loading_jk^2 * ratio_k over the
/// leading `max_components` components (0 = all), renormalised to sum 1.
ImportanceReport feature_importance(std::span<const Vector> rows, std::size_t max_components = 0);

/// Standard normal CDF.
double normal_cdf(double x);

struct CalibratedScore {
  double decision_value = 0.0;
  double z_score = 0.0;     ///< standard deviations from the training-score mean
  double confidence = 0.0;  ///< Phi(z + offset)
  bool degenerate = false;  ///< training scores had zero spread
};

/// Maps a decision value onto the training-score distribution recorded in
/// the model. With zero training spread, confidence is 1 for decisions at or
/// above the mean and 0 below.
CalibratedScore calibrate(const OcSvmModel& model, double decision_value, double offset = 0.0);

}  // namespace artauth
