#pragma once

#include <Eigen/Dense>

#include "infill/covariance.hpp"
#include "infill/design_models.hpp"
#include "infill/fit_result.hpp"

namespace infill {

/// Y = X beta + eps with Var(eps) = covariance.
struct GlsProblem {
  DesignMatrix design;
  CovMatrix covariance;
  Eigen::VectorXd response;

  /// Throws DimensionError if the shapes disagree or the design has more
  /// columns than rows.
  void validate() const;
};

/// Pivot ratio below which the whitened normal matrix is declared rank
/// deficient.
inline constexpr double kRankTolerance = 1e-10;

/// beta = (X' S^{-1} X)^{-1} X' S^{-1} Y with covariance (X' S^{-1} X)^{-1}.
/// S is Cholesky-factored and X, Y whitened by triangular solves; S is never
/// inverted. Throws NotPositiveDefiniteError or RankDeficientError.
FitResult gls_fit(const GlsProblem& problem);

/// Same estimator for the even-grid OU covariance using the closed-form
/// tridiagonal precision, O(n p^2) and without any factorisation of Sigma.
FitResult gls_fit_even(const DesignMatrix& design, const OuParams& params,
                       const Eigen::Ref<const Eigen::VectorXd>& response);

/// Q(beta) = (Y - X beta)' S^{-1} (Y - X beta). Throws DimensionError when
/// beta does not have one entry per design column.
double weighted_rss(const GlsProblem& problem, const Eigen::Ref<const Eigen::VectorXd>& beta);

}  // namespace infill
