#pragma once

#include <Eigen/Dense>

#include "infill/covariance.hpp"
#include "infill/fit_result.hpp"
#include "infill/model_kind.hpp"

namespace infill {

using DesignMatrix = Eigen::MatrixXd;

/// Even-grid design: a column of ones (intercept), a column with entries
/// (i-1)/(n-1) (slope), or both in that order. Throws DomainError for n < 2.
DesignMatrix design_matrix(ModelKind model, int n);

/// Scalars of the two-parameter model. (1 - rho^2) X' Sigma^{-1} X is
/// [[m1, m2], [m2, m3]], det = m1 m3 - m2^2, and X' Sigma^{-1} y = (v1, v2).
struct MvTerms {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double det = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};

/// Throws DimensionError unless y has params.n() entries, ConditioningError
/// when 1 - rho^2 is below the floor.
MvTerms mv_terms(const OuParams& params, const Eigen::Ref<const Eigen::VectorXd>& y);

/// GLS estimate for the even grid of size y.size() using the model's
/// closed-form weights, plus the exact covariance of the estimate.
FitResult closed_form_fit(ModelKind model, const Eigen::Ref<const Eigen::VectorXd>& y,
                          double lambda);

/// Estimates only (no covariance); the Monte Carlo hot path.
Eigen::VectorXd closed_form_estimates(ModelKind model, const OuParams& params,
                                      const Eigen::Ref<const Eigen::VectorXd>& y);

}  // namespace infill
