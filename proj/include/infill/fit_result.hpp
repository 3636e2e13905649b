#pragma once

#include <optional>

#include <Eigen/Dense>

#include "infill/covariance.hpp"
#include "infill/model_kind.hpp"

namespace infill {

/// GLS coefficient estimates with their exact covariance (X' Sigma^{-1} X)^{-1}.
struct FitResult {
  Eigen::VectorXd estimates;
  Eigen::MatrixXd covariance;
  /// Set when the fit came from one of the three even-grid models.
  std::optional<ModelKind> model;
  /// Set when the error covariance was the even-grid OU matrix.
  std::optional<OuParams> params;
};

}  // namespace infill
