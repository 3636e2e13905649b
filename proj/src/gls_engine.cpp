#include "infill/gls_engine.hpp"

#include <string>

#include "infill/errors.hpp"

namespace infill {

namespace {

Eigen::LLT<Eigen::MatrixXd> factor_covariance(const CovMatrix& covariance) {
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("covariance matrix is not positive definite");
  }
  return llt;
}

// Solves the p x p normal equations G beta = rhs and returns (beta, G^{-1}).
FitResult solve_normal_equations(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs) {
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || pivots.size() == 0 ||
      pivots.minCoeff() <= kRankTolerance * pivots.maxCoeff()) {
    throw RankDeficientError("design matrix is not of full column rank");
  }
  FitResult fit;
  fit.estimates = ldlt.solve(rhs);
  const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(gram.rows(), gram.cols()));
  fit.covariance = 0.5 * (inv + inv.transpose());
  return fit;
}

}  // namespace

void GlsProblem::validate() const {
  const Eigen::Index n = design.rows();
  if (design.cols() < 1 || design.cols() > n) {
    throw DimensionError("design must have between 1 and n columns");
  }
  if (covariance.rows() != n || covariance.cols() != n) {
    throw DimensionError("covariance must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (response.size() != n) {
    throw DimensionError("response must have " + std::to_string(n) + " entries");
  }
}

FitResult gls_fit(const GlsProblem& problem) {
  problem.validate();
  const auto llt = factor_covariance(problem.covariance);
  const Eigen::MatrixXd wx = llt.matrixL().solve(problem.design);
  const Eigen::VectorXd wy = llt.matrixL().solve(problem.response);
  const Eigen::MatrixXd gram = wx.transpose() * wx;
  return solve_normal_equations(gram, wx.transpose() * wy);
}

FitResult gls_fit_even(const DesignMatrix& design, const OuParams& params,
                       const Eigen::Ref<const Eigen::VectorXd>& response) {
  const Eigen::Index n = design.rows();
  if (static_cast<double>(n) != params.n() || response.size() != n) {
    throw DimensionError("even-grid GLS: design and response must have n rows");
  }
  const Eigen::Index p = design.cols();
  Eigen::MatrixXd gram(p, p);
  Eigen::VectorXd rhs(p);
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = 0; b <= a; ++b) {
      gram(a, b) = tridiagonal_quadratic_form(params, design.col(a), design.col(b));
      gram(b, a) = gram(a, b);
    }
    rhs(a) = tridiagonal_quadratic_form(params, design.col(a), response);
  }
  FitResult fit = solve_normal_equations(gram, rhs);
  fit.params = params;
  return fit;
}

double weighted_rss(const GlsProblem& problem, const Eigen::Ref<const Eigen::VectorXd>& beta) {
  problem.validate();
  if (beta.size() != problem.design.cols()) {
    throw DimensionError("beta must have one entry per design column");
  }
  const Eigen::VectorXd residual = problem.response - problem.design * beta;
  const auto llt = factor_covariance(problem.covariance);
  return llt.matrixL().solve(residual).squaredNorm();
}

}  // namespace infill
