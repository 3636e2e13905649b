#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace infill {

using CovMatrix = Eigen::MatrixXd;

/// Smallest admissible 1 - rho^2; closer to rho = 1 the covariance is
/// numerically singular and every consumer refuses to proceed.
inline constexpr double kConditioningFloor = 1e-12;

/// Ornstein-Uhlenbeck parameterisation on the even grid over [0, 1].
///
/// Observations sit at t_i = (i-1)/(n-1), so neighbouring errors have
/// correlation rho = exp(-lambda/(n-1)). The complement 1 - rho is taken
/// from expm1 rather than by subtraction; every closed form downstream reads
/// one_minus_rho() and never forms 1 - rho() itself. sigma^2 is fixed at 1.
///
/// n is real-valued here (the variance analysis differentiates in n);
/// matrix constructors take an integer n.
class OuParams {
 public:
  /// Throws DomainError unless n >= 2 and lambda > 0 (both finite).
  OuParams(double n, double lambda);

  double n() const { return n_; }
  double lambda() const { return lambda_; }
  /// lambda / (n - 1): the decay exponent over one grid step.
  double step_exponent() const { return step_; }
  double rho() const { return rho_; }
  double one_minus_rho() const { return one_minus_rho_; }
  double one_minus_rho_sq() const { return one_minus_rho_ * (1.0 + rho_); }

  /// Throws ConditioningError when 1 - rho^2 < kConditioningFloor.
  void require_conditioned() const;

 private:
  double n_;
  double lambda_;
  double step_;
  double rho_;
  double one_minus_rho_;
};

/// Ordered observation times; strictly increasing from exactly 0 to exactly 1.
class TimeGrid {
 public:
  /// Throws GridError if the points violate the invariant or number fewer
  /// than two.
  explicit TimeGrid(std::vector<double> points);

  /// t_i = i/(n-1), i = 0..n-1.
  static TimeGrid even(int n);

  std::span<const double> points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }
  double operator[](int i) const { return points_[static_cast<std::size_t>(i)]; }

  /// True when every point lies within `tol` of the even grid of the same size.
  bool is_even(double tol = 1e-12) const;

 private:
  std::vector<double> points_;
};

/// exp(-lambda/(n-1)). Throws DomainError for n < 2 or lambda <= 0.
double rho(double n, double lambda);

/// Dense Toeplitz correlation matrix with (i, j) entry rho^|i-j|.
CovMatrix sigma_even(int n, double lambda);

/// Closed-form tridiagonal inverse of sigma_even. Throws ConditioningError
/// when 1 - rho^2 falls below kConditioningFloor.
CovMatrix sigma_inverse_even(int n, double lambda);

/// (i, j) entry exp(-lambda |t_i - t_j|) for an arbitrary grid.
CovMatrix sigma_general(const TimeGrid& grid, double lambda);

/// y' Sigma^{-1} x using the tridiagonal structure of the even-grid inverse,
/// without forming any matrix. Used by the fast GLS path.
double tridiagonal_quadratic_form(const OuParams& params,
                                  const Eigen::Ref<const Eigen::VectorXd>& x,
                                  const Eigen::Ref<const Eigen::VectorXd>& y);

}  // namespace infill
