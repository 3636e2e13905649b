#include "infill/covariance.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "infill/errors.hpp"

namespace infill {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void check_domain(double n, double lambda) {
  if (!std::isfinite(n) || n < 2.0) {
    throw DomainError("sample size n must be >= 2, got " + num(n));
  }
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw DomainError("lambda must be positive and finite, got " + num(lambda));
  }
}

void check_matrix_size(int n) {
  if (n < 2) {
    throw DomainError("matrix size n must be >= 2, got " + std::to_string(n));
  }
}

}  // namespace

OuParams::OuParams(double n, double lambda) : n_(n), lambda_(lambda) {
  check_domain(n, lambda);
  step_ = lambda / (n - 1.0);
  rho_ = std::exp(-step_);
  one_minus_rho_ = -std::expm1(-step_);
}

void OuParams::require_conditioned() const {
  if (one_minus_rho_sq() < kConditioningFloor) {
    throw ConditioningError("1 - rho^2 = " + num(one_minus_rho_sq()) +
                            " is below the conditioning floor (n=" + num(n_) +
                            ", lambda=" + num(lambda_) + ")");
  }
}

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw GridError("time grid needs at least two points");
  }
  if (points_.front() != 0.0) {
    throw GridError("time grid must start at 0");
  }
  if (points_.back() != 1.0) {
    throw GridError("time grid must end at 1");
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1])) {
      throw GridError("time grid must be strictly increasing (violated at index " +
                      std::to_string(i) + ")");
    }
  }
}

TimeGrid TimeGrid::even(int n) {
  check_matrix_size(n);
  std::vector<double> pts(static_cast<std::size_t>(n));
  const double denom = static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    pts[static_cast<std::size_t>(i)] = static_cast<double>(i) / denom;
  }
  return TimeGrid(std::move(pts));
}

bool TimeGrid::is_even(double tol) const {
  const double denom = static_cast<double>(size() - 1);
  for (int i = 0; i < size(); ++i) {
    if (std::abs((*this)[i] - static_cast<double>(i) / denom) > tol) return false;
  }
  return true;
}

double rho(double n, double lambda) { return OuParams(n, lambda).rho(); }

CovMatrix sigma_even(int n, double lambda) {
  check_matrix_size(n);
  const OuParams params(n, lambda);
  // Powers by exponent rather than repeated multiplication so that entry
  // (i, j) is exp(-|i-j| lambda/(n-1)) correctly rounded.
  Eigen::VectorXd band(n);
  for (int k = 0; k < n; ++k) {
    band(k) = std::exp(-static_cast<double>(k) * params.step_exponent());
  }
  CovMatrix sigma(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      sigma(i, j) = band(std::abs(i - j));
    }
  }
  return sigma;
}

CovMatrix sigma_inverse_even(int n, double lambda) {
  check_matrix_size(n);
  const OuParams params(n, lambda);
  params.require_conditioned();
  const double r = params.rho();
  const double scale = 1.0 / params.one_minus_rho_sq();
  CovMatrix inv = CovMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const bool corner = (i == 0 || i == n - 1);
    inv(i, i) = corner ? scale : (1.0 + r * r) * scale;
    if (i + 1 < n) {
      inv(i, i + 1) = -r * scale;
      inv(i + 1, i) = -r * scale;
    }
  }
  return inv;
}

CovMatrix sigma_general(const TimeGrid& grid, double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw DomainError("lambda must be positive and finite, got " + num(lambda));
  }
  const int n = grid.size();
  CovMatrix sigma(n, n);
  for (int i = 0; i < n; ++i) {
    sigma(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      const double c = std::exp(-lambda * std::abs(grid[i] - grid[j]));
      sigma(i, j) = c;
      sigma(j, i) = c;
    }
  }
  return sigma;
}

double tridiagonal_quadratic_form(const OuParams& params,
                                  const Eigen::Ref<const Eigen::VectorXd>& x,
                                  const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::Index n = x.size();
  if (y.size() != n || static_cast<double>(n) != params.n()) {
    throw DimensionError("quadratic form: vector lengths must equal n");
  }
  params.require_conditioned();
  // Sigma^{-1} = W'W / (1 - rho^2) with the AR(1) whitening rows
  // (x_i - rho x_{i-1}); the first row contributes x_1 y_1 unscaled.
  // x_i - rho x_{i-1} is formed as (x_i - x_{i-1}) + (1 - rho) x_{i-1}.
  const double u = params.one_minus_rho();
  double innovations = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double wx = (x(i) - x(i - 1)) + u * x(i - 1);
    const double wy = (y(i) - y(i - 1)) + u * y(i - 1);
    innovations += wx * wy;
  }
  return x(0) * y(0) + innovations / params.one_minus_rho_sq();
}

}  // namespace infill
