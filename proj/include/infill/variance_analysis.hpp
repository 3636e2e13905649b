#pragma once

#include <cstdint>

#include "infill/quantity.hpp"

namespace infill {

/// Exact closed-form value of `q` for sample size n (real, >= 2) and decay
/// lambda. Evaluated internally in extended precision.
/// Throws DomainError on bad (n, lambda) and ConditioningError when
/// 1 - rho^2 is below the floor.
double exact_moment(Quantity q, double n, double lambda);

/// lim_{n -> infinity} exact_moment(q, n, lambda). Throws DomainError for
/// lambda <= 0.
double moment_limit(Quantity q, double lambda);

/// Quotient-rule components of an n-derivative: numerator e1, its
/// derivative e2, denominator e3, its derivative e4.
struct QuotientParts {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double e4 = 0.0;
};

struct MomentDerivative {
  /// d/dn exact_moment(q, n, lambda), evaluated by differentiating in
  /// s = lambda/(n-1) rather than by the quotient rule. Recombining `parts`
  /// loses relative accuracy when e3 e2 and e4 e1 nearly cancel (small s).
  double value = 0.0;
  QuotientParts parts;
};

/// Closed-form derivative in n (n treated as continuous, rho = exp(-lambda/(n-1))).
/// Requires n > 2. Cov_Full is exactly -1/2 of VarB1_Full.
MomentDerivative moment_derivative_n(Quantity q, double n, double lambda);

/// Diminishing-return point of an asymptotic curve in lambda.
struct KneeResult {
  /// End of the first scan step over which the limit moves by less than tol.
  double lambda_star = 0.0;
  double scan_start = 0.0;
  double step = 0.0;
  double tol = 0.0;
};

/// Scans the grid lambda_k = k * step. Monotone curves start at lambda = step;
/// the others start at the first grid point strictly above their extremum.
/// Returns the first lambda_k (past the start) with
/// |limit(lambda_{k-1}) - limit(lambda_k)| < tol.
/// Throws DomainError for non-positive step/tol and ScanBoundError if the
/// scan passes lambda = 1e4.
KneeResult lambda_knee(Quantity q, double step = 0.1, double tol = 1e-4);

struct Extremum {
  double lambda = 0.0;
  double value = 0.0;
};

/// Interior extremum of the asymptotic curve: sqrt(3) for VarB1_SlopeOnly,
/// sqrt(12) for VarB1_Full and Cov_Full. Throws MonotoneCurveError otherwise.
Extremum asymptote_extremum(Quantity q);

/// exact_moment with rho = 0, i.e. the lambda -> infinity bound at fixed n.
double lambda_infinity_bound(Quantity q, double n);

enum class DiminishingCriterion {
  /// |d exact_moment / dn| < eps
  Derivative,
  /// |exact_moment(n + 1) - exact_moment(n)| < eps
  ForwardDifference,
};

inline constexpr std::int64_t kMaxDiminishingScan = 1'000'000;

/// Smallest integer n >= 3 meeting the criterion. Throws ScanBoundError past
/// kMaxDiminishingScan.
std::int64_t n_diminishing_return(Quantity q, double lambda, double eps = 1e-4,
                                  DiminishingCriterion criterion = DiminishingCriterion::Derivative);

}  // namespace infill
