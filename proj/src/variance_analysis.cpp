#include "infill/variance_analysis.hpp"

#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "infill/covariance.hpp"
#include "infill/detail/moment_formulas.hpp"
#include "infill/errors.hpp"

namespace infill {

namespace {

using Wide = long double;

constexpr double kKneeScanBound = 1e4;

// Differentiating in s = lambda/(n-1) still cancels by roughly 1/(lambda^2 s);
// in extended precision that costs about 1e-17 / (lambda^2 s) relative error.
// Below this threshold the derivative is evaluated in 50 digits instead.
constexpr double kExtendedDerivativeFloor = 1e-4;

double derivative_value(Quantity q, double n, double lambda) {
  const double s = lambda / (n - 1);
  if (lambda * lambda * s >= kExtendedDerivativeFloor) {
    return static_cast<double>(detail::derivative_in_n<Wide>(q, n, lambda));
  }
  using Digits50 = boost::multiprecision::cpp_bin_float_50;
  return static_cast<double>(detail::derivative_in_n(q, Digits50(n), Digits50(lambda)));
}

detail::RhoTerms<Wide> checked_terms(double n, double lambda) {
  // OuParams validates the domain and the conditioning floor.
  const OuParams params(n, lambda);
  params.require_conditioned();
  return detail::make_terms<Wide>(n, lambda);
}

void check_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw DomainError("lambda must be positive and finite, got " + std::to_string(lambda));
  }
}

}  // namespace

double exact_moment(Quantity q, double n, double lambda) {
  return static_cast<double>(detail::exact_moment(q, checked_terms(n, lambda)));
}

double moment_limit(Quantity q, double lambda) {
  check_lambda(lambda);
  return static_cast<double>(detail::moment_limit<Wide>(q, lambda));
}

MomentDerivative moment_derivative_n(Quantity q, double n, double lambda) {
  if (!(n > 2.0)) {
    throw DomainError("derivative in n requires n > 2, got " + std::to_string(n));
  }
  const auto parts = detail::quotient_parts(q, checked_terms(n, lambda));
  MomentDerivative out;
  out.value = derivative_value(q, n, lambda);
  out.parts = {static_cast<double>(parts.e1), static_cast<double>(parts.e2),
               static_cast<double>(parts.e3), static_cast<double>(parts.e4)};
  return out;
}

Extremum asymptote_extremum(Quantity q) {
  // Setting d/dlambda of 12l/(6+6l+2l^2) to zero gives 6 - 2l^2 = 0;
  // for 24l/(12+6l+l^2) it gives 12 - l^2 = 0.
  double at = 0.0;
  switch (q) {
    case Quantity::VarB1_SlopeOnly:
      at = std::sqrt(3.0);
      break;
    case Quantity::VarB1_Full:
    case Quantity::Cov_Full:
      at = std::sqrt(12.0);
      break;
    case Quantity::VarB0_InterceptOnly:
    case Quantity::VarB0_Full:
      throw MonotoneCurveError();
  }
  return {at, moment_limit(q, at)};
}

KneeResult lambda_knee(Quantity q, double step, double tol) {
  if (!std::isfinite(step) || step <= 0.0) {
    throw DomainError("knee step must be positive, got " + std::to_string(step));
  }
  if (!std::isfinite(tol) || tol <= 0.0) {
    throw DomainError("knee tolerance must be positive, got " + std::to_string(tol));
  }
  std::int64_t k = 1;
  if (!is_monotone_in_lambda(q)) {
    k = static_cast<std::int64_t>(std::floor(asymptote_extremum(q).lambda / step)) + 1;
  }
  KneeResult result;
  result.scan_start = static_cast<double>(k) * step;
  result.step = step;
  result.tol = tol;

  Wide previous = detail::moment_limit<Wide>(q, static_cast<Wide>(k) * step);
  for (++k;; ++k) {
    const double lambda = static_cast<double>(k) * step;
    if (lambda > kKneeScanBound) {
      throw ScanBoundError("knee scan for " + std::string(to_string(q)) +
                           " passed lambda = 1e4 without flattening below tol");
    }
    const Wide current = detail::moment_limit<Wide>(q, static_cast<Wide>(k) * step);
    if (std::abs(previous - current) < tol) {
      result.lambda_star = lambda;
      return result;
    }
    previous = current;
  }
}

double lambda_infinity_bound(Quantity q, double n) {
  if (!std::isfinite(n) || n < 2.0) {
    throw DomainError("sample size n must be >= 2, got " + std::to_string(n));
  }
  return static_cast<double>(detail::exact_moment(q, detail::uncorrelated_terms<Wide>(n)));
}

std::int64_t n_diminishing_return(Quantity q, double lambda, double eps,
                                  DiminishingCriterion criterion) {
  check_lambda(lambda);
  if (!std::isfinite(eps) || eps <= 0.0) {
    throw DomainError("eps must be positive, got " + std::to_string(eps));
  }
  for (std::int64_t n = 3; n <= kMaxDiminishingScan; ++n) {
    const double nd = static_cast<double>(n);
    double change = 0.0;
    if (criterion == DiminishingCriterion::Derivative) {
      change = moment_derivative_n(q, nd, lambda).value;
    } else {
      change = exact_moment(q, nd + 1.0, lambda) - exact_moment(q, nd, lambda);
    }
    if (std::abs(change) < eps) return n;
  }
  throw ScanBoundError("no n <= 1e6 meets the diminishing-return threshold for " +
                       std::string(to_string(q)));
}

}  // namespace infill
