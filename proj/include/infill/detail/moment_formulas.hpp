#pragma once

// Closed-form second moments of the GLS estimators and their n-derivatives,
// generic over the floating type so the same expressions can be evaluated in
// extended precision (library) or multiprecision (test oracles).
//
// Everything is written in u = 1 - rho. With that substitution each
// denominator becomes a polynomial in u with non-negative coefficients for
// n >= 3, so no evaluation subtracts nearly equal terms:
//
//   B = n(1-rho) + 2 rho                          = 2 + (n-2) u
//   D = 2n^2(1-rho)^2 + n(8rho-1) + rho^2(6-7n)   = 6 + 6(n-2) u + (n-2)(2n-3) u^2
//   C = n^2(1-rho)^2 + n(1+4rho-5rho^2) + 6rho(1+rho)
//                                                 = 12 + 6(n-3) u + (n-2)(n-3) u^2
//
// and Var(b0 | intercept) = (1+rho)/B, Var(b1 | slope) = 6(1-rho^2)(n-1)/D,
// Var(b0 | full) = 2(1+rho) D / (B C), Var(b1 | full) = 12(1-rho^2)(n-1)/C,
// Cov(b0, b1 | full) = -Var(b1 | full)/2.

#include <cmath>

#include "infill/quantity.hpp"

namespace infill::detail {

template <class Real>
struct RhoTerms {
  Real n;
  Real step;  // lambda / (n - 1)
  Real rho;
  Real u;     // 1 - rho
};

template <class Real>
RhoTerms<Real> make_terms(const Real& n, const Real& lambda) {
  using std::exp;
  using std::expm1;
  const Real step = lambda / (n - 1);
  return {n, step, exp(-step), -expm1(-step)};
}

/// rho forced to zero: the lambda -> infinity configuration.
template <class Real>
RhoTerms<Real> uncorrelated_terms(const Real& n) {
  return {n, Real(0), Real(0), Real(1)};
}

template <class Real>
struct Denominators {
  Real b, c, d;
};

template <class Real>
Denominators<Real> denominators(const RhoTerms<Real>& t) {
  const Real& n = t.n;
  const Real& u = t.u;
  return {
      2 + (n - 2) * u,
      12 + 6 * (n - 3) * u + (n - 2) * (n - 3) * u * u,
      6 + 6 * (n - 2) * u + (n - 2) * (2 * n - 3) * u * u,
  };
}

/// `den` must be denominators(t); callers that also need D (the slope-only
/// estimator) compute it once and pass it in.
template <class Real>
Real exact_moment(Quantity q, const RhoTerms<Real>& t, const Denominators<Real>& den) {
  const Real& b = den.b;
  const Real& c = den.c;
  const Real& d = den.d;
  const Real one_plus_rho = 1 + t.rho;
  const Real one_minus_rho_sq = t.u * one_plus_rho;
  switch (q) {
    case Quantity::VarB0_InterceptOnly:
      return one_plus_rho / b;
    case Quantity::VarB1_SlopeOnly:
      return 6 * one_minus_rho_sq * (t.n - 1) / d;
    case Quantity::VarB0_Full:
      return 2 * one_plus_rho * d / (b * c);
    case Quantity::VarB1_Full:
      return 12 * one_minus_rho_sq * (t.n - 1) / c;
    case Quantity::Cov_Full:
      return -exact_moment(Quantity::VarB1_Full, t, den) / 2;
  }
  return Real(0);
}

template <class Real>
Real exact_moment(Quantity q, const RhoTerms<Real>& t) {
  return exact_moment(q, t, denominators(t));
}

/// Quotient-rule pieces: d/dn (e1/e3) = (e3 e2 - e4 e1) / e3^2, i.e. e1 and
/// e3 are numerator and denominator, e2 and e4 their n-derivatives.
template <class Real>
struct Quotient {
  Real e1, e2, e3, e4;

  Real derivative() const { return (e3 * e2 - e4 * e1) / (e3 * e3); }
};

template <class Real>
Quotient<Real> quotient_parts(Quantity q, const RhoTerms<Real>& t) {
  const Real& n = t.n;
  const Real& u = t.u;
  const Real& rho = t.rho;
  const auto [b, c, d] = denominators(t);
  const Real one_minus_rho_sq = u * (1 + rho);
  // d rho / dn; d u / dn = -drho.
  const Real drho = rho * t.step / (n - 1);

  const Real db = u - (n - 2) * drho;
  const Real dc = 6 * u + (2 * n - 5) * u * u - drho * (6 * (n - 3) + 2 * (n - 2) * (n - 3) * u);
  const Real dd = 6 * u + (4 * n - 7) * u * u - drho * (6 * (n - 2) + 2 * (n - 2) * (2 * n - 3) * u);

  switch (q) {
    case Quantity::VarB0_InterceptOnly:
      return {1 + rho, drho, b, db};
    case Quantity::VarB1_SlopeOnly:
      return {6 * one_minus_rho_sq * (n - 1), 6 * one_minus_rho_sq - 12 * rho * rho * t.step, d,
              dd};
    case Quantity::VarB0_Full:
      return {2 * (1 + rho) * d, 2 * drho * d + 2 * (1 + rho) * dd, b * c, db * c + b * dc};
    case Quantity::VarB1_Full:
      return {12 * one_minus_rho_sq * (n - 1), 12 * one_minus_rho_sq - 24 * rho * rho * t.step, c,
              dc};
    case Quantity::Cov_Full: {
      const Quotient<Real> slope = quotient_parts(Quantity::VarB1_Full, t);
      return {-slope.e1 / 2, -slope.e2 / 2, slope.e3, slope.e4};
    }
  }
  return {};
}

/// Value and first derivative, for forward-mode differentiation.
template <class Real>
struct Dual {
  Real v, d;
};

template <class Real>
Dual<Real> operator+(const Dual<Real>& a, const Dual<Real>& b) { return {a.v + b.v, a.d + b.d}; }
template <class Real>
Dual<Real> operator-(const Dual<Real>& a, const Dual<Real>& b) { return {a.v - b.v, a.d - b.d}; }
template <class Real>
Dual<Real> operator*(const Dual<Real>& a, const Dual<Real>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class Real>
Dual<Real> operator/(const Dual<Real>& a, const Dual<Real>& b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}
template <class Real>
Dual<Real> operator+(const Real& c, const Dual<Real>& a) { return {c + a.v, a.d}; }
template <class Real>
Dual<Real> operator*(const Real& c, const Dual<Real>& a) { return {c * a.v, c * a.d}; }

/// phi(s) = (1 - e^{-s}) / s and its derivative, both free of cancellation.
template <class Real>
Dual<Real> phi_of_step(const Real& s) {
  using std::expm1;
  const Real u = -expm1(-s);
  if (s >= Real(0.5)) {
    using std::exp;
    return {u / s, (s * exp(-s) - u) / (s * s)};
  }
  // phi'(s) = sum_{k>=1} (-1)^k k s^{k-1} / (k+1)!
  Real term = Real(-1) / 2;  // k = 1
  Real sum = term;
  for (int k = 1; k < 40; ++k) {
    // term_{k+1} / term_k = -s (k+1) / (k (k+2))
    term = -term * s * Real(k + 1) / Real(k * (k + 2));
    sum += term;
  }
  return {u / s, sum};
}

/// The five moments written in (lambda, s) with s = lambda / (n - 1). Every
/// ingredient (u, rho, phi = u/s) stays bounded as s -> 0, so differentiating
/// this form in s avoids the cancellation the quotient rule in n suffers
/// once lambda / (n - 1) is small.
template <class Real, class T>
T moment_in_step(Quantity q, const Real& lambda, const T& u, const T& rho, const T& phi) {
  const T one_plus_rho = Real(1) + rho;
  const T a = lambda * phi;  // (n - 1) u
  const T nm2u = a - u;      // (n - 2) u
  const T nm3u = a - Real(2) * u;
  const T b = Real(2) + nm2u;
  const T c = Real(12) + Real(6) * nm3u + nm2u * nm3u;
  const T d = Real(6) + Real(6) * nm2u + nm2u * (Real(2) * a - u);
  switch (q) {
    case Quantity::VarB0_InterceptOnly:
      return one_plus_rho / b;
    case Quantity::VarB1_SlopeOnly:
      return Real(6) * (a * one_plus_rho) / d;
    case Quantity::VarB0_Full:
      return Real(2) * (one_plus_rho * d) / (b * c);
    case Quantity::VarB1_Full:
      return Real(12) * (a * one_plus_rho) / c;
    case Quantity::Cov_Full:
      return Real(-6) * (a * one_plus_rho) / c;
  }
  return T{};
}

/// d/dn of the moment at fixed lambda, computed as -(s^2 / lambda) dV/ds.
template <class Real>
Real derivative_in_n(Quantity q, const Real& n, const Real& lambda) {
  using std::exp;
  using std::expm1;
  const Real s = lambda / (n - 1);
  const Real rho = exp(-s);
  const Dual<Real> u{-expm1(-s), rho};
  const Dual<Real> r{rho, -rho};
  const Dual<Real> v = moment_in_step(q, lambda, u, r, phi_of_step(s));
  return -(s * s / lambda) * v.d;
}

template <class Real>
Real moment_limit(Quantity q, const Real& lambda) {
  const Real& l = lambda;
  switch (q) {
    case Quantity::VarB0_InterceptOnly:
      return 2 / (l + 2);
    case Quantity::VarB1_SlopeOnly:
      return 12 * l / (6 + 6 * l + 2 * l * l);
    case Quantity::VarB0_Full:
      return 8 * (l * l + 3 * l + 3) / ((l + 2) * (l * l + 6 * l + 12));
    case Quantity::VarB1_Full:
      return 24 * l / (12 + 6 * l + l * l);
    case Quantity::Cov_Full:
      return -moment_limit(Quantity::VarB1_Full, l) / 2;
  }
  return Real(0);
}

}  // namespace infill::detail
