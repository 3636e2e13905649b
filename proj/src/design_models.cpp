#include "infill/design_models.hpp"

#include <string>

#include "infill/detail/moment_formulas.hpp"
#include "infill/errors.hpp"

namespace infill {

namespace {

using Wide = long double;

// Interior sums of the response, accumulated left to right:
//   interior   = sum_{i=2}^{n-1} y_i
//   weighted   = sum_{i=2}^{n-1} (i-1) y_i
struct ResponseSums {
  Wide first;
  Wide last;
  Wide interior;
  Wide weighted;
};

ResponseSums response_sums(const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::Index n = y.size();
  ResponseSums s{y(0), y(n - 1), 0.0L, 0.0L};
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    s.interior += y(i);
    s.weighted += static_cast<Wide>(i) * y(i);
  }
  return s;
}

struct WideMv {
  Wide m1, m2, m3, det, v1, v2;
};

WideMv wide_mv_terms(const detail::RhoTerms<Wide>& t, const detail::Denominators<Wide>& den,
                     const ResponseSums& s) {
  const Wide& n = t.n;
  const Wide& u = t.u;
  const Wide one_minus_rho_sq = u * (1 + t.rho);
  WideMv mv{};
  mv.m1 = 2 * u + (n - 2) * u * u;
  mv.m2 = (n - 2) * u * u / 2 + u;
  // Equal to (1-rho)^2 (n-2)(2n-3) / (6(n-1)) - rho (n-2)/(n-1) + 1.
  mv.m3 = den.d / (6 * (n - 1));
  mv.det = mv.m1 * mv.m3 - mv.m2 * mv.m2;
  mv.v1 = (s.first + u * s.interior + s.last) / (1 + t.rho);
  // -rho (n-2) + (n-1) = 1 + (n-2) u
  mv.v2 = (-t.rho * s.first + u * u * s.weighted + (1 + (n - 2) * u) * s.last) /
          (one_minus_rho_sq * (n - 1));
  return mv;
}

void check_response(const OuParams& params, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (static_cast<double>(y.size()) != params.n()) {
    throw DimensionError("response has " + std::to_string(y.size()) + " entries, expected n = " +
                         std::to_string(static_cast<long long>(params.n())));
  }
}

Eigen::VectorXd estimates_from(ModelKind model, const detail::RhoTerms<Wide>& t,
                               const detail::Denominators<Wide>& den, const ResponseSums& s) {
  const Wide& n = t.n;
  const Wide& u = t.u;
  Eigen::VectorXd beta(parameter_count(model));
  switch (model) {
    case ModelKind::InterceptOnly:
      // Weights 1, (1-rho), ..., (1-rho), 1 normalised by their sum B.
      beta(0) = static_cast<double>((s.first + u * s.interior + s.last) / den.b);
      break;
    case ModelKind::SlopeOnly:
      beta(0) = static_cast<double>(
          6 * (-t.rho * s.first + u * u * s.weighted + (1 + (n - 2) * u) * s.last) / den.d);
      break;
    case ModelKind::InterceptSlope: {
      const WideMv mv = wide_mv_terms(t, den, s);
      const Wide scale = u * (1 + t.rho) / mv.det;
      beta(0) = static_cast<double>(scale * (mv.m3 * mv.v1 - mv.m2 * mv.v2));
      beta(1) = static_cast<double>(scale * (-mv.m2 * mv.v1 + mv.m1 * mv.v2));
      break;
    }
  }
  return beta;
}

}  // namespace

DesignMatrix design_matrix(ModelKind model, int n) {
  if (n < 2) {
    throw DomainError("design matrix needs n >= 2, got " + std::to_string(n));
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd grid(n);
  for (int i = 0; i < n; ++i) {
    grid(i) = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  switch (model) {
    case ModelKind::InterceptOnly:
      return ones;
    case ModelKind::SlopeOnly:
      return grid;
    case ModelKind::InterceptSlope: {
      DesignMatrix x(n, 2);
      x.col(0) = ones;
      x.col(1) = grid;
      return x;
    }
  }
  return {};
}

MvTerms mv_terms(const OuParams& params, const Eigen::Ref<const Eigen::VectorXd>& y) {
  check_response(params, y);
  params.require_conditioned();
  const auto t = detail::make_terms<Wide>(params.n(), params.lambda());
  const WideMv mv = wide_mv_terms(t, detail::denominators(t), response_sums(y));
  return {static_cast<double>(mv.m1),  static_cast<double>(mv.m2),
          static_cast<double>(mv.m3),  static_cast<double>(mv.det),
          static_cast<double>(mv.v1),  static_cast<double>(mv.v2)};
}

Eigen::VectorXd closed_form_estimates(ModelKind model, const OuParams& params,
                                      const Eigen::Ref<const Eigen::VectorXd>& y) {
  check_response(params, y);
  params.require_conditioned();
  const auto t = detail::make_terms<Wide>(params.n(), params.lambda());
  return estimates_from(model, t, detail::denominators(t), response_sums(y));
}

FitResult closed_form_fit(ModelKind model, const Eigen::Ref<const Eigen::VectorXd>& y,
                          double lambda) {
  if (y.size() < 2) {
    throw DomainError("closed-form fit needs at least two observations");
  }
  const OuParams params(static_cast<double>(y.size()), lambda);
  params.require_conditioned();
  const auto t = detail::make_terms<Wide>(params.n(), params.lambda());
  const auto den = detail::denominators(t);

  FitResult fit;
  fit.model = model;
  fit.params = params;
  fit.estimates = estimates_from(model, t, den, response_sums(y));
  const auto moment = [&](Quantity q) {
    return static_cast<double>(detail::exact_moment(q, t, den));
  };
  switch (model) {
    case ModelKind::InterceptOnly:
      fit.covariance = Eigen::MatrixXd::Constant(1, 1, moment(Quantity::VarB0_InterceptOnly));
      break;
    case ModelKind::SlopeOnly:
      fit.covariance = Eigen::MatrixXd::Constant(1, 1, moment(Quantity::VarB1_SlopeOnly));
      break;
    case ModelKind::InterceptSlope: {
      const double cov = moment(Quantity::Cov_Full);
      fit.covariance.resize(2, 2);
      fit.covariance << moment(Quantity::VarB0_Full), cov, cov, moment(Quantity::VarB1_Full);
      break;
    }
  }
  return fit;
}

}  // namespace infill
