#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "infill/design_models.hpp"
#include "infill/errors.hpp"
#include "infill/gls_engine.hpp"

namespace infill {
namespace {

using testing::Gen;
using testing::kTableLambda;
using testing::kTableN;

double max_relative(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& expected) {
  return (actual - expected).cwiseAbs().maxCoeff() / expected.cwiseAbs().maxCoeff();
}

FitResult dense_fit(ModelKind model, const Eigen::VectorXd& y, double lambda) {
  const int n = static_cast<int>(y.size());
  return gls_fit({design_matrix(model, n), sigma_even(n, lambda), y});
}

TEST(DesignMatrix, Columns) {
  Eigen::VectorXd slope4(4);
  slope4 << 0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0;
  EXPECT_EQ(design_matrix(ModelKind::SlopeOnly, 4), Eigen::MatrixXd(slope4));
  EXPECT_EQ(design_matrix(ModelKind::SlopeOnly, 2), Eigen::MatrixXd(Eigen::Vector2d(0.0, 1.0)));

  Eigen::MatrixXd full3(3, 2);
  full3 << 1, 0, 1, 0.5, 1, 1;
  EXPECT_EQ(design_matrix(ModelKind::InterceptSlope, 3), full3);
  EXPECT_EQ(design_matrix(ModelKind::InterceptOnly, 5), Eigen::MatrixXd::Ones(5, 1));
  EXPECT_THROW(design_matrix(ModelKind::InterceptOnly, 1), DomainError);
}

TEST(MvTerms, UncorrelatedThreePoints) {
  const MvTerms mv = mv_terms(OuParams(3, 50), Eigen::Vector3d::Zero());
  EXPECT_NEAR(mv.m1, 3.0, 1e-9);
  EXPECT_NEAR(mv.m2, 1.5, 1e-9);
  EXPECT_NEAR(mv.m3, 1.25, 1e-9);
  EXPECT_NEAR(mv.det, 1.5, 1e-9);
  const OuParams p(3, 50);
  EXPECT_NEAR(p.one_minus_rho_sq() * mv.m3 / mv.det, 0.833333, 5e-7);
}

TEST(MvTerms, ZeroResponseGivesZeroV) {
  Gen gen(201);
  for (int i = 0; i < 50; ++i) {
    const int n = gen.integer(2, 50);
    const MvTerms mv = mv_terms(OuParams(n, gen.log_uniform(0.05, 50)), Eigen::VectorXd::Zero(n));
    EXPECT_EQ(mv.v1, 0.0);
    EXPECT_EQ(mv.v2, 0.0);
  }
}

TEST(MvTerms, MatchesDenseNormalMatrix) {
  Gen gen(202);
  const int n = 5;
  const double lambda = 1.0;
  const OuParams p(n, lambda);
  const Eigen::VectorXd y = gen.normal_vector(n);
  const Eigen::MatrixXd x = design_matrix(ModelKind::InterceptSlope, n);
  const Eigen::MatrixXd inv = sigma_even(n, lambda).inverse();
  const Eigen::MatrixXd m = p.one_minus_rho_sq() * x.transpose() * inv * x;
  const Eigen::VectorXd v = x.transpose() * inv * y;
  const MvTerms mv = mv_terms(p, y);
  EXPECT_LE(testing::relative_error(mv.m1, m(0, 0)), 1e-10);
  EXPECT_LE(testing::relative_error(mv.m2, m(0, 1)), 1e-10);
  EXPECT_LE(testing::relative_error(mv.m3, m(1, 1)), 1e-10);
  EXPECT_LE(testing::relative_error(mv.det, m.determinant()), 1e-10);
  EXPECT_LE(testing::relative_error(mv.v1, v(0)), 1e-10);
  EXPECT_LE(testing::relative_error(mv.v2, v(1)), 1e-10);
}

TEST(MvTerms, RejectsWrongLength) {
  EXPECT_THROW(mv_terms(OuParams(4, 1), Eigen::VectorXd::Zero(5)), DimensionError);
}

TEST(ClosedFormFit, ConstantResponseInterceptOnly) {
  Gen gen(203);
  for (int i = 0; i < 200; ++i) {
    const int n = gen.integer(2, 200);
    const double c = gen.uniform(-100, 100);
    const FitResult fit =
        closed_form_fit(ModelKind::InterceptOnly, Eigen::VectorXd::Constant(n, c), gen.log_uniform(0.05, 50));
    EXPECT_NEAR(fit.estimates(0), c, 4 * std::numeric_limits<double>::epsilon() * std::abs(c));
  }
}

TEST(ClosedFormFit, LineIsInterpolated) {
  const Eigen::VectorXd t = design_matrix(ModelKind::SlopeOnly, 10);
  const FitResult fit = closed_form_fit(ModelKind::InterceptSlope, (2.0 + 3.0 * t.array()).matrix(), 5);
  EXPECT_NEAR(fit.estimates(0), 2.0, 1e-12);
  EXPECT_NEAR(fit.estimates(1), 3.0, 1e-12);
  ASSERT_TRUE(fit.model.has_value());
  EXPECT_EQ(*fit.model, ModelKind::InterceptSlope);
}

TEST(ClosedFormFit, SlopeOnlyMatchesDenseFit) {
  Gen gen(204);
  const Eigen::VectorXd y = gen.normal_vector(7);
  const FitResult closed = closed_form_fit(ModelKind::SlopeOnly, y, 1);
  const FitResult dense = dense_fit(ModelKind::SlopeOnly, y, 1);
  EXPECT_LE(testing::relative_error(closed.estimates(0), dense.estimates(0)), 1e-10);
  EXPECT_LE(testing::relative_error(closed.covariance(0, 0), dense.covariance(0, 0)), 1e-10);
}

TEST(ClosedFormFit, TwoPointSlopeVarianceIsOneMinusRhoSquared) {
  for (double lambda : kTableLambda) {
    const OuParams p(2, lambda);
    const FitResult closed = closed_form_fit(ModelKind::SlopeOnly, Eigen::Vector2d(0.3, 1.1), lambda);
    const FitResult dense = dense_fit(ModelKind::SlopeOnly, Eigen::Vector2d(0.3, 1.1), lambda);
    EXPECT_LE(testing::relative_error(closed.covariance(0, 0), p.one_minus_rho_sq()), 1e-12);
    EXPECT_LE(testing::relative_error(closed.covariance(0, 0), dense.covariance(0, 0)), 1e-9);
    EXPECT_LE(testing::relative_error(closed.estimates(0), dense.estimates(0)), 1e-9);
  }
}

TEST(ClosedFormFit, NearlyUncorrelatedInterceptIsSampleMean) {
  Gen gen(205);
  // rho is below 1.4e-11 only for n <= 3 at lambda = 50.
  for (int n = 2; n <= 3; ++n) {
    const Eigen::VectorXd y = gen.normal_vector(n);
    EXPECT_NEAR(closed_form_fit(ModelKind::InterceptOnly, y, 50).estimates(0), y.mean(), 1e-9);
  }
}

TEST(ClosedFormFitProperty, ExactRecoveryOfLinearSignal) {
  Gen gen(206);
  for (ModelKind model : kAllModels) {
    for (int n = 2; n <= 50; ++n) {
      for (double lambda : kTableLambda) {
        const Eigen::VectorXd beta = gen.uniform_vector(parameter_count(model), -5, 5);
        const Eigen::VectorXd y = design_matrix(model, n) * beta;
        const FitResult fit = closed_form_fit(model, y, lambda);
        ASSERT_LE((fit.estimates - beta).cwiseAbs().maxCoeff(), 1e-12)
            << to_string(model) << " n=" << n << " lambda=" << lambda;
      }
    }
  }
}

TEST(ClosedFormFitProperty, LinearInResponse) {
  Gen gen(207);
  for (int i = 0; i < 200; ++i) {
    const ModelKind model = kAllModels[static_cast<std::size_t>(gen.integer(0, 2))];
    const int n = gen.integer(2, 50);
    const double lambda = gen.log_uniform(0.05, 50);
    const Eigen::VectorXd a = gen.normal_vector(n);
    const Eigen::VectorXd b = gen.normal_vector(n);
    const double s = gen.uniform(-3, 3);
    const Eigen::VectorXd lhs = closed_form_fit(model, a + s * b, lambda).estimates;
    const Eigen::VectorXd rhs =
        closed_form_fit(model, a, lambda).estimates + s * closed_form_fit(model, b, lambda).estimates;
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + rhs.cwiseAbs().maxCoeff()));
  }
}

TEST(ClosedFormFitProperty, AgreesWithDenseGlsOnTableGrid) {
  Gen gen(208);
  for (ModelKind model : kAllModels) {
    for (double n : kTableN) {
      for (double lambda : kTableLambda) {
        for (int draw = 0; draw < 100; ++draw) {
          const Eigen::VectorXd y = gen.normal_vector(static_cast<int>(n), 3.0);
          const FitResult closed = closed_form_fit(model, y, lambda);
          const FitResult dense = dense_fit(model, y, lambda);
          ASSERT_LE(max_relative(closed.estimates, dense.estimates), 1e-9)
              << to_string(model) << " n=" << n << " lambda=" << lambda << " draw=" << draw;
          if (draw == 0) {
            ASSERT_LE(max_relative(closed.covariance, dense.covariance), 1e-9)
                << to_string(model) << " n=" << n << " lambda=" << lambda;
          }
        }
      }
    }
  }
}

TEST(ClosedFormFit, Errors) {
  EXPECT_THROW(closed_form_fit(ModelKind::InterceptOnly, Eigen::VectorXd::Ones(1), 1), DomainError);
  EXPECT_THROW(closed_form_fit(ModelKind::InterceptOnly, Eigen::VectorXd::Ones(4), 0), DomainError);
  EXPECT_THROW(closed_form_fit(ModelKind::InterceptOnly, Eigen::VectorXd::Ones(4), 1e-14),
               ConditioningError);
  EXPECT_THROW(closed_form_estimates(ModelKind::SlopeOnly, OuParams(5, 1), Eigen::VectorXd::Ones(4)),
               DimensionError);
}

}  // namespace
}  // namespace infill
