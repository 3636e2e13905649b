#include <algorithm>
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "infill/covariance.hpp"
#include "infill/errors.hpp"

namespace infill {
namespace {

using testing::Gen;
using testing::kTableLambda;

TEST(Rho, TableValues) {
  EXPECT_NEAR(rho(3, 1), 0.606531, 5e-7);
  EXPECT_NEAR(rho(50, 50), 0.360448, 5e-7);
  EXPECT_DOUBLE_EQ(rho(2, std::log(2.0)), 0.5);
}

TEST(Rho, RejectsOutOfDomain) {
  EXPECT_THROW(rho(1.5, 1), DomainError);
  EXPECT_THROW(rho(3, 0), DomainError);
  EXPECT_THROW(rho(3, -1), DomainError);
  EXPECT_THROW(rho(std::numeric_limits<double>::infinity(), 1), DomainError);
  EXPECT_THROW(rho(3, std::nan("")), DomainError);
}

TEST(OuParams, ComplementIsAccurateWhenRhoNearOne) {
  // lambda/(n-1) = 1e-12: plain subtraction 1 - rho would keep ~4 digits.
  const OuParams p(1e6 + 1, 1e-6);
  EXPECT_NEAR(p.one_minus_rho() / 1e-12, 1.0, 1e-10);
  EXPECT_NEAR(p.one_minus_rho_sq() / 2e-12, 1.0, 1e-10);
}

TEST(OuParams, ConditioningFloor) {
  EXPECT_NO_THROW(OuParams(10, 1).require_conditioned());
  EXPECT_THROW(OuParams(10, 1e-14).require_conditioned(), ConditioningError);
  EXPECT_THROW(sigma_inverse_even(10, 1e-14), ConditioningError);
}

TEST(OuParamsProperty, RhoInUnitIntervalAndComplementConsistent) {
  Gen gen(101);
  for (int i = 0; i < 2000; ++i) {
    const double n = gen.uniform(2, 1e4);
    const double lambda = gen.log_uniform(1e-3, 1e3);
    const OuParams p(n, lambda);
    SCOPED_TRACE(::testing::Message() << "n=" << n << " lambda=" << lambda);
    ASSERT_GT(p.rho(), 0.0);
    ASSERT_LT(p.rho(), 1.0);
    EXPECT_LE(std::abs(p.rho() + p.one_minus_rho() - 1.0),
              std::nextafter(p.rho(), 2.0) - p.rho());
  }
}

TEST(OuParamsProperty, RhoMonotoneInNAndLambda) {
  Gen gen(102);
  for (int i = 0; i < 1000; ++i) {
    const double n = gen.uniform(2, 500);
    const double lambda = gen.log_uniform(1e-2, 1e2);
    EXPECT_LT(rho(n, lambda), rho(n + gen.uniform(0.5, 10), lambda));
    EXPECT_GT(rho(n, lambda), rho(n, lambda * gen.uniform(1.1, 3)));
  }
}

TEST(OuParamsProperty, PowersTelescopeToExpMinusLambda) {
  Gen gen(103);
  for (int i = 0; i < 500; ++i) {
    const int n = gen.integer(2, 200);
    const double lambda = gen.log_uniform(0.05, 50);
    EXPECT_LE(testing::relative_error(std::pow(rho(n, lambda), n - 1), std::exp(-lambda)), 1e-12)
        << "n=" << n << " lambda=" << lambda;
  }
}

TEST(SigmaEven, SmallCases) {
  const CovMatrix two = sigma_even(2, std::log(2.0));
  EXPECT_DOUBLE_EQ(two(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(two(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(two(1, 0), 0.5);

  const CovMatrix three = sigma_even(3, 1);
  EXPECT_NEAR(three(0, 1), 0.606531, 5e-7);
  EXPECT_NEAR(three(0, 2), 0.367879, 5e-7);
  EXPECT_NEAR(three(1, 2), 0.606531, 5e-7);

  // rho = 1.389E-11 here, so the off-diagonal is that small but not zero.
  const CovMatrix nearly_white = sigma_even(3, 50);
  EXPECT_EQ(nearly_white.diagonal(), Eigen::VectorXd::Ones(3));
  EXPECT_NEAR(nearly_white(0, 1) / 1.389e-11, 1.0, 5e-4);
  EXPECT_LE((nearly_white - CovMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1.4e-11);
}

TEST(SigmaEven, RejectsSmallN) { EXPECT_THROW(sigma_even(1, 1), DomainError); }

TEST(SigmaInverseEven, SmallCases) {
  const CovMatrix two = sigma_inverse_even(2, std::log(2.0));
  EXPECT_NEAR(two(0, 0), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(two(0, 1), -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(two(1, 1), 4.0 / 3.0, 1e-15);

  EXPECT_LE((sigma_inverse_even(3, 50) - CovMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);

  const CovMatrix dense = sigma_even(6, 1).inverse();
  EXPECT_LE((sigma_inverse_even(6, 1) - dense).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SigmaInverseEven, IsTridiagonal) {
  const CovMatrix inv = sigma_inverse_even(8, 2);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      if (std::abs(i - j) > 1) {
        EXPECT_EQ(inv(i, j), 0.0);
      }
    }
  }
}

TEST(SigmaLattice, ProductIsIdentityAndMatchesDenseInverse) {
  for (int n = 2; n <= 100; ++n) {
    for (double lambda : kTableLambda) {
      const CovMatrix s = sigma_even(n, lambda);
      const CovMatrix inv = sigma_inverse_even(n, lambda);
      const CovMatrix eye = CovMatrix::Identity(n, n);
      ASSERT_LE((s * inv - eye).cwiseAbs().maxCoeff(), 1e-8) << "n=" << n << " lambda=" << lambda;
      ASSERT_LE((inv - s.inverse()).cwiseAbs().maxCoeff(), 1e-8) << "n=" << n << " lambda=" << lambda;
      ASSERT_EQ(Eigen::LLT<CovMatrix>(s).info(), Eigen::Success) << "n=" << n;
    }
  }
}

TEST(TridiagonalQuadraticForm, MatchesDenseProduct) {
  Gen gen(104);
  for (int i = 0; i < 300; ++i) {
    const int n = gen.integer(2, 60);
    const double lambda = gen.log_uniform(0.05, 50);
    const Eigen::VectorXd x = gen.normal_vector(n);
    const Eigen::VectorXd y = gen.normal_vector(n);
    const double dense = x.dot(sigma_inverse_even(n, lambda) * y);
    const double fast = tridiagonal_quadratic_form(OuParams(n, lambda), x, y);
    const double scale = x.norm() * y.norm() * sigma_inverse_even(n, lambda).norm();
    EXPECT_LE(std::abs(fast - dense), 1e-12 * scale) << "n=" << n << " lambda=" << lambda;
  }
}

TEST(TridiagonalQuadraticForm, RejectsLengthMismatch) {
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(4);
  const Eigen::VectorXd y = Eigen::VectorXd::Ones(5);
  EXPECT_THROW(tridiagonal_quadratic_form(OuParams(4, 1), x, y), DimensionError);
}

TEST(TimeGrid, Validation) {
  EXPECT_NO_THROW(TimeGrid({0.0, 1.0}));
  EXPECT_THROW(TimeGrid({0.0}), GridError);
  EXPECT_THROW(TimeGrid({0.1, 1.0}), GridError);
  EXPECT_THROW(TimeGrid({0.0, 0.9}), GridError);
  EXPECT_THROW(TimeGrid({0.0, 0.5, 0.5, 1.0}), GridError);
  EXPECT_THROW(TimeGrid({0.0, 0.6, 0.4, 1.0}), GridError);
  EXPECT_TRUE(TimeGrid::even(7).is_even());
  EXPECT_FALSE(TimeGrid({0.0, 0.3, 1.0}).is_even(1e-9));
}

TEST(SigmaGeneral, EvenGridAgreesWithSigmaEven) {
  EXPECT_LE((sigma_general(TimeGrid::even(4), 1) - sigma_even(4, 1)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SigmaGeneral, TwoPoints) {
  const CovMatrix s = sigma_general(TimeGrid({0.0, 1.0}), 5);
  EXPECT_NEAR(s(0, 1), 0.006738, 5e-7);
  EXPECT_DOUBLE_EQ(s(0, 1), std::exp(-5.0));
}

TEST(SigmaGeneralProperty, EntriesBoundedBelowByExpMinusLambda) {
  Gen gen(105);
  for (int i = 0; i < 200; ++i) {
    const int n = gen.integer(2, 30);
    std::vector<double> t{0.0};
    for (int k = 1; k < n - 1; ++k) t.push_back(gen.uniform(0, 1));
    std::sort(t.begin() + 1, t.end());
    t.push_back(1.0);
    t.erase(std::unique(t.begin(), t.end()), t.end());
    const CovMatrix s = sigma_general(TimeGrid(t), 0.05);
    EXPECT_GE(s.minCoeff(), std::exp(-0.05) - 1e-15);
    EXPECT_LE(s.maxCoeff(), 1.0);
  }
}

}  // namespace
}  // namespace infill
