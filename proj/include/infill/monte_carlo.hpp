#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "infill/covariance.hpp"
#include "infill/model_kind.hpp"

namespace infill {

/// Generator behind every simulation stream.
using RandomStream = std::mt19937_64;

/// Independent stream for replicate `index` of a run seeded with `seed`:
/// the pair is mixed through SplitMix64 and the result seeds a fresh
/// RandomStream. Streams depend only on (seed, index), never on scheduling.
RandomStream replicate_stream(std::uint64_t seed, std::uint64_t index);

/// Exact draw of the OU error vector on the even grid via the AR(1)
/// recursion eps_1 = z_1, eps_i = rho eps_{i-1} + sqrt(1 - rho^2) z_i.
/// n may be smaller than params.n() (a prefix of the process).
Eigen::VectorXd sample_ou_errors(int n, const OuParams& params, RandomStream& stream);

/// Zero-mean Gaussian draw with covariance L L' for an arbitrary grid, from
/// the Cholesky factor L of sigma_general (or any covariance).
class CholeskySampler {
 public:
  /// Throws NotPositiveDefiniteError if the covariance cannot be factored.
  explicit CholeskySampler(const CovMatrix& covariance);

  Eigen::VectorXd operator()(RandomStream& stream) const;

  int size() const { return static_cast<int>(lower_.rows()); }

 private:
  Eigen::MatrixXd lower_;
};

struct SimSpec {
  ModelKind model = ModelKind::InterceptSlope;
  /// True coefficients; length parameter_count(model).
  Eigen::VectorXd beta;
  int n = 10;
  double lambda = 1.0;
  std::int64_t reps = 1000;
  std::uint64_t seed = 0;
  /// Worker threads; the report does not depend on this.
  int workers = 1;

  /// Throws InputError when reps < 1, workers < 1, beta has the wrong
  /// length or (n, lambda) is outside the domain.
  void validate() const;
};

struct McReport {
  std::int64_t reps = 0;
  Eigen::VectorXd empirical_mean;
  /// Sample covariance of the replicate estimates (divisor reps - 1).
  Eigen::MatrixXd empirical_cov;
  /// Standard errors of empirical_mean: sqrt(diag(empirical_cov) / reps).
  Eigen::VectorXd mc_standard_errors;
  /// Normal-theory standard errors of each empirical_cov entry:
  /// sqrt((c_ii c_jj + c_ij^2) / (reps - 1)).
  Eigen::MatrixXd cov_standard_errors;
  /// Closed-form covariance of the estimator.
  Eigen::MatrixXd reference_cov;
  /// max_j |empirical_mean_j - beta_j| / mc_standard_errors_j.
  double max_abs_z = 0.0;
};

/// Replicates y = X beta + eps, fits each with closed_form_fit weights and
/// summarises. Bit-identical for a fixed seed whatever spec.workers is.
/// A failing replicate aborts the run with a NumericError naming its index.
McReport run_monte_carlo(const SimSpec& spec);

}  // namespace infill
