#include "infill/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "infill/design_models.hpp"
#include "infill/errors.hpp"
#include "infill/quantity.hpp"
#include "infill/variance_analysis.hpp"

namespace infill {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Eigen::MatrixXd reference_covariance(ModelKind model, double n, double lambda) {
  switch (model) {
    case ModelKind::InterceptOnly:
      return Eigen::MatrixXd::Constant(1, 1, exact_moment(Quantity::VarB0_InterceptOnly, n, lambda));
    case ModelKind::SlopeOnly:
      return Eigen::MatrixXd::Constant(1, 1, exact_moment(Quantity::VarB1_SlopeOnly, n, lambda));
    case ModelKind::InterceptSlope: {
      Eigen::MatrixXd ref(2, 2);
      const double cov = exact_moment(Quantity::Cov_Full, n, lambda);
      ref << exact_moment(Quantity::VarB0_Full, n, lambda), cov, cov,
          exact_moment(Quantity::VarB1_Full, n, lambda);
      return ref;
    }
  }
  return {};
}

struct ReplicateFailure {
  std::int64_t index = -1;
  std::string message;
};

}  // namespace

RandomStream replicate_stream(std::uint64_t seed, std::uint64_t index) {
  return RandomStream(splitmix64(splitmix64(seed) ^ index));
}

Eigen::VectorXd sample_ou_errors(int n, const OuParams& params, RandomStream& stream) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double r = params.rho();
  const double innovation_sd = std::sqrt(params.one_minus_rho_sq());
  Eigen::VectorXd eps(std::max(n, 0));
  for (int i = 0; i < n; ++i) {
    const double z = normal(stream);
    eps(i) = (i == 0) ? z : r * eps(i - 1) + innovation_sd * z;
  }
  return eps;
}

CholeskySampler::CholeskySampler(const CovMatrix& covariance) {
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("sampler covariance is not positive definite");
  }
  lower_ = llt.matrixL();
}

Eigen::VectorXd CholeskySampler::operator()(RandomStream& stream) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(lower_.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(stream);
  return lower_.triangularView<Eigen::Lower>() * z;
}

void SimSpec::validate() const {
  if (reps < 1) throw InputError("reps must be >= 1");
  if (workers < 1) throw InputError("workers must be >= 1");
  if (n < 2) throw DomainError("n must be >= 2");
  if (beta.size() != parameter_count(model)) {
    throw DimensionError("beta must have " + std::to_string(parameter_count(model)) +
                         " entries for model " + std::string(to_string(model)));
  }
  OuParams(n, lambda);
}

McReport run_monte_carlo(const SimSpec& spec) {
  spec.validate();
  const OuParams params(spec.n, spec.lambda);
  params.require_conditioned();
  const Eigen::VectorXd mean_response = design_matrix(spec.model, spec.n) * spec.beta;
  const int p = parameter_count(spec.model);

  // One column per replicate, filled independently and reduced in index order.
  Eigen::MatrixXd estimates(p, spec.reps);

  const int workers =
      static_cast<int>(std::min<std::int64_t>(spec.workers, spec.reps));
  std::vector<ReplicateFailure> failures(static_cast<std::size_t>(workers));
  const auto run_range = [&](int worker, std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      try {
        RandomStream stream = replicate_stream(spec.seed, static_cast<std::uint64_t>(i));
        const Eigen::VectorXd y = mean_response + sample_ou_errors(spec.n, params, stream);
        estimates.col(i) = closed_form_estimates(spec.model, params, y);
      } catch (const std::exception& e) {
        failures[static_cast<std::size_t>(worker)] = {i, e.what()};
        return;
      }
    }
  };

  if (workers == 1) {
    run_range(0, 0, spec.reps);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (spec.reps + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t begin = std::min<std::int64_t>(spec.reps, w * chunk);
      const std::int64_t end = std::min<std::int64_t>(spec.reps, begin + chunk);
      threads.emplace_back(run_range, w, begin, end);
    }
    for (auto& t : threads) t.join();
  }
  for (const auto& f : failures) {
    // Chunks are ordered, so the first recorded failure has the lowest index.
    if (f.index >= 0) {
      throw NumericError("replicate " + std::to_string(f.index) + " failed: " + f.message);
    }
  }

  McReport report;
  report.reps = spec.reps;
  const double r = static_cast<double>(spec.reps);
  report.empirical_mean = Eigen::VectorXd::Zero(p);
  for (std::int64_t i = 0; i < spec.reps; ++i) report.empirical_mean += estimates.col(i);
  report.empirical_mean /= r;

  report.empirical_cov = Eigen::MatrixXd::Zero(p, p);
  for (std::int64_t i = 0; i < spec.reps; ++i) {
    const Eigen::VectorXd d = estimates.col(i) - report.empirical_mean;
    report.empirical_cov += d * d.transpose();
  }
  const double dof = std::max(1.0, r - 1.0);
  report.empirical_cov /= dof;

  report.mc_standard_errors = (report.empirical_cov.diagonal() / r).cwiseSqrt();
  report.cov_standard_errors.resize(p, p);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      const double c = report.empirical_cov(a, b);
      report.cov_standard_errors(a, b) = std::sqrt(
          (report.empirical_cov(a, a) * report.empirical_cov(b, b) + c * c) / dof);
    }
  }
  report.reference_cov = reference_covariance(spec.model, params.n(), spec.lambda);

  report.max_abs_z = 0.0;
  for (int j = 0; j < p; ++j) {
    const double diff = std::abs(report.empirical_mean(j) - spec.beta(j));
    const double se = report.mc_standard_errors(j);
    double z = 0.0;
    if (se > 0.0) {
      z = diff / se;
    } else if (diff > 0.0) {
      z = std::numeric_limits<double>::infinity();
    }
    report.max_abs_z = std::max(report.max_abs_z, z);
  }
  return report;
}

}  // namespace infill
