#pragma once

#include <array>
#include <string_view>

#include "infill/model_kind.hpp"

namespace infill {

/// The five exact second moments of the GLS estimators.
enum class Quantity {
  VarB0_InterceptOnly,
  VarB1_SlopeOnly,
  VarB0_Full,
  VarB1_Full,
  Cov_Full,
};

inline constexpr std::array<Quantity, 5> kAllQuantities = {
    Quantity::VarB0_InterceptOnly, Quantity::VarB1_SlopeOnly, Quantity::VarB0_Full,
    Quantity::VarB1_Full, Quantity::Cov_Full};

/// CLI spelling: var-b0-intercept, var-b1-slope, var-b0-full, var-b1-full, cov-full.
std::string_view to_string(Quantity q);

/// Inverse of to_string; throws InputError on an unknown name.
Quantity parse_quantity(std::string_view name);

/// Model whose estimator covariance the quantity is an entry of.
ModelKind model_of(Quantity q);

/// Position (row, col) of the quantity in that model's covariance matrix.
std::array<int, 2> covariance_entry(Quantity q);

/// True for the two intercept variances, whose n -> infinity limits decrease
/// monotonically in lambda.
constexpr bool is_monotone_in_lambda(Quantity q) {
  return q == Quantity::VarB0_InterceptOnly || q == Quantity::VarB0_Full;
}

}  // namespace infill
