#pragma once

#include <array>
#include <string>
#include <string_view>

namespace infill {

enum class ModelKind { InterceptOnly, SlopeOnly, InterceptSlope };

inline constexpr std::array<ModelKind, 3> kAllModels = {
    ModelKind::InterceptOnly, ModelKind::SlopeOnly, ModelKind::InterceptSlope};

/// Number of regression coefficients.
constexpr int parameter_count(ModelKind model) {
  return model == ModelKind::InterceptSlope ? 2 : 1;
}

/// CLI spelling: "intercept", "slope", "full".
std::string_view to_string(ModelKind model);

/// Inverse of to_string; throws InputError on an unknown name.
ModelKind parse_model_kind(std::string_view name);

}  // namespace infill
