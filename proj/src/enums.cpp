#include <string>

#include "infill/errors.hpp"
#include "infill/model_kind.hpp"
#include "infill/quantity.hpp"

namespace infill {

std::string_view to_string(ModelKind model) {
  switch (model) {
    case ModelKind::InterceptOnly: return "intercept";
    case ModelKind::SlopeOnly: return "slope";
    case ModelKind::InterceptSlope: return "full";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  for (ModelKind m : kAllModels) {
    if (to_string(m) == name) return m;
  }
  throw InputError("unknown model '" + std::string(name) +
                   "' (expected intercept, slope or full)");
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::VarB0_InterceptOnly: return "var-b0-intercept";
    case Quantity::VarB1_SlopeOnly: return "var-b1-slope";
    case Quantity::VarB0_Full: return "var-b0-full";
    case Quantity::VarB1_Full: return "var-b1-full";
    case Quantity::Cov_Full: return "cov-full";
  }
  return "?";
}

Quantity parse_quantity(std::string_view name) {
  for (Quantity q : kAllQuantities) {
    if (to_string(q) == name) return q;
  }
  throw InputError("unknown quantity '" + std::string(name) +
                   "' (expected var-b0-intercept, var-b1-slope, var-b0-full, "
                   "var-b1-full or cov-full)");
}

ModelKind model_of(Quantity q) {
  switch (q) {
    case Quantity::VarB0_InterceptOnly: return ModelKind::InterceptOnly;
    case Quantity::VarB1_SlopeOnly: return ModelKind::SlopeOnly;
    default: return ModelKind::InterceptSlope;
  }
}

std::array<int, 2> covariance_entry(Quantity q) {
  switch (q) {
    case Quantity::VarB1_Full: return {1, 1};
    case Quantity::Cov_Full: return {0, 1};
    default: return {0, 0};
  }
}

}  // namespace infill
