#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infill/quantity.hpp"

namespace infill::cli {

inline constexpr int kDefaultDecimals = 6;

/// Values with |x| >= 1e-4 print as fixed with `decimals` places; smaller
/// ones as scientific with four significant digits (e.g. 1.389E-11).
std::string format_value(double x, int decimals = kDefaultDecimals);

/// Shortest round-trip spelling, used for axis labels (0.05, 1, 50).
std::string format_axis(double x);

/// Fixed-decimal count from INFILL_PRECISION, or kDefaultDecimals when unset.
/// Throws InputError when the variable is set to something other than an
/// integer in [1, 15].
int precision_from_env();

/// Published table axes.
std::vector<double> default_n_list();
std::vector<double> default_lambda_list();

struct TableGrid {
  std::vector<double> n_list;
  std::vector<double> lambda_list;
  /// values[i][j] belongs to (n_list[i], lambda_list[j]).
  std::vector<std::vector<double>> values;
};

/// What to tabulate: rho itself when quantity is empty.
struct TableRequest {
  std::optional<Quantity> quantity;
  bool derivative = false;
  std::vector<double> n_list = default_n_list();
  std::vector<double> lambda_list = default_lambda_list();
};

/// Throws InputError for empty axes or a derivative of rho.
TableGrid compute_table(const TableRequest& request);

/// Header `n,λ=0.05,λ=0.1,...`, then one row per n.
std::string render_csv(const TableGrid& grid, int decimals = kDefaultDecimals);

/// Throws InputError on a malformed document.
TableGrid parse_csv(std::string_view text);

std::string render_json(const TableGrid& grid, const TableRequest& request);

/// Parses "a:b" or "a:b:step" into the inclusive arithmetic sequence.
/// Throws InputError when malformed, empty or step <= 0.
std::vector<double> parse_range(std::string_view spec, double default_step);

}  // namespace infill::cli
