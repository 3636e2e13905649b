#pragma once

#include <optional>
#include <string>
#include <vector>

#include "infill/quantity.hpp"

namespace infill::testing {

struct PublishedTableSource {
  int number;
  /// Empty for the table of rho itself.
  std::optional<Quantity> quantity;
  bool derivative;
  const char* text;
};

const std::vector<PublishedTableSource>& published_table_sources();

struct PublishedCell {
  double n;
  double lambda;
  std::string printed;
  double value;
  /// Printed in E notation rather than with fixed decimals.
  bool scientific;
};

struct PublishedTable {
  int number = 0;
  std::optional<Quantity> quantity;
  bool derivative = false;
  std::vector<double> n_list;
  std::vector<double> lambda_list;
  /// Row-major over (n_list, lambda_list).
  std::vector<PublishedCell> cells;
};

/// All eleven published tables, parsed.
const std::vector<PublishedTable>& published_tables();

const PublishedTable& published_table(int number);

/// Model value for one cell of `table`.
double model_value(const PublishedTable& table, double n, double lambda);

/// CLI arguments (after the program name) that regenerate `table`.
std::vector<std::string> table_command(const PublishedTable& table);

}  // namespace infill::testing
