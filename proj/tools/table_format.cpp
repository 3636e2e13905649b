#include "table_format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "infill/covariance.hpp"
#include "infill/errors.hpp"
#include "infill/variance_analysis.hpp"

namespace infill::cli {

namespace {

constexpr std::string_view kLambdaPrefix = "λ=";

double parse_number(std::string_view token) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
    token.remove_suffix(1);
  }
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw InputError("not a number: '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string format_value(double x, int decimals) {
  char buf[64];
  if (std::abs(x) >= 1e-4) {
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  } else {
    std::snprintf(buf, sizeof buf, "%.3E", x);
  }
  return buf;
}

std::string format_axis(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

int precision_from_env() {
  const char* raw = std::getenv("INFILL_PRECISION");
  if (raw == nullptr || *raw == '\0') return kDefaultDecimals;
  const std::string_view text(raw);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1 || value > 15) {
    throw InputError("INFILL_PRECISION must be an integer in [1, 15], got '" + std::string(text) +
                     "'");
  }
  return value;
}

std::vector<double> default_n_list() { return {3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50}; }

std::vector<double> default_lambda_list() { return {0.05, 0.1, 1, 5, 10, 50}; }

TableGrid compute_table(const TableRequest& request) {
  if (request.n_list.empty() || request.lambda_list.empty()) {
    throw InputError("table axes must be non-empty");
  }
  if (request.derivative && !request.quantity) {
    throw InputError("--derivative needs a quantity; rho has no tabulated derivative");
  }
  TableGrid grid{request.n_list, request.lambda_list, {}};
  grid.values.reserve(grid.n_list.size());
  for (double n : grid.n_list) {
    std::vector<double> row;
    row.reserve(grid.lambda_list.size());
    for (double lambda : grid.lambda_list) {
      if (!request.quantity) {
        row.push_back(rho(n, lambda));
      } else if (request.derivative) {
        row.push_back(moment_derivative_n(*request.quantity, n, lambda).value);
      } else {
        row.push_back(exact_moment(*request.quantity, n, lambda));
      }
    }
    grid.values.push_back(std::move(row));
  }
  return grid;
}

std::string render_csv(const TableGrid& grid, int decimals) {
  std::ostringstream os;
  os << "n";
  for (double lambda : grid.lambda_list) os << ',' << kLambdaPrefix << format_axis(lambda);
  os << '\n';
  for (std::size_t i = 0; i < grid.n_list.size(); ++i) {
    os << format_axis(grid.n_list[i]);
    for (double v : grid.values[i]) os << ',' << format_value(v, decimals);
    os << '\n';
  }
  return os.str();
}

TableGrid parse_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw InputError("empty table");
  const auto header = split(lines.front(), ',');
  if (header.size() < 2 || header.front() != "n") {
    throw InputError("table header must start with 'n,'");
  }
  TableGrid grid;
  for (std::size_t j = 1; j < header.size(); ++j) {
    std::string_view label = header[j];
    if (label.substr(0, kLambdaPrefix.size()) != kLambdaPrefix) {
      throw InputError("column label '" + std::string(label) + "' does not start with λ=");
    }
    label.remove_prefix(kLambdaPrefix.size());
    grid.lambda_list.push_back(parse_number(label));
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    if (cells.size() != header.size()) {
      throw InputError("row " + std::to_string(i) + " has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(header.size()));
    }
    grid.n_list.push_back(parse_number(cells.front()));
    std::vector<double> row;
    for (std::size_t j = 1; j < cells.size(); ++j) row.push_back(parse_number(cells[j]));
    grid.values.push_back(std::move(row));
  }
  return grid;
}

std::string render_json(const TableGrid& grid, const TableRequest& request) {
  nlohmann::json doc;
  doc["quantity"] = request.quantity ? std::string(to_string(*request.quantity)) : "rho";
  doc["derivative"] = request.derivative;
  doc["n"] = grid.n_list;
  doc["lambda"] = grid.lambda_list;
  doc["values"] = grid.values;
  return doc.dump(2) + "\n";
}

std::vector<double> parse_range(std::string_view spec, double default_step) {
  const auto parts = split(spec, ':');
  if (parts.size() < 2 || parts.size() > 3) {
    throw InputError("range must look like a:b or a:b:step, got '" + std::string(spec) + "'");
  }
  const double lo = parse_number(parts[0]);
  const double hi = parse_number(parts[1]);
  const double step = parts.size() == 3 ? parse_number(parts[2]) : default_step;
  if (!(step > 0.0) || !(hi >= lo)) {
    throw InputError("range '" + std::string(spec) + "' is empty or has a non-positive step");
  }
  std::vector<double> out;
  // Points are lo + k*step so long ranges do not accumulate rounding.
  for (long k = 0;; ++k) {
    const double x = lo + static_cast<double>(k) * step;
    if (x > hi + 1e-9 * step) break;
    out.push_back(x);
  }
  return out;
}

}  // namespace infill::cli
