#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "geoalm/alm.hpp"
#include "geoalm/instances.hpp"
#include "geoalm/multistart.hpp"

namespace geoalm {

/// Malformed input. `line` and `column` are 1-based; column 0 means the whole line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// "n m" followed by m lines "i j w" (1-based). '#' starts a comment.
Graph parse_graph(std::string_view text);
std::string format_graph(const Graph& g);

/// Line 1 "n kappa min_return", line 2 mu, line 3 upper bounds, then n rows of Q.
PortfolioData parse_portfolio(std::string_view text);
std::string format_portfolio(const PortfolioData& d);

/// One row of the per-outer-iteration report.
struct IterationRow {
  long k = 0;
  long j = 0;
  long j_cum = 0;
  long f_ev = 0;
  double f = 0.0;
  double V = 0.0;
  double t = 0.0;
  double rho = 0.0;

  bool operator==(const IterationRow&) const = default;
};

IterationRow to_row(const AlmIteration& it);

/// Fixed-width text table with columns k, j, j_cum, f-ev, f, V, t, rho.
std::string write_iteration_table(const std::vector<AlmIteration>& records);
/// Header plus one row per record, values at full round-trip precision.
std::string write_csv(const std::vector<AlmIteration>& records);
std::vector<IterationRow> parse_csv(std::string_view text);

/// One row per start: index, status, outer iterations, inner total, f, V,
/// cluster number, then the coordinates of the limit point.
std::string write_multistart_csv(const ProblemSpec& p, const MultistartReport& report);
/// Human-readable cluster summary.
std::string write_cluster_report(const ProblemSpec& p, const MultistartReport& report);

struct RunConfig {
  std::string problem;
  std::size_t starts = 100;
  std::uint64_t seed = 0;
  double box_lo = -10.0;
  double box_hi = 10.0;
  unsigned threads = 0;
  std::optional<std::string> table_path;
  std::optional<std::string> csv_path;
  AlmConfig alm;
};

/// Flat "key = value" lines, or a JSON object when the first non-blank
/// character is '{'. Unknown keys are rejected.
RunConfig parse_run_config(std::string_view text);

/// Keys accepted by parse_run_config.
const std::vector<std::string>& run_config_keys();

}  // namespace geoalm
