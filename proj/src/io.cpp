#include "geoalm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace geoalm {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) +
                         (column > 0 ? ", column " + std::to_string(column) : std::string()) +
                         ": " + message),
      line_(line),
      column_(column) {}

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

namespace {

struct Token {
  std::string_view text;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct DataLine {
  std::size_t line = 0;
  std::vector<Token> tokens;
};

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

// Non-empty lines with comments stripped, split on whitespace.
std::vector<DataLine> data_lines(std::string_view text) {
  std::vector<DataLine> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    DataLine dl{line_no, {}};
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && is_blank(line[i])) ++i;
      const std::size_t start = i;
      while (i < line.size() && !is_blank(line[i])) ++i;
      if (i > start) dl.tokens.push_back({line.substr(start, i - start), line_no, start + 1});
    }
    if (!dl.tokens.empty()) out.push_back(std::move(dl));
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return out;
}

double parse_real(const Token& t, bool allow_infinite = false) {
  double v = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(t.line, t.column, "expected a number, got '" + std::string(t.text) + "'");
  }
  if (std::isnan(v) || (!allow_infinite && std::isinf(v))) {
    throw ParseError(t.line, t.column, "value must be finite");
  }
  return v;
}

std::size_t parse_count(const Token& t) {
  std::size_t v = 0;
  const char* last = t.text.data() + t.text.size();
  const auto [ptr, ec] = std::from_chars(t.text.data(), last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(t.line, t.column,
                     "expected a non-negative integer, got '" + std::string(t.text) + "'");
  }
  return v;
}

void expect_tokens(const DataLine& dl, std::size_t count, const char* what) {
  if (dl.tokens.size() != count) {
    const std::size_t col = dl.tokens.size() > count ? dl.tokens[count].column : 0;
    throw ParseError(dl.line, col,
                     std::string(what) + ": expected " + std::to_string(count) + " values, found " +
                         std::to_string(dl.tokens.size()));
  }
}

std::size_t line_after(const std::vector<DataLine>& lines) {
  return lines.empty() ? 1 : lines.back().line + 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Graphs

Graph parse_graph(std::string_view text) {
  const auto lines = data_lines(text);
  if (lines.empty()) throw ParseError(1, 0, "missing header \"n m\"");
  expect_tokens(lines[0], 2, "header");
  const std::size_t n = parse_count(lines[0].tokens[0]);
  const std::size_t m = parse_count(lines[0].tokens[1]);
  if (lines.size() - 1 < m) {
    throw ParseError(line_after(lines), 0,
                     "expected " + std::to_string(m) + " edges, found " +
                         std::to_string(lines.size() - 1));
  }
  if (lines.size() - 1 > m) {
    throw ParseError(lines[m + 1].line, 0,
                     "unexpected data after " + std::to_string(m) + " edges");
  }

  std::vector<Edge> edges;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t e = 1; e <= m; ++e) {
    const DataLine& dl = lines[e];
    expect_tokens(dl, 3, "edge");
    const std::size_t i = parse_count(dl.tokens[0]);
    const std::size_t j = parse_count(dl.tokens[1]);
    const double w = parse_real(dl.tokens[2]);
    for (std::size_t t = 0; t < 2; ++t) {
      const std::size_t v = t == 0 ? i : j;
      if (v < 1 || v > n) {
        throw ParseError(dl.line, dl.tokens[t].column,
                         "vertex " + std::to_string(v) + " outside 1.." + std::to_string(n));
      }
    }
    if (i == j) throw ParseError(dl.line, dl.tokens[1].column, "self-loop at vertex " + std::to_string(i));
    if (!seen.emplace(std::min(i, j), std::max(i, j)).second) {
      throw ParseError(dl.line, dl.tokens[0].column,
                       "duplicate edge " + std::to_string(i) + "-" + std::to_string(j));
    }
    edges.push_back({i, j, w});
  }
  return Graph(n, std::move(edges));
}

std::string format_graph(const Graph& g) {
  std::string out = std::to_string(g.n()) + " " + std::to_string(g.edges().size()) + "\n";
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.i) + " " + std::to_string(e.j) + " " + format_double(e.weight) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Portfolio data

PortfolioData parse_portfolio(std::string_view text) {
  const auto lines = data_lines(text);
  if (lines.empty()) throw ParseError(1, 0, "missing header \"n kappa min_return\"");
  expect_tokens(lines[0], 3, "header");
  PortfolioData d;
  d.n = parse_count(lines[0].tokens[0]);
  d.kappa = parse_count(lines[0].tokens[1]);
  d.min_return = parse_real(lines[0].tokens[2]);
  if (d.n < 2) throw ParseError(lines[0].line, lines[0].tokens[0].column, "need n >= 2");
  if (d.kappa < 1 || d.kappa >= d.n) {
    throw ParseError(lines[0].line, lines[0].tokens[1].column,
                     "kappa must lie in [1, n-1] = [1, " + std::to_string(d.n - 1) + "]");
  }
  if (lines.size() < d.n + 3) {
    throw ParseError(line_after(lines), 0,
                     "expected " + std::to_string(d.n + 3) + " data lines, found " +
                         std::to_string(lines.size()));
  }
  if (lines.size() > d.n + 3) {
    throw ParseError(lines[d.n + 3].line, 0, "unexpected data after the covariance rows");
  }

  expect_tokens(lines[1], d.n, "mean returns");
  for (const Token& t : lines[1].tokens) d.mu.push_back(parse_real(t));
  expect_tokens(lines[2], d.n, "upper bounds");
  for (const Token& t : lines[2].tokens) {
    const double u = parse_real(t, true);
    if (u < 0.0) throw ParseError(t.line, t.column, "upper bound must be non-negative");
    d.upper.push_back(u);
  }
  d.Q.reserve(d.n * d.n);
  for (std::size_t r = 0; r < d.n; ++r) {
    const DataLine& dl = lines[3 + r];
    expect_tokens(dl, d.n, "covariance row");
    for (const Token& t : dl.tokens) d.Q.push_back(parse_real(t));
  }
  for (std::size_t r = 0; r < d.n; ++r) {
    for (std::size_t c = 0; c < r; ++c) {
      if (std::abs(d.Q[r * d.n + c] - d.Q[c * d.n + r]) > 1e-8) {
        const Token& t = lines[3 + r].tokens[c];
        throw ParseError(t.line, t.column,
                         "covariance not symmetric at (" + std::to_string(r + 1) + "," +
                             std::to_string(c + 1) + ")");
      }
    }
  }
  return d;
}

std::string format_portfolio(const PortfolioData& d) {
  std::string out = std::to_string(d.n) + " " + std::to_string(d.kappa) + " " +
                    format_double(d.min_return) + "\n";
  auto row = [&out](std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ' ';
      out += format_double(v[i]);
    }
    out += '\n';
  };
  row(d.mu);
  row(d.upper);
  for (std::size_t r = 0; r < d.n; ++r) row(std::span<const double>(d.Q).subspan(r * d.n, d.n));
  return out;
}

// ---------------------------------------------------------------------------
// Iteration reports

IterationRow to_row(const AlmIteration& it) {
  return {it.k, it.inner_iters, it.inner_cum, it.function_evals, it.f, it.V, it.step, it.rho};
}

namespace {

constexpr std::string_view kCsvHeader = "k,j,j_cum,f_ev,f,V,t,rho";

}  // namespace

std::string write_iteration_table(const std::vector<AlmIteration>& records) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%5s %9s %10s %10s %16s %12s %12s %12s\n", "k", "j", "j_cum",
                "f-ev", "f(w^k)", "V_k", "t_j", "rho_k");
  out += buf;
  for (const AlmIteration& it : records) {
    std::snprintf(buf, sizeof buf, "%5d %9ld %10ld %10ld %16.8e %12.4e %12.4e %12.4e\n", it.k,
                  it.inner_iters, it.inner_cum, it.function_evals, it.f, it.V, it.step, it.rho);
    out += buf;
  }
  return out;
}

std::string write_csv(const std::vector<AlmIteration>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const AlmIteration& it : records) {
    const IterationRow r = to_row(it);
    out += std::to_string(r.k) + ',' + std::to_string(r.j) + ',' + std::to_string(r.j_cum) + ',' +
           std::to_string(r.f_ev) + ',' + format_double(r.f) + ',' + format_double(r.V) + ',' +
           format_double(r.t) + ',' + format_double(r.rho) + '\n';
  }
  return out;
}

std::vector<IterationRow> parse_csv(std::string_view text) {
  std::vector<IterationRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!header_seen) {
      if (line != kCsvHeader) throw ParseError(line_no, 1, "expected header " + std::string(kCsvHeader));
      header_seen = true;
      continue;
    }
    std::vector<Token> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = std::min(line.find(',', start), line.size());
      fields.push_back({line.substr(start, comma - start), line_no, start + 1});
      if (comma == line.size()) break;
      start = comma + 1;
    }
    if (fields.size() != 8) {
      throw ParseError(line_no, 0, "expected 8 fields, found " + std::to_string(fields.size()));
    }
    auto integer = [](const Token& t) {
      long v = 0;
      const char* last = t.text.data() + t.text.size();
      const auto [ptr, ec] = std::from_chars(t.text.data(), last, v);
      if (ec != std::errc() || ptr != last) {
        throw ParseError(t.line, t.column, "expected an integer, got '" + std::string(t.text) + "'");
      }
      return v;
    };
    rows.push_back({integer(fields[0]), integer(fields[1]), integer(fields[2]), integer(fields[3]),
                    parse_real(fields[4], true), parse_real(fields[5], true),
                    parse_real(fields[6], true), parse_real(fields[7], true)});
  }
  if (!header_seen) throw ParseError(1, 1, "empty CSV");
  return rows;
}

std::string write_multistart_csv(const ProblemSpec& p, const MultistartReport& report) {
  std::string out = "start,status,outer,inner,f,V,cluster";
  for (std::size_t i = 0; i < p.dim_w(); ++i) out += ",w" + std::to_string(i + 1);
  out += '\n';
  for (const StartOutcome& r : report.runs) {
    out += std::to_string(r.index) + ',' + std::string(to_string(r.result.status)) + ',' +
           std::to_string(r.result.outer_iterations()) + ',' + std::to_string(r.result.inner_total) +
           ',' + format_double(r.result.f) + ',' + format_double(r.result.V) + ',' +
           std::to_string(r.cluster + 1);
    for (double v : r.result.w.values()) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

std::string write_cluster_report(const ProblemSpec& p, const MultistartReport& report) {
  std::map<std::string, std::size_t> by_status;
  for (const StartOutcome& r : report.runs) ++by_status[std::string(to_string(r.result.status))];
  std::ostringstream os;
  os << "problem " << p.name << ": " << report.runs.size() << " starts";
  for (const auto& [status, count] : by_status) os << ", " << count << ' ' << status;
  os << '\n';
  char buf[128];
  for (std::size_t c = 0; c < report.clusters.size(); ++c) {
    const Cluster& cl = report.clusters[c];
    std::snprintf(buf, sizeof buf, "cluster %zu: %zu runs, f = %.6f", c + 1, cl.count, cl.f);
    os << buf;
    if (cl.reference) os << ", reference point " << *cl.reference + 1;
    if (cl.representative.size() <= 12) {
      os << ", w = (";
      for (std::size_t i = 0; i < cl.representative.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", cl.representative[i]);
        os << buf;
      }
      os << ')';
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Run configuration

namespace {

using Setter = std::function<void(RunConfig&, const Token&)>;

double real_of(const Token& t) { return parse_real(t, true); }

long integer_of(const Token& t) {
  const double v = parse_real(t);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    throw ParseError(t.line, t.column, "expected an integer, got '" + std::string(t.text) + "'");
  }
  return static_cast<long>(v);
}

std::size_t positive_of(const Token& t) {
  const long v = integer_of(t);
  if (v < 1) throw ParseError(t.line, t.column, "expected a positive integer");
  return static_cast<std::size_t>(v);
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"problem", [](RunConfig& c, const Token& t) { c.problem = std::string(t.text); }},
      {"starts", [](RunConfig& c, const Token& t) { c.starts = positive_of(t); }},
      {"seed",
       [](RunConfig& c, const Token& t) {
         std::uint64_t v = 0;
         const char* last = t.text.data() + t.text.size();
         const auto [ptr, ec] = std::from_chars(t.text.data(), last, v);
         if (ec != std::errc() || ptr != last) {
           throw ParseError(t.line, t.column, "seed must be a non-negative integer");
         }
         c.seed = v;
       }},
      {"box_lo", [](RunConfig& c, const Token& t) { c.box_lo = parse_real(t); }},
      {"box_hi", [](RunConfig& c, const Token& t) { c.box_hi = parse_real(t); }},
      {"threads",
       [](RunConfig& c, const Token& t) {
         const long v = integer_of(t);
         if (v < 0) throw ParseError(t.line, t.column, "threads must be non-negative");
         c.threads = static_cast<unsigned>(v);
       }},
      {"table", [](RunConfig& c, const Token& t) { c.table_path = std::string(t.text); }},
      {"csv", [](RunConfig& c, const Token& t) { c.csv_path = std::string(t.text); }},
      {"beta", [](RunConfig& c, const Token& t) { c.alm.beta = real_of(t); }},
      {"eta", [](RunConfig& c, const Token& t) { c.alm.eta = real_of(t); }},
      {"outer_tol", [](RunConfig& c, const Token& t) { c.alm.outer_tol = real_of(t); }},
      {"inner_tol", [](RunConfig& c, const Token& t) { c.alm.inner_tol_base = real_of(t); }},
      {"max_outer",
       [](RunConfig& c, const Token& t) { c.alm.max_outer = static_cast<int>(positive_of(t)); }},
      {"rho0", [](RunConfig& c, const Token& t) { c.alm.rho0 = real_of(t); }},
      {"divergence_rho", [](RunConfig& c, const Token& t) { c.alm.divergence_rho = real_of(t); }},
      {"tau", [](RunConfig& c, const Token& t) { c.alm.spg.tau = real_of(t); }},
      {"sigma", [](RunConfig& c, const Token& t) { c.alm.spg.sigma = real_of(t); }},
      {"gamma_min", [](RunConfig& c, const Token& t) { c.alm.spg.gamma_min = real_of(t); }},
      {"gamma_max", [](RunConfig& c, const Token& t) { c.alm.spg.gamma_max = real_of(t); }},
      {"gamma_init", [](RunConfig& c, const Token& t) { c.alm.spg.gamma_init = real_of(t); }},
      {"history",
       [](RunConfig& c, const Token& t) {
         const long v = integer_of(t);
         if (v < 0) throw ParseError(t.line, t.column, "history must be non-negative");
         c.alm.spg.history = static_cast<std::size_t>(v);
       }},
      {"max_inner",
       [](RunConfig& c, const Token& t) {
         c.alm.spg.max_outer_iters = static_cast<long>(positive_of(t));
       }},
      {"max_backtracks",
       [](RunConfig& c, const Token& t) {
         c.alm.spg.max_backtracks = static_cast<int>(positive_of(t));
       }},
  };
  return table;
}

void apply(RunConfig& cfg, std::string_view key, const Token& value, std::size_t key_line,
           std::size_t key_col) {
  const auto it = setters().find(key);
  if (it == setters().end()) {
    throw ParseError(key_line, key_col, "unknown key '" + std::string(key) + "'");
  }
  it->second(cfg, value);
}

std::pair<std::size_t, std::size_t> position_of(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

RunConfig parse_json_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = position_of(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(line, col, "invalid JSON");
  }
  if (!doc.is_object()) throw ParseError(1, 1, "expected a JSON object");
  RunConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    const auto [line, col] = position_of(text, text.find('"' + key + '"'));
    std::string repr;
    if (value.is_string()) {
      repr = value.get<std::string>();
    } else if (value.is_number()) {
      repr = value.is_number_float() ? format_double(value.get<double>()) : value.dump();
    } else {
      throw ParseError(line, col, "value of '" + key + "' must be a string or a number");
    }
    apply(cfg, key, Token{repr, line, col}, line, col);
  }
  return cfg;
}

}  // namespace

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, setter] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

RunConfig parse_run_config(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json_config(text);

  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto key_start = line.find_first_not_of(" \t\r");
    if (key_start == std::string_view::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, key_start + 1, "expected key = value");
    auto trim = [](std::string_view s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string_view::npos) return std::pair<std::string_view, std::size_t>{{}, 0};
      const auto e = s.find_last_not_of(" \t\r");
      return std::pair{s.substr(b, e - b + 1), b};
    };
    const auto [key, key_off] = trim(line.substr(0, eq));
    const auto [value, value_off] = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, eq + 1, "missing key");
    if (value.empty()) throw ParseError(line_no, eq + 2, "missing value for '" + std::string(key) + "'");
    apply(cfg, key, Token{value, line_no, eq + 2 + value_off}, line_no, key_off + 1);
  }
  return cfg;
}

}  // namespace geoalm
