#include "geoalm/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "geoalm/io.hpp"
#include "geoalm/multistart.hpp"
#include "geoalm/symmetric_eigen.hpp"

namespace geoalm::cli {

namespace {

// Invalid user input, reported with exit code 64.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = s.find(sep, start);
    parts.push_back(s.substr(start, at == std::string_view::npos ? s.npos : at - start));
    if (at == std::string_view::npos) return parts;
    start = at + 1;
  }
}

double to_real(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || std::isnan(v)) {
    throw UsageError("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::size_t to_count(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

std::string format_point(const Point& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ", ";
    s += format_double(w[i]);
  }
  return s;
}

std::size_t count_nonzeros(const Point& w) {
  std::size_t nnz = 0;
  for (double v : w.values()) nnz += v != 0.0;
  return nnz;
}

// Flags shared by every solving subcommand; values only apply when given.
struct CommonOptions {
  std::string config_path;
  std::string problem;
  double tol = 0.0;
  int max_outer = 0;
  long max_inner = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string table;
  std::string csv;

  CLI::Option* o_config = nullptr;
  CLI::Option* o_problem = nullptr;
  CLI::Option* o_tol = nullptr;
  CLI::Option* o_max_outer = nullptr;
  CLI::Option* o_max_inner = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_threads = nullptr;
  CLI::Option* o_table = nullptr;
  CLI::Option* o_csv = nullptr;

  void attach(CLI::App* app, bool with_problem) {
    o_config = app->add_option("--config", config_path, "key=value or JSON run configuration");
    if (with_problem) o_problem = app->add_option("--problem", problem, "problem selector");
    o_tol = app->add_option("--tol", tol, "outer tolerance on V")->check(CLI::PositiveNumber);
    o_max_outer = app->add_option("--max-outer", max_outer, "outer iteration cap")
                      ->check(CLI::PositiveNumber);
    o_max_inner = app->add_option("--max-inner", max_inner, "SPG iteration cap per subproblem")
                      ->check(CLI::PositiveNumber);
    o_seed = app->add_option("--seed", seed, "random seed");
    o_threads = app->add_option("--threads", threads, "worker threads (0: automatic)");
    o_table = app->add_option("--table", table, "iteration table (stdout, or the given file)")
                  ->expected(0, 1);
    o_csv = app->add_option("--csv", csv, "CSV output path ('-' for stdout)");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (o_config->count()) cfg = parse_run_config(read_file(config_path));
    if (o_problem && o_problem->count()) cfg.problem = problem;
    if (o_tol->count()) cfg.alm.outer_tol = tol;
    if (o_max_outer->count()) cfg.alm.max_outer = max_outer;
    if (o_max_inner->count()) cfg.alm.spg.max_outer_iters = max_inner;
    if (o_seed->count()) cfg.seed = seed;
    if (o_threads->count()) cfg.threads = threads;
    if (o_table->count()) cfg.table_path = table.empty() ? "-" : table;
    if (o_csv->count()) cfg.csv_path = csv;
    cfg.alm.validate();
    return cfg;
  }
};

void emit_records(const RunConfig& cfg, const std::vector<AlmIteration>& records,
                  std::ostream& out) {
  if (cfg.table_path) write_text(*cfg.table_path, write_iteration_table(records), out);
  if (cfg.csv_path) write_text(*cfg.csv_path, write_csv(records), out);
}

void print_summary(const ProblemSpec& p, const SolveResult& r, std::ostream& out) {
  out << "problem: " << p.name << '\n'
      << "status: " << to_string(r.status) << '\n'
      << "outer iterations: " << r.outer_iterations() << '\n'
      << "inner iterations: " << r.inner_total << '\n'
      << "f: " << format_double(r.f) << '\n'
      << "V: " << format_double(r.V) << '\n'
      << "rho: " << format_double(r.rho) << '\n';
  if (r.status == AlmStatus::infeasible_stationary) {
    out << "feasibility residual: " << format_double(r.feasibility_residual) << '\n';
  }
  if (r.w.size() <= 64) out << "w: " << format_point(r.w) << '\n';
}

void print_maxcut(const ProblemInstance& inst, const SolveResult& r, std::ostream& out) {
  const std::size_t rank = numerical_rank(r.w);
  out << (inst.relaxation ? "relaxation bound: " : "cut value: ") << format_double(-r.f) << '\n'
      << "rank: " << rank << '\n';
  if (rank != 1) {
    out << "cut: unavailable (rank " << rank << ")\n";
    return;
  }
  const Cut cut = cut_from_rank1(*inst.graph, r.w);
  out << "cut: {";
  for (std::size_t i = 0; i < cut.side.size(); ++i) out << (i ? ", " : "") << cut.side[i];
  out << "} weight " << format_double(cut.weight) << '\n';
}

int cmd_solve(const CommonOptions& opts, const std::vector<double>& start, std::ostream& out) {
  const RunConfig cfg = opts.resolve();
  if (cfg.problem.empty()) throw UsageError("--problem is required");
  const ProblemInstance inst = resolve_problem(cfg.problem, cfg.seed);
  Point w0 = inst.spec.default_start;
  if (!start.empty()) {
    if (start.size() != inst.spec.dim_w()) {
      throw UsageError("--start has " + std::to_string(start.size()) + " values, problem needs " +
                       std::to_string(inst.spec.dim_w()));
    }
    w0 = w0.with_values(start);
  }
  const SolveResult r = alm_solve(inst.spec, w0, cfg.alm);
  emit_records(cfg, r.records, out);
  print_summary(inst.spec, r, out);
  if (inst.graph) print_maxcut(inst, r, out);
  return exit_code(r.status);
}

int cmd_multistart(const CommonOptions& opts, CLI::Option* o_starts, std::size_t starts,
                   CLI::Option* o_box, const std::vector<double>& box, std::ostream& out) {
  RunConfig cfg = opts.resolve();
  if (cfg.problem.empty()) throw UsageError("--problem is required");
  if (o_starts->count()) cfg.starts = starts;
  if (o_box->count()) {
    cfg.box_lo = box[0];
    cfg.box_hi = box[1];
  }
  if (!(cfg.box_lo <= cfg.box_hi)) throw UsageError("--box needs lo <= hi");
  const ProblemInstance inst = resolve_problem(cfg.problem, cfg.seed);

  MultistartConfig mc;
  mc.starts = cfg.starts;
  mc.lo = cfg.box_lo;
  mc.hi = cfg.box_hi;
  mc.seed = cfg.seed;
  mc.threads = cfg.threads;
  const MultistartReport report = multistart(inst.spec, mc, cfg.alm);

  if (cfg.csv_path) write_text(*cfg.csv_path, write_multistart_csv(inst.spec, report), out);
  out << write_cluster_report(inst.spec, report);

  int code = kExitOk;
  for (const StartOutcome& s : report.runs) {
    if (s.result.status == AlmStatus::iter_cap) return kExitIterCap;
    if (s.result.status == AlmStatus::infeasible_stationary) code = kExitInfeasible;
  }
  return code;
}

int cmd_boost(const CommonOptions& opts, const std::string& source, CLI::Option* o_kappa,
              std::size_t kappa, std::ostream& out) {
  const RunConfig cfg = opts.resolve();
  PortfolioData d = resolve_portfolio(source, cfg.seed);
  if (o_kappa->count()) d.kappa = kappa;
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto stages = boosted_portfolio_stages(d, cfg.alm);
  char buf[160];
  for (const BoostStage& s : stages) {
    const std::string label = s.level == 0 ? std::string("box") : "kappa=" + std::to_string(s.level);
    std::snprintf(buf, sizeof buf, "stage %-9s status=%-21s f=%.10g V=%.3e nnz=%zu outer=%d inner=%ld\n",
                  label.c_str(), std::string(to_string(s.result.status)).c_str(), s.result.f,
                  s.result.V, count_nonzeros(s.result.w), s.result.outer_iterations(),
                  s.result.inner_total);
    out << buf;
  }
  const SolveResult& last = stages.back().result;
  emit_records(cfg, last.records, out);
  out << "f: " << format_double(last.f) << '\n' << "w: " << format_point(last.w) << '\n';
  return exit_code(last.status);
}

int cmd_project(const std::string& set_spec, const std::string& point, std::ostream& out) {
  const std::vector<double> values = parse_point_list(point);
  if (values.empty()) throw UsageError("--point is empty");
  const StructuredSet d = parse_set_spec(set_spec, values.size());
  if (d.dim() != values.size()) {
    throw UsageError("set has dimension " + std::to_string(d.dim()) + ", point has " +
                     std::to_string(values.size()));
  }
  const Point w = d.shape().kind == ShapeKind::sym_matrix
                      ? Point::sym_matrix(d.shape().n, values)
                      : Point::vector(values);
  const Point proj = d.project(w);
  std::string line;
  for (std::size_t i = 0; i < proj.size(); ++i) {
    if (i) line += ',';
    line += format_double(proj[i]);
  }
  out << line << '\n';
  return kExitOk;
}

}  // namespace

int exit_code(AlmStatus status) {
  switch (status) {
    case AlmStatus::am_stationary: return kExitOk;
    case AlmStatus::infeasible_stationary: return kExitInfeasible;
    case AlmStatus::iter_cap: return kExitIterCap;
  }
  return kExitFailure;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

PortfolioData resolve_portfolio(std::string_view source, std::uint64_t seed) {
  if (source.starts_with("synth:")) {
    const auto parts = split(source, ':');
    if (parts.size() != 3) throw UsageError("expected synth:N:K, got '" + std::string(source) + "'");
    const std::size_t n = to_count(parts[1]);
    const std::size_t k = to_count(parts[2]);
    if (n < 2 || k < 1 || k >= n) throw UsageError("synthetic portfolio needs n >= 2 and 1 <= K < n");
    return synthetic_portfolio(n, k, seed);
  }
  return parse_portfolio(read_file(std::string(source)));
}

ProblemInstance resolve_problem(std::string_view selector, std::uint64_t seed) {
  const auto colon = selector.find(':');
  const std::string_view head = selector.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : selector.substr(colon + 1);
  auto need_arg = [&] {
    if (arg.empty()) throw UsageError("problem '" + std::string(head) + "' needs an argument");
  };

  ProblemInstance inst;
  if (head == "scholtes" && arg.empty()) {
    inst.spec = build_scholtes();
  } else if (head == "cardinality" && arg.empty()) {
    inst.spec = build_cardinality_example(false);
  } else if (head == "cardinality-w4" && arg.empty()) {
    inst.spec = build_cardinality_example(true);
  } else if (head == "obstacle") {
    need_arg();
    const std::size_t n = to_count(arg);
    if (n < 2) throw UsageError("obstacle needs n >= 2");
    inst.spec = build_obstacle(n);
  } else if (head == "portfolio") {
    need_arg();
    inst.spec = build_portfolio(resolve_portfolio(arg, seed));
  } else if (head == "maxcut" || head == "maxcut-sdp") {
    need_arg();
    inst.graph = parse_graph(read_file(std::string(arg)));
    inst.relaxation = head == "maxcut-sdp";
    inst.spec = inst.relaxation ? build_maxcut_relaxation(*inst.graph) : build_maxcut(*inst.graph);
  } else {
    throw UsageError("unknown problem '" + std::string(selector) + "'");
  }
  return inst;
}

std::vector<double> parse_point_list(std::string_view text) {
  std::vector<double> values;
  std::size_t i = 0;
  auto sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (i < text.size()) {
    while (i < text.size() && sep(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !sep(text[i])) ++i;
    if (i > start) values.push_back(to_real(text.substr(start, i - start)));
  }
  return values;
}

StructuredSet parse_set_spec(std::string_view spec, std::size_t dim) {
  const auto parts = split(spec, ':');
  const std::string_view kind = parts[0];
  auto expect = [&](std::size_t args) {
    if (parts.size() != args + 1) {
      throw UsageError("set '" + std::string(kind) + "' takes " + std::to_string(args) +
                       " parameters");
    }
  };
  auto pairs = [&] {
    if (dim % 2 != 0) throw UsageError("pair sets need an even dimension");
    return dim / 2;
  };
  try {
    if (kind == "box") {
      expect(2);
      return StructuredSet::box(std::vector<double>(dim, to_real(parts[1])),
                                std::vector<double>(dim, to_real(parts[2])));
    }
    if (kind == "complementarity") {
      expect(0);
      return StructuredSet::complementarity(pairs());
    }
    if (kind == "switching") {
      expect(0);
      return StructuredSet::switching(pairs());
    }
    if (kind == "box-switching") {
      expect(4);
      return StructuredSet::box_switching(pairs(), to_real(parts[1]), to_real(parts[2]),
                                          to_real(parts[3]), to_real(parts[4]));
    }
    if (kind == "sparse") {
      expect(1);
      return StructuredSet::sparse(dim, to_count(parts[1]));
    }
    if (kind == "sparse-box") {
      expect(3);
      return StructuredSet::sparse_box(to_count(parts[1]),
                                       std::vector<double>(dim, to_real(parts[2])),
                                       std::vector<double>(dim, to_real(parts[3])));
    }
    if (kind == "low-rank") {
      expect(3);
      const std::size_t rows = to_count(parts[1]);
      const std::size_t cols = to_count(parts[2]);
      if (rows * cols != dim) throw UsageError("low-rank shape does not match the point");
      return StructuredSet::low_rank(rows, cols, to_count(parts[3]));
    }
    if (kind == "psd-rank") {
      expect(1);
      const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(dim))));
      if (n * n != dim) throw UsageError("psd-rank needs a square number of values");
      return StructuredSet::psd_low_rank(n, to_count(parts[1]));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown set '" + std::string(spec) + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Augmented Lagrangian solver for problems with structured geometric constraints"};
  app.name("geoalm");
  app.require_subcommand(1);

  CommonOptions solve_opts;
  std::vector<double> start;
  CLI::App* solve = app.add_subcommand("solve", "solve one instance from its default start");
  solve_opts.attach(solve, true);
  solve->add_option("--start", start, "start point (overrides the default)")->delimiter(',');

  CommonOptions ms_opts;
  std::size_t starts = 0;
  std::vector<double> box;
  CLI::App* ms = app.add_subcommand("multistart", "solve from uniform random starts");
  ms_opts.attach(ms, true);
  CLI::Option* o_starts = ms->add_option("--starts", starts, "number of starts")
                              ->check(CLI::PositiveNumber);
  CLI::Option* o_box = ms->add_option("--box", box, "sampling box LO HI")->expected(2);

  CommonOptions boost_opts;
  std::string portfolio;
  std::size_t kappa = 0;
  CLI::App* boost = app.add_subcommand("boost", "cardinality homotopy for portfolio problems");
  boost_opts.attach(boost, false);
  boost->add_option("--portfolio", portfolio, "portfolio file or synth:N:K")->required();
  CLI::Option* o_kappa = boost->add_option("--kappa", kappa, "cardinality bound override")
                             ->check(CLI::PositiveNumber);

  std::string set_spec;
  std::string point;
  CLI::App* project = app.add_subcommand("project", "project a point onto a structured set");
  project->add_option("--set", set_spec, "set specification")->required();
  project->add_option("--point", point, "comma-separated coordinates")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_opts, start, out);
    if (ms->parsed()) return cmd_multistart(ms_opts, o_starts, starts, o_box, box, out);
    if (boost->parsed()) return cmd_boost(boost_opts, portfolio, o_kappa, kappa, out);
    if (project->parsed()) return cmd_project(set_spec, point, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace geoalm::cli
