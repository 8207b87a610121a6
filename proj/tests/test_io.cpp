#include <doctest.h>

#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "geoalm/io.hpp"
#include "support.hpp"

using namespace geoalm;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Expects `text` to fail parsing at the given position.
template <class Fn>
void check_error_at(Fn parse, std::string_view text, std::size_t line, std::size_t column) {
  try {
    parse(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
    CHECK(std::string(e.what()).rfind("line " + std::to_string(line), 0) == 0);
  }
}

AlmIteration random_record(testing::Gen& gen, int k) {
  AlmIteration it;
  it.k = k;
  it.inner_iters = static_cast<long>(gen.index(0, 100000));
  it.inner_cum = it.inner_iters + static_cast<long>(gen.index(0, 100000));
  it.function_evals = static_cast<long>(gen.index(0, 1000000));
  it.f = gen.normal() * std::pow(10.0, gen.uniform(-300, 300));
  it.V = std::pow(10.0, gen.uniform(-20, 5));
  it.step = std::pow(10.0, gen.uniform(-10, 10));
  it.rho = std::pow(10.0, gen.uniform(-3, 15));
  return it;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("graph examples") {
  const Graph g = parse_graph("2 1\n1 2 1\n");
  CHECK(g.n() == 2);
  REQUIRE(g.edges().size() == 1);
  CHECK(g.edges()[0].weight == 1.0);

  const Graph fig = parse_graph(slurp(std::string(GEOALM_DATA_DIR) + "/fig4.txt"));
  CHECK(fig.n() == 5);
  CHECK(fig.edges().size() == 7);
  CHECK(fig.cut_weight({1, 3}) == 12.0);

  check_error_at(parse_graph, "2 1\n1 1 3\n", 2, 3);
}

TEST_CASE("graph parse errors carry positions") {
  check_error_at(parse_graph, "", 1, 0);
  check_error_at(parse_graph, "3 1\n1 4 2\n", 2, 3);
  check_error_at(parse_graph, "3 1\n1 x 2\n", 2, 3);
  check_error_at(parse_graph, "3 2\n1 2 2\n", 3, 0);
  check_error_at(parse_graph, "3 1\n1 2 2\n2 3 1\n", 3, 0);
  check_error_at(parse_graph, "3 2\n1 2 2\n2 1 5\n", 3, 1);
  check_error_at(parse_graph, "3 1\n1 2\n", 2, 0);
  check_error_at(parse_graph, "# c\n\n3 1\n  1 2 inf\n", 4, 7);
}

TEST_CASE("graph comments, negative weights and round trip") {
  const Graph g = parse_graph("# header\n4 3 # trailing\n1 2 -1.5\n\n3 2 0.1\n4 1 7\n");
  CHECK(g.edges()[0].weight == -1.5);
  CHECK(g.edges()[1].i == 2);
  CHECK(g.edges()[1].j == 3);
  testing::Gen gen(91);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = gen.index(1, 9);
    std::vector<Edge> edges;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j)
        if (gen.coin()) edges.push_back({i, j, gen.normal() * std::pow(10.0, gen.uniform(-8, 8))});
    const Graph src(n, edges);
    const std::string text = format_graph(src);
    const Graph back = parse_graph(text);
    CHECK(back.n() == n);
    REQUIRE(back.edges().size() == src.edges().size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      CHECK(back.edges()[e].i == src.edges()[e].i);
      CHECK(back.edges()[e].j == src.edges()[e].j);
      CHECK(back.edges()[e].weight == src.edges()[e].weight);
    }
    CHECK(format_graph(back) == text);
  }
}

TEST_CASE("portfolio examples") {
  const std::string minimal = "2 1 0.05\n0.1 0.02\n1 inf\n2 0.5\n0.5 1\n";
  const PortfolioData d = parse_portfolio(minimal);
  CHECK(d.n == 2);
  CHECK(d.kappa == 1);
  CHECK(d.min_return == 0.05);
  CHECK(d.upper[1] == std::numeric_limits<double>::infinity());
  CHECK(d.Q == std::vector<double>{2, 0.5, 0.5, 1});
  const PortfolioData back = parse_portfolio(format_portfolio(d));
  CHECK(back.Q == d.Q);
  CHECK(back.mu == d.mu);
  CHECK(back.upper == d.upper);
  CHECK(back.min_return == d.min_return);

  check_error_at(parse_portfolio, "2 1 0.05\n0.1 0.02\n1 1\n2 0.5\n0.6 1\n", 5, 1);
  check_error_at(parse_portfolio, "2 2 0.05\n0.1 0.02\n1 1\n2 0.5\n0.5 1\n", 1, 3);
  check_error_at(parse_portfolio, "2 1 0.05\n0.1\n1 1\n2 0.5\n0.5 1\n", 2, 0);
  check_error_at(parse_portfolio, "2 1 0.05\n0.1 0.02\n1 -1\n2 0.5\n0.5 1\n", 3, 3);
  check_error_at(parse_portfolio, "2 1 0.05\n0.1 0.02\n1 1\n2 0.5\n", 5, 0);
  check_error_at(parse_portfolio, "1 1 0\n", 1, 1);
}

TEST_CASE("portfolio round trip on synthetic data") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PortfolioData d = synthetic_portfolio(7, 3, seed);
    const std::string text = format_portfolio(d);
    const PortfolioData back = parse_portfolio(text);
    CHECK(back.n == d.n);
    CHECK(back.kappa == d.kappa);
    CHECK(back.min_return == d.min_return);
    CHECK(back.mu == d.mu);
    CHECK(back.upper == d.upper);
    CHECK(back.Q == d.Q);
    CHECK(format_portfolio(back) == text);
  }
}

TEST_CASE("shortest round-trip number formatting") {
  testing::Gen gen(92);
  for (int trial = 0; trial < 1000; ++trial) {
    const double v = gen.normal() * std::pow(10.0, gen.uniform(-300, 300));
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(12.0) == "12");
}

TEST_CASE("iteration table and CSV") {
  CHECK(write_csv({}) == "k,j,j_cum,f_ev,f,V,t,rho\n");
  CHECK(parse_csv(write_csv({})).empty());
  const std::string table = write_iteration_table({});
  CHECK(table.find("j_cum") != std::string::npos);
  CHECK(std::count(table.begin(), table.end(), '\n') == 1);

  const ProblemSpec p = build_scholtes();
  AlmConfig cfg;
  cfg.max_outer = 1;
  const SolveResult one = alm_solve(p, Point::vector({3, 4}), cfg);
  const std::vector<IterationRow> rows = parse_csv(write_csv(one.records));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].j_cum == rows[0].j);
  CHECK(rows[0] == to_row(one.records[0]));
  const std::string t1 = write_iteration_table(one.records);
  CHECK(std::count(t1.begin(), t1.end(), '\n') == 2);
  CHECK(write_csv(one.records).find('\r') == std::string::npos);
}

TEST_CASE("CSV re-parse reproduces records bitwise") {
  testing::Gen gen(93);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<AlmIteration> records;
    const int count = static_cast<int>(gen.index(1, 20));
    for (int k = 1; k <= count; ++k) records.push_back(random_record(gen, k));
    const std::vector<IterationRow> rows = parse_csv(write_csv(records));
    REQUIRE(rows.size() == records.size());
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i] == to_row(records[i]));
  }
  check_error_at(parse_csv, "", 1, 1);
  check_error_at(parse_csv, "k,j\n", 1, 1);
  check_error_at(parse_csv, "k,j,j_cum,f_ev,f,V,t,rho\n1,2,3\n", 2, 0);
}

TEST_CASE("row conversion uses the final step length") {
  AlmIteration it;
  it.k = 3;
  it.inner_iters = 4;
  it.inner_cum = 10;
  it.function_evals = 20;
  it.f = -1.5;
  it.V = 1e-5;
  it.step = 0.25;
  it.rho = 100;
  const IterationRow r = to_row(it);
  CHECK(r == IterationRow{3, 4, 10, 20, -1.5, 1e-5, 0.25, 100});
}

TEST_CASE("multistart CSV and cluster report") {
  const ProblemSpec p = build_scholtes();
  MultistartConfig cfg;
  cfg.starts = 5;
  cfg.seed = 1;
  const MultistartReport r = multistart(p, cfg, AlmConfig{});
  const std::string csv = write_multistart_csv(p, r);
  CHECK(csv.rfind("start,status,outer,inner,f,V,cluster,w1,w2\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  const std::string report = write_cluster_report(p, r);
  CHECK_FALSE(report.empty());
}

TEST_CASE("run config in key=value form") {
  const RunConfig c = parse_run_config(
      "# run\nproblem = cardinality\nstarts = 1000\nseed=7\nbox_lo = -5\nbox_hi = 5\n"
      "threads = 2\nbeta = 20\neta = 0.5\nouter_tol = 1e-6\nmax_inner = 100\ncsv = out.csv\n"
      "history = 0\nrho0 = 3\n");
  CHECK(c.problem == "cardinality");
  CHECK(c.starts == 1000);
  CHECK(c.seed == 7);
  CHECK(c.box_lo == -5);
  CHECK(c.box_hi == 5);
  CHECK(c.threads == 2);
  CHECK(c.alm.beta == 20);
  CHECK(c.alm.eta == 0.5);
  CHECK(c.alm.outer_tol == 1e-6);
  CHECK(c.alm.spg.max_outer_iters == 100);
  CHECK(c.alm.spg.history == 0);
  CHECK(c.csv_path == std::optional<std::string>("out.csv"));
  CHECK(c.alm.rho0 == std::optional<double>(3.0));

  const RunConfig defaults = parse_run_config("");
  CHECK(defaults.starts == 100);
  CHECK(defaults.alm.beta == 10.0);
  CHECK(defaults.alm.spg.tau == 2.0);

  check_error_at(parse_run_config, "problem = scholtes\n  bogus = 1\n", 2, 3);
  check_error_at(parse_run_config, "starts = many\n", 1, 10);
  check_error_at(parse_run_config, "starts\n", 1, 1);
  check_error_at(parse_run_config, "starts = 0\n", 1, 10);
}

TEST_CASE("run config in JSON form") {
  const RunConfig c =
      parse_run_config("{\n  \"problem\": \"obstacle:8\",\n  \"seed\": 3,\n  \"tau\": 3.5\n}\n");
  CHECK(c.problem == "obstacle:8");
  CHECK(c.seed == 3);
  CHECK(c.alm.spg.tau == 3.5);
  check_error_at(parse_run_config, "{\n  \"problem\": \"x\",\n  \"nope\": 1\n}", 3, 3);
  CHECK_THROWS_AS(parse_run_config("{\"problem\": [1]}"), ParseError);
  CHECK_THROWS_AS(parse_run_config("{\"problem\": "), ParseError);
}

TEST_CASE("every advertised key is accepted") {
  for (const std::string& key : run_config_keys()) {
    CAPTURE(key);
    const std::string value = key == "problem" || key == "table" || key == "csv" ? "x" : "2";
    CHECK_NOTHROW(parse_run_config(key + " = " + value + "\n"));
  }
}

}  // TEST_SUITE
