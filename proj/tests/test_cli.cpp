#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "geoalm/cli.hpp"
#include "geoalm/io.hpp"

using namespace geoalm;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "geoalm");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string fig4 = std::string(GEOALM_DATA_DIR) + "/fig4.txt";

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "geoalm_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit code mapping") {
  CHECK(cli::exit_code(AlmStatus::am_stationary) == 0);
  CHECK(cli::exit_code(AlmStatus::infeasible_stationary) == 2);
  CHECK(cli::exit_code(AlmStatus::iter_cap) == 3);
}

TEST_CASE("usage errors exit with 64") {
  CHECK(invoke({}).code == 64);
  CHECK(invoke({"frobnicate"}).code == 64);
  CHECK(invoke({"solve"}).code == 64);
  CHECK(invoke({"solve", "--problem", "nonsense"}).code == 64);
  CHECK(invoke({"solve", "--problem", "obstacle:1"}).code == 64);
  CHECK(invoke({"solve", "--problem", "maxcut:/nonexistent/graph.txt"}).code == 64);
  CHECK(invoke({"solve", "--problem", "scholtes", "--start", "1,2,3"}).code == 64);
  CHECK(invoke({"project", "--set", "sparse:9", "--point", "1,2"}).code == 64);
  CHECK(invoke({"boost", "--portfolio", "synth:5:5"}).code == 64);
  const Outcome bad = invoke({"solve", "--problem", "nonsense"});
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("solve Scholtes") {
  const Outcome o = invoke({"solve", "--problem", "scholtes"});
  CHECK(o.code == 0);
  CHECK(contains(o.out, "status: am_stationary"));
  CHECK(contains(o.out, "w: 1, 0"));
  const Outcome s = invoke({"solve", "--problem", "scholtes", "--start", "0,7"});
  CHECK(s.code == 0);
  CHECK(contains(s.out, "f: 0.5\n"));
}

TEST_CASE("solve MAXCUT on the example graph") {
  const Outcome o = invoke({"solve", "--problem", "maxcut:" + fig4});
  CHECK(o.code == 0);
  CHECK(contains(o.out, "rank: 1"));
  CHECK(contains(o.out, "cut: {1, 3} weight 12"));
  const Outcome r = invoke({"solve", "--problem", "maxcut-sdp:" + fig4});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "relaxation bound:"));
}

TEST_CASE("iteration cap maps to exit 3") {
  const Outcome o = invoke({"solve", "--problem", "obstacle:4", "--max-outer", "1"});
  CHECK(o.code == 3);
  CHECK(contains(o.out, "iter_cap"));
}

TEST_CASE("table and CSV output") {
  const Outcome o = invoke({"solve", "--problem", "obstacle:3", "--table", "--csv", "-"});
  CHECK(o.code == 0);
  CHECK(contains(o.out, "j_cum"));
  CHECK(contains(o.out, "k,j,j_cum,f_ev,f,V,t,rho\n"));

  const auto path = scratch("obstacle.csv");
  std::filesystem::remove(path);
  CHECK(invoke({"solve", "--problem", "obstacle:3", "--csv", path.string()}).code == 0);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  const std::vector<IterationRow> rows = parse_csv(text.str());
  CHECK_FALSE(rows.empty());
  CHECK(rows.back().V <= 1e-4);
}

TEST_CASE("identical arguments give byte-identical CSV") {
  const std::vector<std::string> args{"multistart", "--problem", "cardinality-w4", "--starts", "20",
                                      "--seed", "11", "--csv", "-"};
  const Outcome a = invoke(args);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  const Outcome b = invoke(threaded);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(contains(a.out, "start,status,outer,inner,f,V,cluster,w1,w2,w3,w4,w5\n"));
  std::vector<std::string> other = args;
  other[6] = "12";
  CHECK(invoke(other).out != a.out);
}

TEST_CASE("multistart reports clusters") {
  const Outcome o =
      invoke({"multistart", "--problem", "scholtes", "--starts", "30", "--box", "-10", "10"});
  CHECK(o.code == 0);
  CHECK(contains(o.out, "30 starts, 30 am_stationary"));
  CHECK(contains(o.out, "reference point"));
}

TEST_CASE("project") {
  CHECK(invoke({"project", "--set", "sparse:1", "--point", "3,-4,1"}).out == "0,-4,0\n");
  CHECK(invoke({"project", "--set", "box:0:1", "--point", "-1,0.5,2"}).out == "0,0.5,1\n");
  CHECK(invoke({"project", "--set", "complementarity", "--point", "2,1"}).out == "2,0\n");
  CHECK(invoke({"project", "--set", "psd-rank:1", "--point", "1,0,0,-1"}).out == "1,0,0,0\n");
}

TEST_CASE("set spec grammar") {
  CHECK(cli::parse_set_spec("box:0:1", 3).dim() == 3);
  CHECK(cli::parse_set_spec("switching", 4).dim() == 4);
  CHECK(cli::parse_set_spec("box-switching:0:1:0:1", 2).dim() == 2);
  CHECK(cli::parse_set_spec("sparse-box:1:-1:1", 5).dim() == 5);
  CHECK(cli::parse_set_spec("low-rank:2:3:1", 6).dim() == 6);
  CHECK_THROWS(cli::parse_set_spec("low-rank:2:3:1", 5));
  CHECK_THROWS(cli::parse_set_spec("complementarity", 3));
  CHECK_THROWS(cli::parse_set_spec("psd-rank:1", 5));
  CHECK_THROWS(cli::parse_set_spec("wedge", 2));
  CHECK(cli::parse_point_list("1, 2 3,4") == std::vector<double>{1, 2, 3, 4});
  CHECK_THROWS(cli::parse_point_list("1,x"));
}

TEST_CASE("config files drive solve") {
  const auto path = scratch("run.cfg");
  write_text(path, "problem = scholtes\nmax_outer = 5\n");
  const Outcome o = invoke({"solve", "--config", path.string()});
  CHECK(o.code == 0);
  CHECK(contains(o.out, "problem: scholtes"));
  write_text(path, "problem = scholtes\nwat = 5\n");
  const Outcome bad = invoke({"solve", "--config", path.string()});
  CHECK(bad.code == 64);
  CHECK(contains(bad.err, "line 2"));
}

TEST_CASE("portfolio selectors and boost") {
  const auto path = scratch("portfolio.txt");
  write_text(path, format_portfolio(synthetic_portfolio(12, 3, 2)));
  CHECK(invoke({"solve", "--problem", "portfolio:" + path.string()}).code == 0);
  CHECK(invoke({"solve", "--problem", "portfolio:synth:10:2"}).code == 0);
  const Outcome b = invoke({"boost", "--portfolio", path.string(), "--kappa", "2"});
  CHECK(b.code == 0);
  CHECK(contains(b.out, "stage box"));
  CHECK(contains(b.out, "stage kappa=2"));
  CHECK(cli::resolve_portfolio("synth:10:2", 4).Q == synthetic_portfolio(10, 2, 4).Q);
}

}  // TEST_SUITE
