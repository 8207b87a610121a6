#include <doctest.h>

#include <cstdlib>

#include "geoalm/io.hpp"
#include "geoalm/multistart.hpp"
#include "support.hpp"

using namespace geoalm;

TEST_SUITE("multistart") {

TEST_CASE("random starts are seeded per index and lie in the box") {
  const Shape shape = Shape::vector(5);
  for (std::size_t i = 0; i < 200; ++i) {
    const Point w = random_start(shape, -3, 2, 17, i);
    for (double x : w.values()) {
      CHECK(x >= -3.0);
      CHECK(x <= 2.0);
    }
    CHECK(w == random_start(shape, -3, 2, 17, i));
  }
  CHECK(random_start(shape, -3, 2, 17, 0) != random_start(shape, -3, 2, 17, 1));
  CHECK(random_start(shape, -3, 2, 17, 0) != random_start(shape, -3, 2, 18, 0));
  const Point m = random_start(Shape::sym_matrix(3), -1, 1, 5, 2);
  CHECK(m.is_matrix());
  CHECK_THROWS_AS(random_start(shape, 1, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(3) == 3);
  ::setenv("GEOALM_THREADS", "2", 1);
  CHECK(resolve_thread_count(0) == 2);
  ::setenv("GEOALM_THREADS", "junk", 1);
  CHECK(resolve_thread_count(0) >= 1);
  ::unsetenv("GEOALM_THREADS");
  CHECK(resolve_thread_count(0) >= 1);
}

TEST_CASE("greedy clustering in the max-norm") {
  const ProblemSpec p = build_scholtes();
  const std::vector<Point> limits{Point::vector({1, 0}), Point::vector({0, 1}),
                                  Point::vector({1 + 5e-4, 0}), Point::vector({0.5, 0}),
                                  Point::vector({1 - 9e-4, 2e-4})};
  std::vector<std::size_t> assignment;
  const std::vector<Cluster> c = cluster_limits(p, limits, 1e-3, &assignment);
  REQUIRE(c.size() == 3);
  CHECK(assignment == std::vector<std::size_t>{0, 1, 0, 2, 0});
  CHECK(c[0].count == 3);
  CHECK(c[0].reference == std::optional<std::size_t>(0));
  CHECK(c[1].reference == std::optional<std::size_t>(1));
  CHECK_FALSE(c[2].reference.has_value());
  CHECK(c[2].f == p.f(Point::vector({0.5, 0})));
  CHECK(match_reference(p, Point::vector({0, 1 + 1e-3}), 1e-3) == std::optional<std::size_t>(1));
  CHECK_FALSE(match_reference(p, Point::vector({0, 1 + 2e-3}), 1e-3).has_value());
}

TEST_CASE("cluster counts sum to the number of runs and every run is near its representative") {
  testing::Gen gen(81);
  const ProblemSpec p = build_cardinality_example();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> limits;
    const std::size_t m = gen.index(1, 30);
    for (std::size_t i = 0; i < m; ++i) {
      const Point& ref = p.reference_points[gen.index(0, 9)];
      limits.push_back(ref + gen.point(5, -1e-4, 1e-4));
    }
    std::vector<std::size_t> assignment;
    const auto clusters = cluster_limits(p, limits, 1e-3, &assignment);
    std::size_t total = 0;
    for (const Cluster& c : clusters) total += c.count;
    CHECK(total == m);
    for (std::size_t i = 0; i < m; ++i)
      CHECK(dist_inf(limits[i], clusters[assignment[i]].representative) <= 1e-3);
    for (const Cluster& c : clusters) CHECK(c.reference.has_value());
  }
}

TEST_CASE("results do not depend on the thread count") {
  const ProblemSpec p = build_cardinality_example(true);
  MultistartConfig cfg;
  cfg.starts = 24;
  cfg.seed = 9;
  cfg.threads = 1;
  const MultistartReport one = multistart(p, cfg, AlmConfig{});
  cfg.threads = 4;
  const MultistartReport four = multistart(p, cfg, AlmConfig{});
  REQUIRE(one.runs.size() == 24);
  REQUIRE(four.runs.size() == 24);
  for (std::size_t i = 0; i < 24; ++i) {
    CHECK(one.runs[i].index == i);
    CHECK(one.runs[i].start == random_start(p.w_shape, -10, 10, 9, i));
    CHECK(one.runs[i].result.w == four.runs[i].result.w);
    CHECK(one.runs[i].cluster == four.runs[i].cluster);
  }
  CHECK(write_multistart_csv(p, one) == write_multistart_csv(p, four));
  CHECK(write_cluster_report(p, one) == write_cluster_report(p, four));
}

TEST_CASE("every Scholtes start reaches a minimizer") {
  const ProblemSpec p = build_scholtes();
  MultistartConfig cfg;
  cfg.starts = 50;
  cfg.seed = 3;
  const MultistartReport r = multistart(p, cfg, AlmConfig{});
  for (const StartOutcome& run : r.runs) {
    CHECK(run.result.status == AlmStatus::am_stationary);
    CHECK(match_reference(p, run.result.w, 1e-3).has_value());
  }
  for (const Cluster& c : r.clusters) CHECK(c.reference.has_value());
}

TEST_CASE("errors inside workers propagate") {
  ProblemSpec p = build_scholtes();
  p.f = [](const Point&) -> double { throw std::runtime_error("boom"); };
  MultistartConfig cfg;
  cfg.starts = 8;
  cfg.threads = 2;
  CHECK_THROWS_AS(multistart(p, cfg, AlmConfig{}), std::runtime_error);
}

}  // TEST_SUITE
