#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "geoalm/alm.hpp"
#include "geoalm/problem.hpp"

namespace geoalm {

struct MultistartConfig {
  std::size_t starts = 100;
  double lo = -10.0;
  double hi = 10.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;  ///< 0: GEOALM_THREADS, else hardware concurrency
  double cluster_tol = 1e-3;
};

struct StartOutcome {
  std::size_t index = 0;
  Point start;  ///< raw uniform draw, before projection onto D
  SolveResult result;
  std::size_t cluster = 0;  ///< index into MultistartReport::clusters
};

struct Cluster {
  Point representative;  ///< first limit assigned to the cluster
  std::size_t count = 0;
  double f = 0.0;        ///< objective at the representative
  std::optional<std::size_t> reference;  ///< index into ProblemSpec::reference_points
};

struct MultistartReport {
  std::vector<StartOutcome> runs;  ///< ordered by start index
  std::vector<Cluster> clusters;   ///< in order of first appearance
};

/// Uniform point in [lo, hi]^dim drawn from a stream seeded by (seed, index).
Point random_start(const Shape& shape, double lo, double hi, std::uint64_t seed,
                   std::size_t index);

/// Worker count: `requested` if nonzero, else GEOALM_THREADS, else hardware
/// concurrency (at least 1).
unsigned resolve_thread_count(unsigned requested);

/// Greedy clustering in the max-norm: a point joins the first cluster whose
/// representative is within `tol`, else opens a new one. `assignment`, if
/// given, receives the cluster index of every limit.
std::vector<Cluster> cluster_limits(const ProblemSpec& p, const std::vector<Point>& limits,
                                    double tol, std::vector<std::size_t>* assignment = nullptr);

/// Index of the first reference point within `tol` of w in the max-norm.
std::optional<std::size_t> match_reference(const ProblemSpec& p, const Point& w, double tol);

/// Runs alm_solve from `cfg.starts` uniform starts in parallel. Results do not
/// depend on the thread count.
MultistartReport multistart(const ProblemSpec& p, const MultistartConfig& cfg,
                            const AlmConfig& alm);

}  // namespace geoalm
