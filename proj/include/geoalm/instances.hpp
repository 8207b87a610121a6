#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "geoalm/alm.hpp"
#include "geoalm/problem.hpp"

namespace geoalm {

struct Edge {
  std::size_t i = 0;  ///< 1-based, i < j
  std::size_t j = 0;
  double weight = 0.0;
};

/// Undirected weighted graph. Edges are normalized to i < j; self-loops and
/// duplicates are rejected.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// L = diag(A e) - A, dense row-major.
  std::vector<double> laplacian() const;
  /// Total weight of edges with exactly one endpoint in `side` (1-based vertices).
  double cut_weight(const std::vector<std::size_t>& side) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

/// The five-vertex example graph with its seven nonzero edges.
Graph fig4_graph();

struct PortfolioData {
  std::size_t n = 0;
  std::size_t kappa = 1;
  double min_return = 0.0;      ///< lower bound on mu^T w
  std::vector<double> mu;
  std::vector<double> upper;
  std::vector<double> Q;        ///< n x n covariance, row-major

  /// Throws on dimension errors, asymmetry beyond 1e-8, negative bounds or
  /// kappa outside [1, n-1]. Returns the smallest eigenvalue of Q.
  double validate() const;
};

/// Seeded synthetic instance: Q = M^T M / n + 1e-3 I (M standard normal),
/// mu ~ U[0, 0.1], min_return = mean(mu) / 2, upper = e.
PortfolioData synthetic_portfolio(std::size_t n, std::size_t kappa, std::uint64_t seed);

/// min 1/2 (y-1)^2 + 1/2 (z-1)^2 s.t. y + z - 2 <= 0, (y, z) complementary.
ProblemSpec build_scholtes();

/// min 1/2 w^T (E+I) w + c^T w s.t. e^T w <= 8, ||w||_0 <= 2 on R^5.
/// With `w4_nonpositive`, adds the bound w_4 <= 0.
ProblemSpec build_cardinality_example(bool w4_nonpositive = false);

/// The ten stationary points of the cardinality example (index 0 is w^1).
std::vector<Point> cardinality_reference_points();

/// Tridiagonal second-difference matrix (2 on the diagonal, -1 off it).
std::vector<double> obstacle_matrix(std::size_t n);

/// Discretized obstacle control problem in w = (x, y, z) in R^{3n}.
ProblemSpec build_obstacle(std::size_t n);

/// Cardinality-constrained portfolio problem; D = sparse box [0, u].
ProblemSpec build_portfolio(const PortfolioData& d);

/// Portfolio problem with the cardinality constraint dropped (D = [0, u]).
ProblemSpec build_portfolio_relaxed(const PortfolioData& d);

/// Cardinality levels visited after the convex stage: n-10, n-20, ... while
/// >= kappa, then kappa if it was not hit.
std::vector<std::size_t> boost_schedule(std::size_t n, std::size_t kappa);

struct BoostStage {
  std::size_t level = 0;  ///< 0 for the box-only stage
  SolveResult result;
};

/// Homotopy over decreasing cardinality levels; each stage starts from the
/// projection of the previous solution. Returns every stage in order.
std::vector<BoostStage> boosted_portfolio_stages(const PortfolioData& d, const AlmConfig& cfg);

/// Result of the final stage of boosted_portfolio_stages.
SolveResult boosted_portfolio_solve(const PortfolioData& d, const AlmConfig& cfg);

/// MAXCUT as min -1/4 trace(L W) s.t. diag W = e, W PSD with rank <= 1.
ProblemSpec build_maxcut(const Graph& g);
/// Same without the rank bound.
ProblemSpec build_maxcut_relaxation(const Graph& g);

struct Cut {
  std::vector<std::size_t> side;  ///< 1-based vertices with positive sign
  double weight = 0.0;
};

/// Reads a cut from a numerically rank-1 PSD matrix via the sign pattern of
/// its leading eigenvector (normalized so its first component is >= 0).
Cut cut_from_rank1(const Graph& g, const Point& W);

}  // namespace geoalm
