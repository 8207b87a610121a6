#include "geoalm/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "geoalm/symmetric_eigen.hpp"

namespace geoalm {

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (Edge e : edges) {
    if (e.i == e.j) throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(e.i));
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 1 || e.j > n) {
      throw std::invalid_argument("Graph: edge (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ") outside 1.." + std::to_string(n));
    }
    if (!std::isfinite(e.weight)) throw std::invalid_argument("Graph: non-finite edge weight");
    if (!seen.emplace(e.i, e.j).second) {
      throw std::invalid_argument("Graph: duplicate edge (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ")");
    }
    edges_.push_back(e);
  }
}

std::vector<double> Graph::laplacian() const {
  std::vector<double> L(n_ * n_, 0.0);
  for (const Edge& e : edges_) {
    const std::size_t a = e.i - 1;
    const std::size_t b = e.j - 1;
    L[a * n_ + b] -= e.weight;
    L[b * n_ + a] -= e.weight;
    L[a * n_ + a] += e.weight;
    L[b * n_ + b] += e.weight;
  }
  return L;
}

double Graph::cut_weight(const std::vector<std::size_t>& side) const {
  std::vector<bool> in(n_ + 1, false);
  for (std::size_t v : side) {
    if (v < 1 || v > n_) throw std::invalid_argument("cut_weight: vertex out of range");
    in[v] = true;
  }
  double total = 0.0;
  for (const Edge& e : edges_) {
    if (in[e.i] != in[e.j]) total += e.weight;
  }
  return total;
}

Graph fig4_graph() {
  return Graph(5, {{1, 2, 2.0}, {2, 3, 3.0}, {3, 4, 1.0}, {1, 5, 1.0},
                   {2, 5, 1.0}, {1, 4, 2.0}, {3, 5, 3.0}});
}

// ---------------------------------------------------------------------------
// Portfolio data

double PortfolioData::validate() const {
  if (n < 2) throw std::invalid_argument("PortfolioData: need n >= 2");
  if (kappa < 1 || kappa >= n) {
    throw std::invalid_argument("PortfolioData: kappa must lie in [1, n-1], got " +
                                std::to_string(kappa));
  }
  if (mu.size() != n || upper.size() != n || Q.size() != n * n) {
    throw std::invalid_argument("PortfolioData: dimension mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(upper[i] >= 0.0)) throw std::invalid_argument("PortfolioData: negative upper bound");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(Q[i * n + j] - Q[j * n + i]) > 1e-8) {
        throw std::invalid_argument("PortfolioData: Q not symmetric at (" + std::to_string(i + 1) +
                                    "," + std::to_string(j + 1) + ")");
      }
    }
  }
  return jacobi_eigen(Q, n).values.back();
}

PortfolioData synthetic_portfolio(std::size_t n, std::size_t kappa, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 0.1);

  std::vector<double> M(n * n);
  for (double& m : M) m = normal(rng);

  PortfolioData d;
  d.n = n;
  d.kappa = kappa;
  d.Q.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += M[r * n + i] * M[r * n + j];
      s /= static_cast<double>(n);
      if (i == j) s += 1e-3;
      d.Q[i * n + j] = s;
      d.Q[j * n + i] = s;
    }
  d.mu.resize(n);
  for (double& m : d.mu) m = uniform(rng);
  d.min_return = 0.5 * std::accumulate(d.mu.begin(), d.mu.end(), 0.0) / static_cast<double>(n);
  d.upper.assign(n, 1.0);
  return d;
}

// ---------------------------------------------------------------------------
// Problem builders

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> matvec(const std::vector<double>& A, std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += A[i * n + j] * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace

ProblemSpec build_scholtes() {
  ProblemSpec p;
  p.name = "scholtes";
  p.w_shape = Shape::vector(2);
  p.dim_y = 1;
  p.f = [](const Point& w) {
    return 0.5 * (w[0] - 1.0) * (w[0] - 1.0) + 0.5 * (w[1] - 1.0) * (w[1] - 1.0);
  };
  p.grad_f = [](const Point& w) { return Point::vector({w[0] - 1.0, w[1] - 1.0}); };
  p.G = [](const Point& w) { return Point::vector({w[0] + w[1] - 2.0}); };
  p.G_adjoint = [](const Point&, const Point& l) { return Point::vector({l[0], l[0]}); };
  p.C = ConvexSet::orthant_product(1, 0);
  p.D = StructuredSet::complementarity(1);
  p.default_start = Point::zeros(2);
  p.reference_points = {Point::vector({1.0, 0.0}), Point::vector({0.0, 1.0})};
  return p;
}

std::vector<Point> cardinality_reference_points() {
  return {
      Point::vector({4.0 / 3, 1.0 / 3, 0, 0, 0}),  Point::vector({1, 0, 1, 0, 0}),
      Point::vector({-2, 0, 0, 7, 0}),             Point::vector({1.0 / 3, 0, 0, 0, 7.0 / 3}),
      Point::vector({0, 1.0 / 3, 4.0 / 3, 0, 0}),  Point::vector({0, -8.0 / 3, 0, 22.0 / 3, 0}),
      Point::vector({0, -1.0 / 3, 0, 0, 8.0 / 3}), Point::vector({0, 0, -2, 7, 0}),
      Point::vector({0, 0, 1.0 / 3, 0, 7.0 / 3}),  Point::vector({0, 0, 0, 19.0 / 3, -2.0 / 3}),
  };
}

ProblemSpec build_cardinality_example(bool w4_nonpositive) {
  static constexpr double c[5] = {-3.0, -2.0, -3.0, -12.0, -5.0};
  ProblemSpec p;
  p.name = w4_nonpositive ? "cardinality-w4" : "cardinality";
  p.w_shape = Shape::vector(5);
  p.dim_y = 1;
  // Q = E + I, so Qw = sum(w) e + w.
  p.f = [](const Point& w) {
    double sum = 0.0, sq = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      sum += w[i];
      sq += w[i] * w[i];
      lin += c[i] * w[i];
    }
    return 0.5 * (sum * sum + sq) + lin;
  };
  p.grad_f = [](const Point& w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) sum += w[i];
    std::vector<double> g(5);
    for (std::size_t i = 0; i < 5; ++i) g[i] = sum + w[i] + c[i];
    return Point::vector(std::move(g));
  };
  p.G = [](const Point& w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) sum += w[i];
    return Point::vector({sum - 8.0});
  };
  p.G_adjoint = [](const Point&, const Point& l) {
    return Point::vector(std::vector<double>(5, l[0]));
  };
  p.C = ConvexSet::orthant_product(1, 0);
  std::vector<double> hi(5, kInfinity);
  if (w4_nonpositive) hi[3] = 0.0;
  p.D = StructuredSet::sparse_box(2, std::vector<double>(5, -kInfinity), std::move(hi));
  p.default_start = Point::zeros(5);
  p.reference_points = cardinality_reference_points();
  return p;
}

std::vector<double> obstacle_matrix(std::size_t n) {
  std::vector<double> A(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    A[i * n + i] = 2.0;
    if (i + 1 < n) {
      A[i * n + i + 1] = -1.0;
      A[(i + 1) * n + i] = -1.0;
    }
  }
  return A;
}

ProblemSpec build_obstacle(std::size_t n) {
  if (n < 2) throw std::invalid_argument("build_obstacle: need n >= 2");
  // Tridiagonal products only touch neighbours.
  auto apply_A = [n](std::span<const double> v, std::size_t offset) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 2.0 * v[offset + i];
      if (i > 0) s -= v[offset + i - 1];
      if (i + 1 < n) s -= v[offset + i + 1];
      out[i] = s;
    }
    return out;
  };

  ProblemSpec p;
  p.name = "obstacle:" + std::to_string(n);
  p.w_shape = Shape::vector(3 * n);
  p.dim_y = n;
  p.f = [n](const Point& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = w[i];
      const double y = w[n + i];
      s += 0.5 * x * x - y + 0.5 * y * y;
    }
    return s;
  };
  p.grad_f = [n](const Point& w) {
    std::vector<double> g(3 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = w[i];
      g[n + i] = w[n + i] - 1.0;
    }
    return Point::vector(std::move(g));
  };
  p.G = [n, apply_A](const Point& w) {
    std::vector<double> Ay = apply_A(w.values(), n);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = -Ay[i] - w[i] + w[2 * n + i];
    return Point::vector(std::move(g));
  };
  p.G_adjoint = [n, apply_A](const Point&, const Point& l) {
    std::vector<double> Al = apply_A(l.values(), 0);
    std::vector<double> g(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = -l[i];
      g[n + i] = -Al[i];
      g[2 * n + i] = l[i];
    }
    return Point::vector(std::move(g));
  };
  p.C = ConvexSet::orthant_product(0, n);
  p.D = StructuredSet::product({StructuredSet::box(std::vector<double>(n, 0.0),
                                                   std::vector<double>(n, kInfinity)),
                                StructuredSet::complementarity(n)});
  p.default_start = Point::vector(std::vector<double>(3 * n, 1.0));
  p.reference_points = {Point::zeros(3 * n)};
  return p;
}

namespace {

ProblemSpec portfolio_common(const PortfolioData& d) {
  const std::size_t n = d.n;
  ProblemSpec p;
  p.w_shape = Shape::vector(n);
  p.dim_y = 2;
  p.f = [Q = d.Q](const Point& w) { return 0.5 * dot(w.values(), matvec(Q, w.values())); };
  p.grad_f = [Q = d.Q](const Point& w) { return Point::vector(matvec(Q, w.values())); };
  p.G = [mu = d.mu, r = d.min_return](const Point& w) {
    double sum = 0.0;
    for (double v : w.values()) sum += v;
    return Point::vector({r - dot(mu, w.values()), sum - 1.0});
  };
  p.G_adjoint = [mu = d.mu](const Point&, const Point& l) {
    std::vector<double> g(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) g[i] = -l[0] * mu[i] + l[1];
    return Point::vector(std::move(g));
  };
  p.C = ConvexSet::orthant_product(1, 1);
  p.default_start = Point::zeros(n);
  return p;
}

}  // namespace

ProblemSpec build_portfolio(const PortfolioData& d) {
  d.validate();
  ProblemSpec p = portfolio_common(d);
  p.name = "portfolio";
  p.D = StructuredSet::sparse_box(d.kappa, std::vector<double>(d.n, 0.0), d.upper);
  return p;
}

ProblemSpec build_portfolio_relaxed(const PortfolioData& d) {
  d.validate();
  ProblemSpec p = portfolio_common(d);
  p.name = "portfolio-relaxed";
  p.D = StructuredSet::box(std::vector<double>(d.n, 0.0), d.upper);
  return p;
}

std::vector<std::size_t> boost_schedule(std::size_t n, std::size_t kappa) {
  if (kappa < 1 || kappa >= n) throw std::invalid_argument("boost_schedule: need 1 <= kappa < n");
  std::vector<std::size_t> levels;
  for (std::size_t step = 10; step < n && n - step >= kappa; step += 10) levels.push_back(n - step);
  if (levels.empty() || levels.back() != kappa) levels.push_back(kappa);
  return levels;
}

std::vector<BoostStage> boosted_portfolio_stages(const PortfolioData& d, const AlmConfig& cfg) {
  std::vector<BoostStage> stages;
  const ProblemSpec relaxed = build_portfolio_relaxed(d);
  stages.push_back({0, alm_solve(relaxed, relaxed.default_start, cfg)});
  for (std::size_t level : boost_schedule(d.n, d.kappa)) {
    PortfolioData stage_data = d;
    stage_data.kappa = level;
    const ProblemSpec p = build_portfolio(stage_data);
    // alm_solve projects the warm start onto the new D.
    stages.push_back({level, alm_solve(p, stages.back().result.w, cfg)});
  }
  return stages;
}

SolveResult boosted_portfolio_solve(const PortfolioData& d, const AlmConfig& cfg) {
  return boosted_portfolio_stages(d, cfg).back().result;
}

namespace {

ProblemSpec maxcut_common(const Graph& g) {
  const std::size_t n = g.n();
  if (n == 0) throw std::invalid_argument("build_maxcut: empty vertex set");
  ProblemSpec p;
  p.w_shape = Shape::sym_matrix(n);
  p.dim_y = n;
  const Point L = Point::sym_matrix(n, g.laplacian());
  p.f = [L](const Point& W) { return -0.25 * inner(L, W); };
  p.grad_f = [L](const Point&) { return -0.25 * L; };
  p.G = [n](const Point& W) {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = W[i * n + i];
    return Point::vector(std::move(d));
  };
  p.G_adjoint = [n](const Point&, const Point& l) {
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = l[i];
    return Point::sym_matrix(n, std::move(m));
  };
  p.C = ConvexSet::fixed_point(std::vector<double>(n, 1.0));
  p.default_start = Point::zeros(Shape::sym_matrix(n));
  return p;
}

}  // namespace

ProblemSpec build_maxcut(const Graph& g) {
  ProblemSpec p = maxcut_common(g);
  p.name = "maxcut";
  p.D = StructuredSet::psd_low_rank(g.n(), 1);
  return p;
}

ProblemSpec build_maxcut_relaxation(const Graph& g) {
  ProblemSpec p = maxcut_common(g);
  p.name = "maxcut-sdp";
  p.D = StructuredSet::psd_low_rank(g.n(), g.n());
  return p;
}

Cut cut_from_rank1(const Graph& g, const Point& W) {
  if (!W.is_matrix() || W.shape().n != g.n()) {
    throw std::invalid_argument("cut_from_rank1: need a " + std::to_string(g.n()) + "x" +
                                std::to_string(g.n()) + " symmetric matrix");
  }
  const SymmetricEigen eig = jacobi_eigen(W.values(), g.n());
  const std::size_t rank = count_above_rank_threshold(eig.values);
  const double scale = std::max(1.0, std::abs(eig.values.front()));
  if (rank != 1 || eig.values.back() < -kRankThreshold * scale) {
    throw std::invalid_argument("cut_from_rank1: matrix is not numerically rank-1 PSD (rank " +
                                std::to_string(rank) + ")");
  }
  auto v = eig.vector(0);
  // Orient so that the first non-negligible component is positive.
  double sign = 1.0;
  for (double x : v) {
    if (std::abs(x) > 1e-12) {
      sign = x > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  Cut cut;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (sign * v[i] > 0.0) cut.side.push_back(i + 1);
  }
  cut.weight = g.cut_weight(cut.side);
  return cut;
}

}  // namespace geoalm
