#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "geoalm/space.hpp"

namespace testing {

using geoalm::Point;

/// Seeded generator for hand-rolled property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  std::vector<double> vec(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }
  Point point(std::size_t n, double lo = -5.0, double hi = 5.0) { return Point::vector(vec(n, lo, hi)); }
  Point sym(std::size_t n, double lo = -5.0, double hi = 5.0) {
    return Point::sym_matrix(n, vec(n * n, lo, hi));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double sq(double x) { return x * x; }

inline double dist(const Point& a, const Point& b) { return geoalm::norm(a - b); }

/// Smallest Euclidean distance from w to {||x||_0 <= kappa, lo <= x <= hi},
/// by enumerating every support of size <= kappa.
inline double brute_sparse_box_distance(const std::vector<double>& w, std::size_t kappa,
                                        const std::vector<double>& lo,
                                        const std::vector<double>& hi) {
  const std::size_t n = w.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > kappa) continue;
    double d2 = 0.0;
    bool feasible = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        d2 += sq(std::clamp(w[i], lo[i], hi[i]) - w[i]);
      } else if (lo[i] > 0.0 || hi[i] < 0.0) {
        feasible = false;
        break;
      } else {
        d2 += sq(w[i]);
      }
    }
    if (feasible) best = std::min(best, d2);
  }
  return std::sqrt(best);
}

/// Distance from (y, z) to {(s, 0)} u {(0, t)} with s, t in their intervals,
/// taking the smaller of the two branch distances.
inline double two_branch_distance(double y, double z, double s_lo, double s_hi, double t_lo,
                                  double t_hi) {
  const double ds = sq(std::clamp(y, s_lo, s_hi) - y) + sq(z);
  const double dt = sq(y) + sq(std::clamp(z, t_lo, t_hi) - z);
  return std::sqrt(std::min(ds, dt));
}

/// Same distance from a dense grid over both segments (bounds must be finite).
inline double grid_branch_distance(double y, double z, double s_lo, double s_hi, double t_lo,
                                   double t_hi, int points = 200001) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < points; ++k) {
    const double a = static_cast<double>(k) / (points - 1);
    const double s = s_lo + a * (s_hi - s_lo);
    const double t = t_lo + a * (t_hi - t_lo);
    best = std::min(best, sq(s - y) + sq(z));
    best = std::min(best, sq(y) + sq(t - z));
  }
  return std::sqrt(best);
}

/// max over unit v of v^T W v, by an angle grid refined with a shrinking
/// pattern search. W is 2x2 or 3x3, row-major.
inline double max_quadratic_form(const std::vector<double>& W, std::size_t n) {
  auto q = [&](const std::vector<double>& ang) {
    double v[3];
    if (n == 2) {
      v[0] = std::cos(ang[0]);
      v[1] = std::sin(ang[0]);
    } else {
      v[0] = std::sin(ang[0]) * std::cos(ang[1]);
      v[1] = std::sin(ang[0]) * std::sin(ang[1]);
      v[2] = std::cos(ang[0]);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += v[i] * W[i * n + j] * v[j];
    return s;
  };
  const std::size_t dims = n == 2 ? 1 : 2;
  const int grid = n == 2 ? 3600 : 360;
  const double pi = std::acos(-1.0);
  std::vector<double> best_ang(dims, 0.0);
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < (dims == 2 ? 2 * grid : 1); ++b) {
      std::vector<double> ang{pi * a / grid};
      if (dims == 2) ang.push_back(pi * b / grid);
      const double val = q(ang);
      if (val > best) {
        best = val;
        best_ang = ang;
      }
    }
  }
  for (double step = pi / grid; step > 1e-15; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t d = 0; d < dims; ++d) {
        for (double sgn : {-1.0, 1.0}) {
          std::vector<double> trial = best_ang;
          trial[d] += sgn * step;
          const double val = q(trial);
          if (val > best) {
            best = val;
            best_ang = trial;
            improved = true;
          }
        }
      }
    }
  }
  return best;
}

/// Distance from symmetric W to the PSD matrices of rank <= 1:
/// min over unit v, t >= 0 of ||W - t v v^T||_F = sqrt(||W||^2 - max(0, v^T W v)^2).
inline double psd_rank1_grid_distance(const std::vector<double>& W, std::size_t n) {
  double fro2 = 0.0;
  for (double x : W) fro2 += x * x;
  const double qmax = std::max(0.0, max_quadratic_form(W, n));
  return std::sqrt(std::max(0.0, fro2 - qmax * qmax));
}

/// Nearest rank-1 matrix to a 2x2 matrix A from the closed-form
/// eigendecomposition of A^T A: A v v^T with v the leading eigenvector.
inline std::vector<double> rank1_2x2_closed_form(const std::vector<double>& A) {
  const double a = A[0] * A[0] + A[2] * A[2];
  const double b = A[0] * A[1] + A[2] * A[3];
  const double c = A[1] * A[1] + A[3] * A[3];
  const double lambda = 0.5 * (a + c) + std::sqrt(0.25 * sq(a - c) + b * b);
  double v0 = b;
  double v1 = lambda - a;
  if (std::abs(v0) + std::abs(v1) < 1e-300) {
    v0 = lambda - c;
    v1 = b;
  }
  if (std::abs(v0) + std::abs(v1) < 1e-300) {
    v0 = 1.0;
    v1 = 0.0;
  }
  const double len = std::hypot(v0, v1);
  v0 /= len;
  v1 /= len;
  const double av0 = A[0] * v0 + A[1] * v1;
  const double av1 = A[2] * v0 + A[3] * v1;
  return {av0 * v0, av0 * v1, av1 * v0, av1 * v1};
}

/// Central finite-difference gradient of a scalar function of a Point.
inline Point fd_gradient(const std::function<double(const Point&)>& f, const Point& w,
                         double h = 1e-6) {
  std::vector<double> g(w.size());
  std::vector<double> base = w.to_vector();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(base[i]));
    std::vector<double> plus = base;
    std::vector<double> minus = base;
    plus[i] += step;
    minus[i] -= step;
    // A matrix coordinate and its mirror move together; halve to get the
    // derivative along one stored entry of the symmetric pair.
    if (w.is_matrix()) {
      const std::size_t n = w.shape().n;
      const std::size_t r = i / n;
      const std::size_t c = i % n;
      if (r != c) {
        plus[c * n + r] += step;
        minus[c * n + r] -= step;
      }
      g[i] = (f(w.with_values(plus)) - f(w.with_values(minus))) / (2.0 * step);
      if (r != c) g[i] *= 0.5;
    } else {
      g[i] = (f(w.with_values(plus)) - f(w.with_values(minus))) / (2.0 * step);
    }
  }
  return w.with_values(std::move(g));
}

/// ||a - b||_inf / max(1, ||b||_inf).
inline double rel_error(const Point& a, const Point& b) {
  return geoalm::dist_inf(a, b) / std::max(1.0, geoalm::norm_inf(b));
}

}  // namespace testing
