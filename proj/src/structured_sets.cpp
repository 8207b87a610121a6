#include "geoalm/structured_sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "geoalm/symmetric_eigen.hpp"

namespace geoalm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double clamp_bound(double v) { return std::clamp(v, -kInfinity, kInfinity); }

void check_bounds(std::vector<double>& lo, std::vector<double>& hi, const char* what) {
  if (lo.size() != hi.size()) throw std::invalid_argument(std::string(what) + ": lo/hi size mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i])) {
      throw std::invalid_argument(std::string(what) + ": NaN bound");
    }
    lo[i] = clamp_bound(lo[i]);
    hi[i] = clamp_bound(hi[i]);
    if (lo[i] > hi[i]) {
      throw std::invalid_argument(std::string(what) + ": lo > hi at component " +
                                  std::to_string(i));
    }
  }
}

void check_size(const Point& w, std::size_t expected, const char* what) {
  if (w.size() != expected) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(expected) +
                                " coordinates, got " + std::to_string(w.size()));
  }
}

// Row-major product of (r x k) and (k x c).
std::vector<double> matmul(std::span<const double> a, std::span<const double> b, std::size_t r,
                           std::size_t k, std::size_t c) {
  std::vector<double> out(r * c, 0.0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = a[i * k + l];
      if (ail == 0.0) continue;
      for (std::size_t j = 0; j < c; ++j) out[i * c + j] += ail * b[l * c + j];
    }
  return out;
}

// Gram matrix of the smaller side: (M^T M) if cols <= rows, else (M M^T).
std::vector<double> small_gram(std::span<const double> m, std::size_t rows, std::size_t cols) {
  const bool right = cols <= rows;
  const std::size_t g = right ? cols : rows;
  std::vector<double> gram(g * g, 0.0);
  for (std::size_t p = 0; p < g; ++p)
    for (std::size_t q = p; q < g; ++q) {
      double s = 0.0;
      if (right) {
        for (std::size_t i = 0; i < rows; ++i) s += m[i * cols + p] * m[i * cols + q];
      } else {
        for (std::size_t j = 0; j < cols; ++j) s += m[p * cols + j] * m[q * cols + j];
      }
      gram[p * g + q] = s;
      gram[q * g + p] = s;
    }
  return gram;
}

Point slice_for(const StructuredSet& part, std::span<const double> values, std::size_t offset) {
  const auto first = values.begin() + static_cast<std::ptrdiff_t>(offset);
  std::vector<double> block(first, first + static_cast<std::ptrdiff_t>(part.dim()));
  const Shape shape = part.shape();
  return shape.kind == ShapeKind::sym_matrix ? Point::sym_matrix(shape.n, std::move(block))
                                             : Point::vector(std::move(block));
}

}  // namespace

// ---------------------------------------------------------------------------
// Factories

StructuredSet StructuredSet::box(std::vector<double> lo, std::vector<double> hi) {
  check_bounds(lo, hi, "box");
  if (lo.empty()) throw std::invalid_argument("box: empty");
  return StructuredSet(BoxSet{std::move(lo), std::move(hi)});
}

StructuredSet StructuredSet::box_switching(std::size_t pairs, double s_lo, double s_hi,
                                           double t_lo, double t_hi) {
  if (pairs == 0) throw std::invalid_argument("box_switching: needs at least one pair");
  s_lo = clamp_bound(s_lo);
  s_hi = clamp_bound(s_hi);
  t_lo = clamp_bound(t_lo);
  t_hi = clamp_bound(t_hi);
  if (!(s_lo <= 0.0 && t_lo <= 0.0 && s_hi > 0.0 && t_hi > 0.0)) {
    throw std::invalid_argument("box_switching: need s_lo, t_lo <= 0 < s_hi, t_hi");
  }
  return StructuredSet(BoxSwitching{pairs, s_lo, s_hi, t_lo, t_hi});
}

StructuredSet StructuredSet::complementarity(std::size_t pairs) {
  return box_switching(pairs, 0.0, kInfinity, 0.0, kInfinity);
}

StructuredSet StructuredSet::switching(std::size_t pairs) {
  return box_switching(pairs, -kInfinity, kInfinity, -kInfinity, kInfinity);
}

StructuredSet StructuredSet::sparse_box(std::size_t kappa, std::vector<double> lo,
                                        std::vector<double> hi) {
  check_bounds(lo, hi, "sparse_box");
  const std::size_t n = lo.size();
  if (n < 2 || kappa < 1 || kappa > n - 1) {
    throw std::invalid_argument("sparse_box: need 1 <= kappa <= n-1 (n=" + std::to_string(n) +
                                ", kappa=" + std::to_string(kappa) + ")");
  }
  std::size_t forced = 0;
  for (std::size_t i = 0; i < n; ++i) forced += (lo[i] > 0.0 || hi[i] < 0.0) ? 1 : 0;
  if (forced > kappa) {
    throw std::invalid_argument("sparse_box: empty set, " + std::to_string(forced) +
                                " components exclude zero but kappa=" + std::to_string(kappa));
  }
  return StructuredSet(SparseBox{kappa, std::move(lo), std::move(hi)});
}

StructuredSet StructuredSet::sparse(std::size_t n, std::size_t kappa) {
  return sparse_box(kappa, std::vector<double>(n, -kInfinity), std::vector<double>(n, kInfinity));
}

StructuredSet StructuredSet::low_rank(std::size_t rows, std::size_t cols, std::size_t kappa) {
  if (rows == 0 || cols == 0 || kappa < 1 || kappa > std::min(rows, cols)) {
    throw std::invalid_argument("low_rank: need 1 <= kappa <= min(rows, cols)");
  }
  return StructuredSet(LowRank{rows, cols, kappa});
}

StructuredSet StructuredSet::psd_low_rank(std::size_t n, std::size_t kappa) {
  if (n == 0 || kappa < 1 || kappa > n) {
    throw std::invalid_argument("psd_low_rank: need 1 <= kappa <= n");
  }
  return StructuredSet(PsdLowRank{n, kappa});
}

StructuredSet StructuredSet::union_of(std::vector<ConvexSet> branches) {
  if (branches.empty()) throw std::invalid_argument("union: empty branch list");
  for (const auto& b : branches) {
    if (b.dim() != branches.front().dim()) {
      throw std::invalid_argument("union: branches of different dimension");
    }
  }
  return StructuredSet(Union{std::move(branches)});
}

StructuredSet StructuredSet::product(std::vector<StructuredSet> parts) {
  if (parts.empty()) throw std::invalid_argument("product: no components");
  return StructuredSet(Product{std::move(parts)});
}

// ---------------------------------------------------------------------------
// Shape

std::size_t StructuredSet::dim() const {
  return std::visit(
      Overloaded{
          [](const BoxSet& s) { return s.lo.size(); },
          [](const BoxSwitching& s) { return 2 * s.pairs; },
          [](const SparseBox& s) { return s.lo.size(); },
          [](const LowRank& s) { return s.rows * s.cols; },
          [](const PsdLowRank& s) { return s.n * s.n; },
          [](const Union& s) { return s.branches.front().dim(); },
          [](const Product& s) {
            std::size_t total = 0;
            for (const auto& p : s.parts) total += p.dim();
            return total;
          },
      },
      set_);
}

Shape StructuredSet::shape() const {
  if (const auto* p = std::get_if<PsdLowRank>(&set_)) return Shape::sym_matrix(p->n);
  return Shape::vector(dim());
}

std::string StructuredSet::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const BoxSet& s) { os << "box(" << s.lo.size() << ")"; },
                 [&](const BoxSwitching& s) {
                   os << "box_switching(" << s.pairs << ", [" << s.s_lo << "," << s.s_hi << "]x["
                      << s.t_lo << "," << s.t_hi << "])";
                 },
                 [&](const SparseBox& s) {
                   os << "sparse_box(n=" << s.lo.size() << ", kappa=" << s.kappa << ")";
                 },
                 [&](const LowRank& s) {
                   os << "low_rank(" << s.rows << "x" << s.cols << ", kappa=" << s.kappa << ")";
                 },
                 [&](const PsdLowRank& s) {
                   os << "psd_low_rank(n=" << s.n << ", kappa=" << s.kappa << ")";
                 },
                 [&](const Union& s) { os << "union(" << s.branches.size() << " branches)"; },
                 [&](const Product& s) {
                   os << "product(";
                   for (std::size_t i = 0; i < s.parts.size(); ++i) {
                     os << (i ? ", " : "") << s.parts[i].describe();
                   }
                   os << ")";
                 },
             },
             set_);
  return os.str();
}

// ---------------------------------------------------------------------------
// Projections

Point project_box(const BoxSet& set, const Point& w) {
  check_size(w, set.lo.size(), "project_box");
  std::vector<double> out = w.to_vector();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], set.lo[i], set.hi[i]);
  return w.with_values(std::move(out));
}

Point project_box_switching(const BoxSwitching& set, const Point& w) {
  check_size(w, 2 * set.pairs, "project_box_switching");
  const std::size_t m = set.pairs;
  std::vector<double> out = w.to_vector();
  for (std::size_t i = 0; i < m; ++i) {
    const double y = w[i];
    const double z = w[m + i];
    const double ys = std::clamp(y, set.s_lo, set.s_hi);
    const double zt = std::clamp(z, set.t_lo, set.t_hi);
    const double phi_s = (ys - y) * (ys - y) + z * z;
    const double phi_t = y * y + (zt - z) * (zt - z);
    if (phi_s <= phi_t) {
      out[i] = ys;
      out[m + i] = 0.0;
    } else {
      out[i] = 0.0;
      out[m + i] = zt;
    }
  }
  return w.with_values(std::move(out));
}

std::vector<double> d_vector(const Point& w, const std::vector<double>& lo,
                             const std::vector<double>& hi) {
  check_size(w, lo.size(), "d_vector");
  std::vector<double> d(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double p = std::clamp(w[i], lo[i], hi[i]);
    d[i] = w[i] * w[i] - (p - w[i]) * (p - w[i]);
  }
  return d;
}

Point project_sparse_box(const SparseBox& set, const Point& w) {
  const std::size_t n = set.lo.size();
  check_size(w, n, "project_sparse_box");
  std::vector<double> out(n, 0.0);

  // Components whose interval excludes zero are always active.
  std::size_t budget = set.kappa;
  std::vector<std::size_t> free;
  free.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (set.lo[i] > 0.0 || set.hi[i] < 0.0) {
      if (budget == 0) {
        throw std::invalid_argument("project_sparse_box: more forced-nonzero components than kappa");
      }
      --budget;
      out[i] = std::clamp(w[i], set.lo[i], set.hi[i]);
    } else {
      free.push_back(i);
    }
  }

  std::vector<double> d(n, 0.0);
  for (std::size_t i : free) {
    const double p = std::clamp(w[i], set.lo[i], set.hi[i]);
    d[i] = w[i] * w[i] - (p - w[i]) * (p - w[i]);
  }
  const std::size_t take = std::min(budget, free.size());
  std::partial_sort(free.begin(), free.begin() + static_cast<std::ptrdiff_t>(take), free.end(),
                    [&](std::size_t a, std::size_t b) { return d[a] > d[b] || (d[a] == d[b] && a < b); });
  for (std::size_t k = 0; k < take; ++k) {
    const std::size_t i = free[k];
    out[i] = std::clamp(w[i], set.lo[i], set.hi[i]);
  }
  return w.with_values(std::move(out));
}

Point project_low_rank(const LowRank& set, const Point& w) {
  const std::size_t rows = set.rows;
  const std::size_t cols = set.cols;
  check_size(w, rows * cols, "project_low_rank");
  const auto m = w.values();
  if (set.kappa >= std::min(rows, cols)) return w;

  // Eckart-Young-Mirsky via the eigenvectors of the smaller Gram matrix:
  // P = M V_k V_k^T (or U_k U_k^T M), the projector onto the leading
  // singular subspace.
  const bool right = cols <= rows;
  const std::size_t g = right ? cols : rows;
  const SymmetricEigen eig = jacobi_eigen(small_gram(m, rows, cols), g);
  std::vector<double> projector(g * g, 0.0);
  for (std::size_t k = 0; k < set.kappa; ++k) {
    const auto v = eig.vector(k);
    for (std::size_t p = 0; p < g; ++p)
      for (std::size_t q = 0; q < g; ++q) projector[p * g + q] += v[p] * v[q];
  }
  std::vector<double> out = right ? matmul(m, projector, rows, cols, cols)
                                  : matmul(projector, m, rows, rows, cols);
  return w.with_values(std::move(out));
}

Point project_psd_low_rank(const PsdLowRank& set, const Point& w) {
  const std::size_t n = set.n;
  check_size(w, n * n, "project_psd_low_rank");
  const SymmetricEigen eig = jacobi_eigen(w.values(), n);
  std::vector<double> out(n * n, 0.0);
  for (std::size_t k = 0; k < set.kappa; ++k) {
    const double lambda = eig.values[k];
    if (lambda <= 0.0) break;
    const auto v = eig.vector(k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += lambda * v[i] * v[j];
  }
  return w.with_values(std::move(out));
}

Point project_union(const Union& set, const Point& w) {
  if (set.branches.empty()) throw std::invalid_argument("project_union: empty branch list");
  Point best = set.branches.front().project(w);
  double best_dist = norm(best - w);
  for (std::size_t b = 1; b < set.branches.size(); ++b) {
    Point candidate = set.branches[b].project(w);
    const double dist = norm(candidate - w);
    if (dist < best_dist) {
      best = std::move(candidate);
      best_dist = dist;
    }
  }
  return best;
}

Point StructuredSet::project(const Point& w) const {
  check_size(w, dim(), "StructuredSet::project");
  return std::visit(
      Overloaded{
          [&](const BoxSet& s) { return project_box(s, w); },
          [&](const BoxSwitching& s) { return project_box_switching(s, w); },
          [&](const SparseBox& s) { return project_sparse_box(s, w); },
          [&](const LowRank& s) { return project_low_rank(s, w); },
          [&](const PsdLowRank& s) { return project_psd_low_rank(s, w); },
          [&](const Union& s) { return project_union(s, w); },
          [&](const Product& s) {
            std::vector<double> out(w.size());
            std::size_t offset = 0;
            const auto values = w.values();
            for (const auto& part : s.parts) {
              const std::size_t len = part.dim();
              const Point sub = slice_for(part, values, offset);
              const Point projected = part.project(sub);
              std::copy(projected.values().begin(), projected.values().end(),
                        out.begin() + static_cast<std::ptrdiff_t>(offset));
              offset += len;
            }
            return w.with_values(std::move(out));
          },
      },
      set_);
}

// ---------------------------------------------------------------------------
// Membership and rank

std::size_t numerical_rank(const Point& w) {
  if (!w.is_matrix()) throw std::invalid_argument("numerical_rank: point is not a matrix");
  const SymmetricEigen eig = jacobi_eigen(w.values(), w.shape().n);
  return count_above_rank_threshold(eig.values);
}

std::size_t numerical_rank(std::span<const double> m, std::size_t rows, std::size_t cols) {
  if (m.size() != rows * cols) throw std::invalid_argument("numerical_rank: size mismatch");
  // Eigenvalues of [[0, M], [M^T, 0]] are +-sigma_i; going through the Gram
  // matrix would square away the small singular values.
  const std::size_t n = rows + cols;
  std::vector<double> aug(n * n, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      aug[i * n + rows + j] = m[i * cols + j];
      aug[(rows + j) * n + i] = m[i * cols + j];
    }
  return count_above_rank_threshold(jacobi_eigen(aug, n).values);
}

bool StructuredSet::contains(const Point& w, double tol) const {
  if (w.size() != dim()) return false;
  const auto in_box = [tol](double v, double lo, double hi) {
    return v >= lo - tol && v <= hi + tol;
  };
  return std::visit(
      Overloaded{
          [&](const BoxSet& s) {
            for (std::size_t i = 0; i < w.size(); ++i)
              if (!in_box(w[i], s.lo[i], s.hi[i])) return false;
            return true;
          },
          [&](const BoxSwitching& s) {
            for (std::size_t i = 0; i < s.pairs; ++i) {
              const double y = w[i];
              const double z = w[s.pairs + i];
              if (!in_box(y, s.s_lo, s.s_hi) || !in_box(z, s.t_lo, s.t_hi)) return false;
              if (std::abs(y) > tol && std::abs(z) > tol) return false;
            }
            return true;
          },
          [&](const SparseBox& s) {
            std::size_t nonzeros = 0;
            for (std::size_t i = 0; i < w.size(); ++i) {
              if (!in_box(w[i], s.lo[i], s.hi[i])) return false;
              nonzeros += w[i] != 0.0 ? 1 : 0;
            }
            return nonzeros <= s.kappa;
          },
          [&](const LowRank& s) { return numerical_rank(w.values(), s.rows, s.cols) <= s.kappa; },
          [&](const PsdLowRank& s) {
            const SymmetricEigen eig = jacobi_eigen(w.values(), s.n);
            const double scale = std::max(1.0, std::abs(eig.values.front()));
            if (eig.values.back() < -tol * scale) return false;
            return count_above_rank_threshold(eig.values) <= s.kappa;
          },
          [&](const Union& s) {
            return std::any_of(s.branches.begin(), s.branches.end(),
                               [&](const ConvexSet& b) { return b.contains(w, tol); });
          },
          [&](const Product& s) {
            std::size_t offset = 0;
            const auto values = w.values();
            for (const auto& part : s.parts) {
              const std::size_t len = part.dim();
              const Point sub = slice_for(part, values, offset);
              if (!part.contains(sub, tol)) return false;
              offset += len;
            }
            return true;
          },
      },
      set_);
}

}  // namespace geoalm
