#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "geoalm/convex_sets.hpp"
#include "geoalm/space.hpp"

namespace geoalm {

class StructuredSet;

/// Plain box [lo, hi] (lo may be -inf, hi may be +inf).
struct BoxSet {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// `pairs` copies of T = {(s,t) : s in [s_lo,s_hi], t in [t_lo,t_hi], s*t = 0}.
/// A point is laid out as (y_1..y_m, z_1..z_m) with (y_i, z_i) in T.
struct BoxSwitching {
  std::size_t pairs = 0;
  double s_lo = 0.0;
  double s_hi = kInfinity;
  double t_lo = 0.0;
  double t_hi = kInfinity;
};

/// {w in R^n : ||w||_0 <= kappa, lo <= w <= hi}.
struct SparseBox {
  std::size_t kappa = 0;
  std::vector<double> lo;
  std::vector<double> hi;
};

/// rows x cols matrices (row-major) of rank <= kappa.
struct LowRank {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t kappa = 0;
};

/// Symmetric n x n matrices that are PSD with rank <= kappa.
struct PsdLowRank {
  std::size_t n = 0;
  std::size_t kappa = 0;
};

/// Finite union of convex branches; nearest branch wins, ties go to the
/// lowest branch index.
struct Union {
  std::vector<ConvexSet> branches;
};

/// Cartesian product over consecutive coordinate blocks.
struct Product {
  std::vector<StructuredSet> parts;
};

class StructuredSet {
 public:
  using Variant =
      std::variant<BoxSet, BoxSwitching, SparseBox, LowRank, PsdLowRank, Union, Product>;

  static StructuredSet box(std::vector<double> lo, std::vector<double> hi);
  static StructuredSet box_switching(std::size_t pairs, double s_lo, double s_hi, double t_lo,
                                     double t_hi);
  static StructuredSet complementarity(std::size_t pairs);
  static StructuredSet switching(std::size_t pairs);
  static StructuredSet sparse_box(std::size_t kappa, std::vector<double> lo,
                                  std::vector<double> hi);
  /// Sparsity without bounds.
  static StructuredSet sparse(std::size_t n, std::size_t kappa);
  static StructuredSet low_rank(std::size_t rows, std::size_t cols, std::size_t kappa);
  static StructuredSet psd_low_rank(std::size_t n, std::size_t kappa);
  static StructuredSet union_of(std::vector<ConvexSet> branches);
  static StructuredSet product(std::vector<StructuredSet> parts);

  const Variant& variant() const { return set_; }
  /// Number of scalar coordinates.
  std::size_t dim() const;
  /// Natural shape of a point in this set (sym_matrix for PSD sets).
  Shape shape() const;

  /// One element of the (possibly set-valued) projection, chosen by the
  /// documented deterministic tie-breaks. Result has the shape of `w`.
  Point project(const Point& w) const;

  /// Membership with tolerance `tol` on bounds and eigenvalue signs.
  /// Sparsity is checked on exact zeros; rank via the numerical rank
  /// threshold.
  bool contains(const Point& w, double tol = 1e-9) const;

  std::string describe() const;

 private:
  explicit StructuredSet(Variant set) : set_(std::move(set)) {}

  Variant set_;
};

inline Point project_D(const StructuredSet& d, const Point& w) { return d.project(w); }

// Per-variant projections; `w` must hold exactly the variant's coordinates.
Point project_box(const BoxSet& set, const Point& w);
Point project_box_switching(const BoxSwitching& set, const Point& w);
Point project_sparse_box(const SparseBox& set, const Point& w);
Point project_low_rank(const LowRank& set, const Point& w);
Point project_psd_low_rank(const PsdLowRank& set, const Point& w);
Point project_union(const Union& set, const Point& w);

/// d_i(w) = w_i^2 - (P_[lo_i,hi_i](w_i) - w_i)^2.
std::vector<double> d_vector(const Point& w, const std::vector<double>& lo,
                             const std::vector<double>& hi);

/// Numerical rank of a symmetric matrix point (eigenvalues above threshold).
std::size_t numerical_rank(const Point& w);

/// Numerical rank of a rows x cols matrix stored row-major.
std::size_t numerical_rank(std::span<const double> m, std::size_t rows, std::size_t cols);

}  // namespace geoalm
