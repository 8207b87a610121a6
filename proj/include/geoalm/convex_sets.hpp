#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "geoalm/space.hpp"

namespace geoalm {

/// Magnitude used for "infinite" bounds. Box bounds of +-inf are clamped to
/// this value so projections reduce to plain clamping.
inline constexpr double kInfinity = 1.7976931348623157e308;

/// Multiplier safeguard magnitude.
inline constexpr double kSafeguardBound = 1e20;

/// C = R_-^{nonpositive} x {0}^{zero}; inequality rows come first.
struct OrthantProduct {
  std::size_t nonpositive = 0;
  std::size_t zero = 0;
};

/// C = {target}.
struct FixedPoint {
  std::vector<double> target;
};

/// C = [lo, hi].
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

struct SafeguardBox {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Closed convex set with a closed-form projection.
class ConvexSet {
 public:
  using Variant = std::variant<OrthantProduct, FixedPoint, Box>;

  static ConvexSet orthant_product(std::size_t nonpositive, std::size_t zero);
  static ConvexSet fixed_point(std::vector<double> target);
  /// Infinite bounds are accepted and clamped to +-kInfinity.
  static ConvexSet box(std::vector<double> lo, std::vector<double> hi);

  std::size_t dim() const;
  const Variant& variant() const { return set_; }

  Point project(const Point& y) const;
  double dist(const Point& y) const;
  bool contains(const Point& y, double tol = 0.0) const;

  /// Whether row i is an inequality (true) or equality row (false). Only
  /// meaningful for orthant products and fixed points.
  bool is_inequality_row(std::size_t i) const;

 private:
  explicit ConvexSet(Variant set) : set_(std::move(set)) {}

  void check_dim(const Point& y) const;

  Variant set_;
};

inline Point project_C(const ConvexSet& c, const Point& y) { return c.project(y); }
inline double dist_C(const ConvexSet& c, const Point& y) { return c.dist(y); }

/// Componentwise multiplier box: [0, 1e20] on inequality rows and
/// [-1e20, 1e20] on equality rows. Throws for box sets.
SafeguardBox safeguard_box_for(const ConvexSet& c);

}  // namespace geoalm
