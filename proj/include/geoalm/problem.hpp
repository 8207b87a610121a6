#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "geoalm/convex_sets.hpp"
#include "geoalm/space.hpp"
#include "geoalm/structured_sets.hpp"

namespace geoalm {

/// min f(w) s.t. G(w) in C, w in D.
struct ProblemSpec {
  std::string name;
  Shape w_shape;
  std::size_t dim_y = 0;

  std::function<double(const Point&)> f;
  std::function<Point(const Point&)> grad_f;
  std::function<Point(const Point&)> G;
  /// G'(w)^* lambda
  std::function<Point(const Point&, const Point&)> G_adjoint;

  ConvexSet C = ConvexSet::orthant_product(1, 0);
  StructuredSet D = StructuredSet::box({0.0}, {0.0});

  /// Start used when the caller does not supply one.
  Point default_start;
  /// Known stationary points / minimizers, if any.
  std::vector<Point> reference_points;

  std::size_t dim_w() const { return w_shape.size(); }
};

/// Largest relative deviation between <G'(w)^* lambda, v> and the central
/// finite-difference directional derivative <lambda, (G(w+hv)-G(w-hv))/2h>.
double adjoint_consistency_error(const ProblemSpec& p, const Point& w, const Point& lambda,
                                 const Point& v, double h = 1e-6);

}  // namespace geoalm
