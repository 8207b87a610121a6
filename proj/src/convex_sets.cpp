#include "geoalm/convex_sets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace geoalm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double clamp_infinite(double v) {
  if (std::isnan(v)) throw std::invalid_argument("ConvexSet: NaN bound");
  return std::clamp(v, -kInfinity, kInfinity);
}

}  // namespace

ConvexSet ConvexSet::orthant_product(std::size_t nonpositive, std::size_t zero) {
  if (nonpositive + zero == 0) {
    throw std::invalid_argument("orthant_product: needs at least one row");
  }
  return ConvexSet(OrthantProduct{nonpositive, zero});
}

ConvexSet ConvexSet::fixed_point(std::vector<double> target) {
  if (target.empty()) throw std::invalid_argument("fixed_point: empty target");
  for (double v : target) {
    if (!std::isfinite(v)) throw std::invalid_argument("fixed_point: non-finite target");
  }
  return ConvexSet(FixedPoint{std::move(target)});
}

ConvexSet ConvexSet::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size() || lo.empty()) {
    throw std::invalid_argument("box: lo/hi size mismatch or empty");
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    lo[i] = clamp_infinite(lo[i]);
    hi[i] = clamp_infinite(hi[i]);
    if (lo[i] > hi[i]) {
      throw std::invalid_argument("box: lo > hi at component " + std::to_string(i));
    }
  }
  return ConvexSet(Box{std::move(lo), std::move(hi)});
}

std::size_t ConvexSet::dim() const {
  return std::visit(Overloaded{
                        [](const OrthantProduct& o) { return o.nonpositive + o.zero; },
                        [](const FixedPoint& f) { return f.target.size(); },
                        [](const Box& b) { return b.lo.size(); },
                    },
                    set_);
}

void ConvexSet::check_dim(const Point& y) const {
  if (y.size() != dim()) {
    throw std::invalid_argument("ConvexSet: dimension mismatch, set has " +
                                std::to_string(dim()) + " rows, point has " +
                                std::to_string(y.size()));
  }
}

Point ConvexSet::project(const Point& y) const {
  check_dim(y);
  std::vector<double> out = y.to_vector();
  std::visit(Overloaded{
                 [&](const OrthantProduct& o) {
                   for (std::size_t i = 0; i < o.nonpositive; ++i) out[i] = std::min(out[i], 0.0);
                   for (std::size_t i = o.nonpositive; i < out.size(); ++i) out[i] = 0.0;
                 },
                 [&](const FixedPoint& f) { out = f.target; },
                 [&](const Box& b) {
                   for (std::size_t i = 0; i < out.size(); ++i) {
                     out[i] = std::clamp(out[i], b.lo[i], b.hi[i]);
                   }
                 },
             },
             set_);
  return y.with_values(std::move(out));
}

double ConvexSet::dist(const Point& y) const { return norm(project(y) - y); }

bool ConvexSet::contains(const Point& y, double tol) const {
  check_dim(y);
  return dist_inf(project(y), y) <= tol;
}

bool ConvexSet::is_inequality_row(std::size_t i) const {
  if (const auto* o = std::get_if<OrthantProduct>(&set_)) return i < o->nonpositive;
  return false;
}

SafeguardBox safeguard_box_for(const ConvexSet& c) {
  if (std::holds_alternative<Box>(c.variant())) {
    throw std::invalid_argument("safeguard_box_for: only orthant products and fixed points");
  }
  SafeguardBox box;
  box.lo.resize(c.dim());
  box.hi.assign(c.dim(), kSafeguardBound);
  for (std::size_t i = 0; i < c.dim(); ++i) {
    box.lo[i] = c.is_inequality_row(i) ? 0.0 : -kSafeguardBound;
  }
  return box;
}

}  // namespace geoalm
