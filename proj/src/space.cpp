#include "geoalm/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace geoalm {

std::string Shape::to_string() const {
  return (kind == ShapeKind::vector ? "vector(" : "sym_matrix(") +
         std::to_string(n) + ")";
}

Point::Point(Shape shape, std::vector<double> values)
    : shape_(shape), values_(std::move(values)) {
  if (values_.size() != shape_.size()) {
    throw std::invalid_argument("Point: " + shape_.to_string() + " needs " +
                                std::to_string(shape_.size()) +
                                " entries, got " +
                                std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("Point: non-finite entry at index " +
                                  std::to_string(i));
    }
  }
  if (shape_.kind == ShapeKind::sym_matrix) {
    const std::size_t n = shape_.n;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        // (a + a) / 2 == a exactly, so symmetric input is left untouched.
        const double avg = 0.5 * (values_[i * n + j] + values_[j * n + i]);
        values_[i * n + j] = avg;
        values_[j * n + i] = avg;
      }
    }
  }
}

Point Point::vector(std::vector<double> values) {
  const auto n = values.size();
  return Point(Shape::vector(n), std::move(values));
}

Point Point::zeros(std::size_t n) { return Point(Shape::vector(n), std::vector<double>(n, 0.0)); }

Point Point::sym_matrix(std::size_t n, std::vector<double> values) {
  return Point(Shape::sym_matrix(n), std::move(values));
}

Point Point::zeros(const Shape& shape) {
  return Point(shape, std::vector<double>(shape.size(), 0.0));
}

double Point::at(std::size_t row, std::size_t col) const {
  if (!is_matrix() || row >= shape_.n || col >= shape_.n) {
    throw std::out_of_range("Point::at: index outside " + shape_.to_string());
  }
  return values_[row * shape_.n + col];
}

Point Point::with_values(std::vector<double> values) const {
  return Point(shape_, std::move(values));
}

void require_same_shape(const Point& a, const Point& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " +
                                a.shape().to_string() + " vs " +
                                b.shape().to_string());
  }
}

Point operator+(const Point& a, const Point& b) { return axpy(1.0, a, b); }

Point operator-(const Point& a, const Point& b) { return axpy(-1.0, b, a); }

Point operator*(double s, const Point& a) {
  std::vector<double> out(a.values().begin(), a.values().end());
  for (double& v : out) v *= s;
  return a.with_values(std::move(out));
}

Point axpy(double alpha, const Point& x, const Point& y) {
  require_same_shape(x, y, "axpy");
  std::vector<double> out(y.values().begin(), y.values().end());
  const auto xv = x.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += alpha * xv[i];
  return y.with_values(std::move(out));
}

double inner(const Point& a, const Point& b) {
  require_same_shape(a, b, "inner");
  const auto av = a.values();
  const auto bv = b.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) sum += av[i] * bv[i];
  return sum;
}

double norm(const Point& a) { return std::sqrt(inner(a, a)); }

double norm_inf(const Point& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double dist_inf(const Point& a, const Point& b) {
  require_same_shape(a, b, "dist_inf");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace geoalm
