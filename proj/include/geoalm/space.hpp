#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace geoalm {

enum class ShapeKind { vector, sym_matrix };

/// Layout tag of a Point. A sym_matrix(n) stores all n*n entries row-major.
struct Shape {
  ShapeKind kind = ShapeKind::vector;
  std::size_t n = 0;

  static Shape vector(std::size_t n) { return {ShapeKind::vector, n}; }
  static Shape sym_matrix(std::size_t n) { return {ShapeKind::sym_matrix, n}; }

  std::size_t size() const { return kind == ShapeKind::vector ? n : n * n; }
  std::string to_string() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// An element of a Euclidean space: a flat real vector or a dense symmetric
/// matrix with the Frobenius inner product. Entries are always finite and
/// matrix entries are always exactly symmetric.
class Point {
 public:
  Point() = default;

  static Point vector(std::vector<double> values);
  static Point zeros(std::size_t n);
  /// Symmetrizes `values` as (M + M^T)/2.
  static Point sym_matrix(std::size_t n, std::vector<double> values);
  static Point zeros(const Shape& shape);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  bool is_matrix() const { return shape_.kind == ShapeKind::sym_matrix; }

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  /// Matrix entry (row, col); only valid for sym_matrix points.
  double at(std::size_t row, std::size_t col) const;

  /// New point of the same shape holding `values` (validated like a fresh
  /// construction).
  Point with_values(std::vector<double> values) const;
  std::vector<double> to_vector() const { return values_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  Point(Shape shape, std::vector<double> values);

  Shape shape_;
  std::vector<double> values_;
};

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(double s, const Point& a);
/// alpha * x + y
Point axpy(double alpha, const Point& x, const Point& y);

double inner(const Point& a, const Point& b);
double norm(const Point& a);
double norm_inf(const Point& a);
double dist_inf(const Point& a, const Point& b);

/// Throws std::invalid_argument when the shapes differ.
void require_same_shape(const Point& a, const Point& b, const char* what);

}  // namespace geoalm
