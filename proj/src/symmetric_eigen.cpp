#include "geoalm/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace geoalm {

SymmetricEigen jacobi_eigen(std::span<const double> a_in, std::size_t n, int max_sweeps) {
  if (a_in.size() != n * n) {
    throw std::invalid_argument("jacobi_eigen: expected " + std::to_string(n * n) +
                                " entries, got " + std::to_string(a_in.size()));
  }
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = 0.5 * (a_in[i * n + j] + a_in[j * n + i]);
  }
  // Columns of v accumulate the rotations.
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm2 = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
    return s;
  };
  double total2 = 0.0;
  for (double x : a) total2 += x * x;
  const double eps = std::numeric_limits<double>::epsilon();
  const double target = eps * eps * total2;

  int sweep = 0;
  double off = off_norm2();
  while (off > target && off > std::numeric_limits<double>::min()) {
    if (sweep >= max_sweeps) {
      throw NumericalError("jacobi_eigen: no convergence after " + std::to_string(sweep) +
                           " sweeps (n=" + std::to_string(n) +
                           ", off-diagonal norm=" + std::to_string(std::sqrt(off)) +
                           ", Frobenius norm=" + std::to_string(std::sqrt(total2)) + ")");
    }
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        // Rotation annihilating a_pq (Golub & Van Loan, sym.schur2).
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
    off = off_norm2();
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });

  SymmetricEigen out;
  out.n = n;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t col = order[k];
    out.values[k] = a[col * n + col];
    for (std::size_t i = 0; i < n; ++i) out.vectors[k * n + i] = v[i * n + col];
  }
  return out;
}

std::size_t count_above_rank_threshold(std::span<const double> values) {
  double largest = 0.0;
  for (double x : values) largest = std::max(largest, std::abs(x));
  const double cut = kRankThreshold * std::max(largest, 1.0);
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double x) { return x > cut; }));
}

}  // namespace geoalm
