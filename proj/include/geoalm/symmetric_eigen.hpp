#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace geoalm {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigen decomposition A = sum_k values[k] * v_k v_k^T with values sorted
/// non-increasingly (ties keep the lower original column first).
struct SymmetricEigen {
  std::size_t n = 0;
  std::vector<double> values;
  /// vectors[k * n + i] is component i of eigenvector k.
  std::vector<double> vectors;
  int sweeps = 0;

  std::span<const double> vector(std::size_t k) const {
    return std::span<const double>(vectors).subspan(k * n, n);
  }
};

/// Cyclic Jacobi rotations on a dense symmetric n x n matrix (row-major,
/// only the symmetric part is used). Throws NumericalError if the
/// off-diagonal mass does not fall below machine precision within
/// `max_sweeps` sweeps.
SymmetricEigen jacobi_eigen(std::span<const double> a, std::size_t n, int max_sweeps = 100);

/// Relative threshold for counting singular/eigen values toward rank.
inline constexpr double kRankThreshold = 1e-8;

/// Number of entries of `values` strictly above kRankThreshold * max(largest |value|, 1).
std::size_t count_above_rank_threshold(std::span<const double> values);

}  // namespace geoalm
