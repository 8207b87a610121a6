#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>

#include "geoalm/space.hpp"
#include "geoalm/structured_sets.hpp"

namespace geoalm {

struct SpgConfig {
  double tau = 2.0;          ///< stepsize ladder factor, > 1
  double sigma = 1e-4;       ///< Armijo constant in (0, 1)
  double gamma_min = 1e-10;
  double gamma_max = 1e10;
  std::size_t history = 10;  ///< nonmonotone memory m
  double gamma_init = 1.0;   ///< gamma_0^0 for the first outer iteration
  double inner_tol = 1e-4;
  long max_outer_iters = 50000;
  int max_backtracks = 60;

  void validate() const;
};

enum class SpgStatus { converged, iter_cap, stalled };

std::string_view to_string(SpgStatus status);

/// Value and gradient of the smooth objective at one point.
struct ValueGrad {
  double value = 0.0;
  Point grad;
};

using SmoothObjective = std::function<ValueGrad(const Point&)>;

/// One accepted step w^j -> w^{j+1}.
struct SpgIteration {
  long j = 0;
  int backtracks = 0;         ///< i_j, the number of trial stepsizes
  double gamma0 = 0.0;        ///< gamma_j^0
  double gamma = 0.0;         ///< accepted gamma_j = tau^{i_j - 1} gamma_j^0
  double phi = 0.0;           ///< phi(w^{j+1})
  double envelope = 0.0;      ///< max of the last m_j + 1 values at step j
  double model_value = 0.0;   ///< <grad phi(w^j), d> + gamma_j/2 ||d||^2, d = w^{j+1} - w^j
  double residual = 0.0;      ///< termination residual of the accepted candidate
  long function_evals = 0;    ///< cumulative
  bool feasible = true;       ///< w^{j+1} passed the membership check
};

using SpgSink = std::function<void(const SpgIteration&)>;

struct SpgResult {
  Point w;              ///< returned point
  Point base;           ///< w^j the returned candidate was computed from
  double gamma = 0.0;   ///< gamma_{j,i} of the returned candidate
  Point residual_vector;  ///< gamma (w^j - w) + grad phi(w) - grad phi(w^j)
  double residual = 0.0;  ///< max-norm of residual_vector
  double value = 0.0;     ///< phi(w)
  long outer_iters = 0;       ///< accepted steps j
  long total_inner_iters = 0; ///< trial points evaluated
  long function_evals = 0;
  SpgStatus status = SpgStatus::converged;
};

/// Minimizer of the quadratic model of phi around wj over D:
/// P_D(wj - grad / gamma).
Point solve_Q(const Point& wj, const Point& grad, double gamma, const StructuredSet& d);

/// Nonmonotone Armijo test phi_candidate <= max(history) + sigma <grad, step>.
bool armijo_accept(double phi_candidate, std::span<const double> history, const Point& grad,
                   const Point& step, double sigma);

/// Barzilai-Borwein curvature s^T y / s^T s clamped to [gamma_min, gamma_max];
/// `fallback` (clamped) when s = 0 or s^T y <= 0.
double bb_step(const Point& s, const Point& y, double gamma_min, double gamma_max,
               double fallback);

/// Nonmonotone spectral projected gradient method over the structured set D.
/// `w0` must already lie in D.
SpgResult spg_minimize(const SmoothObjective& phi, const StructuredSet& d, const Point& w0,
                       const SpgConfig& cfg, const SpgSink& sink = {});

}  // namespace geoalm
