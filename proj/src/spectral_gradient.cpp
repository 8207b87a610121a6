#include "geoalm/spectral_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace geoalm {

void SpgConfig::validate() const {
  if (!(tau > 1.0)) throw std::invalid_argument("SpgConfig: tau must exceed 1");
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("SpgConfig: sigma must lie in (0,1)");
  if (!(gamma_min > 0.0 && gamma_min <= gamma_max)) {
    throw std::invalid_argument("SpgConfig: need 0 < gamma_min <= gamma_max");
  }
  if (!(inner_tol > 0.0)) throw std::invalid_argument("SpgConfig: inner_tol must be positive");
  if (max_outer_iters < 0 || max_backtracks < 1) {
    throw std::invalid_argument("SpgConfig: iteration caps must be positive");
  }
}

std::string_view to_string(SpgStatus status) {
  switch (status) {
    case SpgStatus::converged: return "converged";
    case SpgStatus::iter_cap: return "iter_cap";
    case SpgStatus::stalled: return "stalled";
  }
  return "unknown";
}

Point solve_Q(const Point& wj, const Point& grad, double gamma, const StructuredSet& d) {
  if (!(gamma > 0.0)) throw std::invalid_argument("solve_Q: gamma must be positive");
  return d.project(axpy(-1.0 / gamma, grad, wj));
}

bool armijo_accept(double phi_candidate, std::span<const double> history, const Point& grad,
                   const Point& step, double sigma) {
  if (history.empty()) throw std::invalid_argument("armijo_accept: empty history");
  const double envelope = *std::max_element(history.begin(), history.end());
  return phi_candidate <= envelope + sigma * inner(grad, step);
}

double bb_step(const Point& s, const Point& y, double gamma_min, double gamma_max,
               double fallback) {
  const double ss = inner(s, s);
  const double sy = inner(s, y);
  const double raw = (ss > 0.0 && sy > 0.0) ? sy / ss : fallback;
  return std::clamp(raw, gamma_min, gamma_max);
}

SpgResult spg_minimize(const SmoothObjective& phi, const StructuredSet& d, const Point& w0,
                       const SpgConfig& cfg, const SpgSink& sink) {
  cfg.validate();

  Point w = w0;
  ValueGrad current = phi(w);
  long fevals = 1;
  long trials = 0;
  std::deque<double> history{current.value};
  double gamma0 = std::clamp(cfg.gamma_init, cfg.gamma_min, cfg.gamma_max);

  SpgResult result;
  auto finish = [&](Point returned, const Point& base, double gamma, Point residual_vector,
                    double value, long j, SpgStatus status) {
    result.w = std::move(returned);
    result.base = base;
    result.gamma = gamma;
    result.residual = norm_inf(residual_vector);
    result.residual_vector = std::move(residual_vector);
    result.value = value;
    result.outer_iters = j;
    result.total_inner_iters = trials;
    result.function_evals = fevals;
    result.status = status;
    return result;
  };

  // Residual of the most recent trial point, reported on cap/stall exits.
  Point last_residual = Point::zeros(w.shape());
  double last_gamma = gamma0;

  for (long j = 0;; ++j) {
    if (j >= cfg.max_outer_iters) {
      return finish(w, w, last_gamma, last_residual, current.value, j, SpgStatus::iter_cap);
    }
    // m_j = min(j, m): the deque holds the last m_j + 1 values.
    const double envelope = *std::max_element(history.begin(), history.end());

    Point candidate;
    ValueGrad trial;
    double gamma = gamma0;
    double residual = 0.0;
    int i = 0;
    for (;;) {
      ++i;
      if (i > cfg.max_backtracks) {
        return finish(w, w, last_gamma, last_residual, current.value, j, SpgStatus::stalled);
      }
      gamma = gamma0 * std::pow(cfg.tau, i - 1);
      candidate = solve_Q(w, current.grad, gamma, d);
      trial = phi(candidate);
      ++fevals;
      ++trials;

      Point residual_vector = axpy(gamma, w - candidate, trial.grad - current.grad);
      residual = norm_inf(residual_vector);
      last_gamma = gamma;
      if (residual <= cfg.inner_tol) {
        return finish(std::move(candidate), w, gamma, std::move(residual_vector), trial.value, j,
                      SpgStatus::converged);
      }
      last_residual = std::move(residual_vector);
      if (trial.value <= envelope + cfg.sigma * inner(current.grad, candidate - w)) break;
    }

    const Point step = candidate - w;
    const Point grad_change = trial.grad - current.grad;
    const double next_gamma0 = bb_step(step, grad_change, cfg.gamma_min, cfg.gamma_max, gamma);

    if (sink) {
      SpgIteration rec;
      rec.j = j;
      rec.backtracks = i;
      rec.gamma0 = gamma0;
      rec.gamma = gamma;
      rec.phi = trial.value;
      rec.envelope = envelope;
      rec.model_value = inner(current.grad, step) + 0.5 * gamma * inner(step, step);
      rec.residual = residual;
      rec.function_evals = fevals;
      rec.feasible = d.contains(candidate);
      sink(rec);
    }

    w = std::move(candidate);
    current = std::move(trial);
    history.push_back(current.value);
    if (history.size() > cfg.history + 1) history.pop_front();
    gamma0 = next_gamma0;
  }
}

}  // namespace geoalm
