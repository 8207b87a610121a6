#include "geoalm/alm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace geoalm {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(what) + ": non-finite value");
}

// Shifted constraint value q = G(w) + lambda/rho and its residual q - P_C(q).
struct ShiftedConstraint {
  Point g;
  Point residual;
};

ShiftedConstraint shifted_constraint(const ProblemSpec& p, const Point& w, const Point& lambda,
                                     double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("penalty parameter must be positive");
  Point g = p.G(w);
  Point q = axpy(1.0 / rho, lambda, g);
  Point residual = q - p.C.project(q);
  return {std::move(g), std::move(residual)};
}

}  // namespace

void AlmConfig::validate() const {
  if (!(beta > 1.0)) throw std::invalid_argument("AlmConfig: beta must exceed 1");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("AlmConfig: eta must lie in (0,1)");
  if (!(outer_tol > 0.0) || !(inner_tol_base > 0.0)) {
    throw std::invalid_argument("AlmConfig: tolerances must be positive");
  }
  if (max_outer < 1) throw std::invalid_argument("AlmConfig: max_outer must be positive");
  if (rho0 && !(*rho0 > 0.0)) throw std::invalid_argument("AlmConfig: rho0 must be positive");
  spg.validate();
}

double AlmConfig::inner_tol(int k) const { return inner_tol_base / std::sqrt(k + 1.0); }

std::string_view to_string(AlmStatus status) {
  switch (status) {
    case AlmStatus::am_stationary: return "am_stationary";
    case AlmStatus::infeasible_stationary: return "infeasible_stationary";
    case AlmStatus::iter_cap: return "iter_cap";
  }
  return "unknown";
}

double aug_lag_value(const ProblemSpec& p, const Point& w, const Point& lambda, double rho) {
  const auto sc = shifted_constraint(p, w, lambda, rho);
  const double value = p.f(w) + 0.5 * rho * inner(sc.residual, sc.residual);
  require_finite(value, "aug_lag_value");
  return value;
}

Point aug_lag_grad(const ProblemSpec& p, const Point& w, const Point& lambda, double rho) {
  const auto sc = shifted_constraint(p, w, lambda, rho);
  return axpy(rho, p.G_adjoint(w, sc.residual), p.grad_f(w));
}

double V_measure(const ProblemSpec& p, const Point& w, const Point& u, double rho) {
  const Point g = p.G(w);
  return norm_inf(g - p.C.project(axpy(1.0 / rho, u, g)));
}

double V_measure_euclidean(const ProblemSpec& p, const Point& w, const Point& u, double rho) {
  const Point g = p.G(w);
  return norm(g - p.C.project(axpy(1.0 / rho, u, g)));
}

Point multiplier_update(const ProblemSpec& p, const Point& w, const Point& u, double rho) {
  return rho * shifted_constraint(p, w, u, rho).residual;
}

double initial_penalty(const ProblemSpec& p, const Point& w0) {
  const double f0 = p.f(w0);
  const double d = p.C.dist(p.G(w0));
  const double raw = 10.0 * std::max(1.0, f0) / std::max(1.0, 0.5 * d * d);
  return std::clamp(raw, 1e-3, 1e3);
}

Point safeguard(const Point& lambda, const SafeguardBox& box) {
  if (lambda.size() != box.lo.size()) throw std::invalid_argument("safeguard: dimension mismatch");
  std::vector<double> out = lambda.to_vector();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], box.lo[i], box.hi[i]);
  return lambda.with_values(std::move(out));
}

SolveResult alm_solve(const ProblemSpec& p, const Point& w_start, const AlmConfig& cfg,
                      const AlmSpgSink& spg_sink) {
  cfg.validate();
  if (w_start.size() != p.dim_w()) {
    throw std::invalid_argument("alm_solve: start has " + std::to_string(w_start.size()) +
                                " coordinates, problem needs " + std::to_string(p.dim_w()));
  }
  const SafeguardBox box = safeguard_box_for(p.C);

  Point w = p.D.project(w_start);
  double rho = cfg.rho0 ? *cfg.rho0 : initial_penalty(p, w);
  Point u = Point::zeros(p.dim_y);
  double V_prev = std::numeric_limits<double>::quiet_NaN();
  // V before a run of consecutive penalty increases, followed by the V
  // value after each increase of that run.
  std::vector<double> increase_run;

  SolveResult res;
  long inner_cum = 0;
  long fevals = 0;

  for (int k = 0; k < cfg.max_outer; ++k) {
    SpgConfig spg = cfg.spg;
    spg.inner_tol = cfg.inner_tol(k);
    const auto phi = [&](const Point& x) {
      const auto sc = shifted_constraint(p, x, u, rho);
      ValueGrad vg;
      vg.value = p.f(x) + 0.5 * rho * inner(sc.residual, sc.residual);
      require_finite(vg.value, "augmented Lagrangian");
      vg.grad = axpy(rho, p.G_adjoint(x, sc.residual), p.grad_f(x));
      return vg;
    };
    SpgSink sink;
    if (spg_sink) sink = [&](const SpgIteration& it) { spg_sink(k, it); };
    SpgResult sr = spg_minimize(phi, p.D, w, spg, sink);

    const Point g = p.G(sr.w);
    const Point q = axpy(1.0 / rho, u, g);
    const Point pq = p.C.project(q);
    Point lambda = rho * (q - pq);
    Point z = g - pq;
    const double V = norm_inf(z);

    const bool keep = k == 0 || V <= cfg.eta * V_prev;
    const double rho_next = keep ? rho : cfg.beta * rho;

    inner_cum += sr.outer_iters;
    fevals += sr.function_evals;

    AlmIteration rec;
    rec.k = k + 1;
    rec.inner_iters = sr.outer_iters;
    rec.inner_cum = inner_cum;
    rec.function_evals = fevals;
    rec.f = p.f(sr.w);
    rec.V = V;
    rec.step = 1.0 / sr.gamma;
    rec.rho = rho_next;
    rec.spg_status = sr.status;
    rec.spg_residual = sr.residual;
    rec.inner_tol = spg.inner_tol;
    rec.rho_prev = rho;
    rec.u_prev = u;
    rec.w = sr.w;
    rec.lambda = lambda;
    res.records.push_back(rec);

    res.w = sr.w;
    res.lambda = lambda;
    res.u_last = u;
    res.rho_last = rho;
    res.rho = rho_next;
    res.z = std::move(z);
    res.epsilon = std::move(sr.residual_vector);
    res.V = V;
    res.f = rec.f;
    res.inner_total = inner_cum;
    res.function_evals = fevals;

    if (V <= cfg.outer_tol) {
      res.status = AlmStatus::am_stationary;
      return res;
    }

    if (keep) {
      increase_run.clear();
    } else {
      if (increase_run.empty()) increase_run.push_back(V_prev);
      increase_run.push_back(V);
    }
    if (rho_next > cfg.divergence_rho && increase_run.size() >= 4 &&
        increase_run.back() >= 0.99 * increase_run[increase_run.size() - 4]) {
      // Stationarity residual of min 1/2 d_C^2(G(w)) over D.
      const Point gw = p.G(sr.w);
      const Point grad_feas = p.G_adjoint(sr.w, gw - p.C.project(gw));
      res.feasibility_residual = dist_inf(sr.w, p.D.project(sr.w - grad_feas));
      res.status = AlmStatus::infeasible_stationary;
      return res;
    }

    w = sr.w;
    u = safeguard(lambda, box);
    V_prev = V;
    rho = rho_next;
  }
  res.status = AlmStatus::iter_cap;
  return res;
}

StationarityReport stationarity_report(const ProblemSpec& p, const SolveResult& result) {
  StationarityReport r;
  const Point g = p.G(result.w);
  const Point pq = p.C.project(axpy(1.0 / result.rho_last, result.u_last, g));
  const Point z = g - pq;
  const Point lambda = multiplier_update(p, result.w, result.u_last, result.rho_last);
  r.z_inf = norm_inf(z);
  r.epsilon_inf = norm_inf(result.epsilon);
  r.lambda_inf = norm_inf(result.lambda);
  r.dist_C = p.C.dist(g);
  r.rho = result.rho;
  bool any_inequality = false;
  r.min_inequality_multiplier = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!p.C.is_inequality_row(i)) continue;
    any_inequality = true;
    r.min_inequality_multiplier = std::min(r.min_inequality_multiplier, lambda[i]);
  }
  if (!any_inequality) r.min_inequality_multiplier = 0.0;
  r.z_mismatch = dist_inf(z, result.z);
  r.lambda_mismatch = dist_inf(lambda, result.lambda);
  return r;
}

double adjoint_consistency_error(const ProblemSpec& p, const Point& w, const Point& lambda,
                                 const Point& v, double h) {
  const double adjoint_side = inner(p.G_adjoint(w, lambda), v);
  const Point gp = p.G(axpy(h, v, w));
  const Point gm = p.G(axpy(-h, v, w));
  const double fd_side = inner(lambda, (1.0 / (2.0 * h)) * (gp - gm));
  return std::abs(adjoint_side - fd_side) / std::max(1.0, std::abs(adjoint_side));
}

}  // namespace geoalm
