#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "geoalm/problem.hpp"
#include "geoalm/spectral_gradient.hpp"

namespace geoalm {

struct AlmConfig {
  double beta = 10.0;          ///< penalty growth factor, > 1
  double eta = 0.8;            ///< required V reduction factor in (0, 1)
  double outer_tol = 1e-4;     ///< stop once V_{rho_{k-1}}(w^k, u^{k-1}) <= outer_tol
  double inner_tol_base = 1e-4;  ///< subproblem k is solved to inner_tol_base / sqrt(k+1)
  int max_outer = 100;
  std::optional<double> rho0;  ///< overrides the initial penalty rule
  double divergence_rho = 1e12;
  SpgConfig spg;

  void validate() const;
  double inner_tol(int k) const;
};

enum class AlmStatus { am_stationary, infeasible_stationary, iter_cap };

std::string_view to_string(AlmStatus status);

/// One outer iteration, describing w^k for k >= 1.
struct AlmIteration {
  int k = 0;
  long inner_iters = 0;      ///< j: accepted SPG steps of this subproblem
  long inner_cum = 0;        ///< j_cum
  long function_evals = 0;   ///< cumulative
  double f = 0.0;            ///< f(w^k)
  double V = 0.0;            ///< V_{rho_{k-1}}(w^k, u^{k-1}), max-norm
  double step = 0.0;         ///< t_j = 1 / gamma of the final SPG step
  double rho = 0.0;          ///< rho_k (after the penalty update)
  SpgStatus spg_status = SpgStatus::converged;
  double spg_residual = 0.0;
  double inner_tol = 0.0;

  // Data needed to re-check the certificate of this iteration.
  double rho_prev = 0.0;     ///< rho_{k-1}
  Point u_prev;              ///< u^{k-1}
  Point w;                   ///< w^k
  Point lambda;              ///< lambda^k
};

struct SolveResult {
  Point w;
  Point lambda;
  Point u_last;       ///< u^{k-1} used in the final subproblem
  double rho_last = 0.0;  ///< rho_{k-1} used in the final subproblem
  double rho = 0.0;       ///< rho_k
  Point z;            ///< G(w) - P_C(G(w) + u_last / rho_last)
  Point epsilon;      ///< final SPG residual vector
  double V = 0.0;
  double f = 0.0;
  double feasibility_residual = 0.0;  ///< only meaningful for infeasible_stationary
  long inner_total = 0;
  long function_evals = 0;
  AlmStatus status = AlmStatus::iter_cap;
  std::vector<AlmIteration> records;

  int outer_iterations() const { return static_cast<int>(records.size()); }
};

/// Per-subproblem SPG iteration hook: receives the outer index k and the record.
using AlmSpgSink = std::function<void(int k, const SpgIteration&)>;

/// L_rho(w, lambda) = f(w) + rho/2 d_C^2(G(w) + lambda/rho).
double aug_lag_value(const ProblemSpec& p, const Point& w, const Point& lambda, double rho);

/// grad f(w) + rho G'(w)^*[G(w) + lambda/rho - P_C(G(w) + lambda/rho)].
Point aug_lag_grad(const ProblemSpec& p, const Point& w, const Point& lambda, double rho);

/// V_rho(w, u) = ||G(w) - P_C(G(w) + u/rho)||_inf.
double V_measure(const ProblemSpec& p, const Point& w, const Point& u, double rho);

/// Euclidean variant of V_measure.
double V_measure_euclidean(const ProblemSpec& p, const Point& w, const Point& u, double rho);

/// rho [G(w) + u/rho - P_C(G(w) + u/rho)].
Point multiplier_update(const ProblemSpec& p, const Point& w, const Point& u, double rho);

/// P_[1e-3, 1e3](10 max(1, f(w0)) / max(1, d_C^2(G(w0)) / 2)).
double initial_penalty(const ProblemSpec& p, const Point& w0);

/// Componentwise clamp of lambda to the safeguard box.
Point safeguard(const Point& lambda, const SafeguardBox& box);

/// Safeguarded augmented Lagrangian method; `w_start` is projected onto D first.
SolveResult alm_solve(const ProblemSpec& p, const Point& w_start, const AlmConfig& cfg,
                      const AlmSpgSink& spg_sink = {});

struct StationarityReport {
  double z_inf = 0.0;          ///< ||z||_inf recomputed
  double epsilon_inf = 0.0;    ///< final SPG residual
  double lambda_inf = 0.0;
  double dist_C = 0.0;         ///< d_C(G(w))
  double rho = 0.0;
  double min_inequality_multiplier = 0.0;  ///< min lambda_i over inequality rows (0 if none)
  double z_mismatch = 0.0;     ///< ||z_recomputed - z_stored||_inf
  double lambda_mismatch = 0.0;
};

StationarityReport stationarity_report(const ProblemSpec& p, const SolveResult& result);

}  // namespace geoalm
