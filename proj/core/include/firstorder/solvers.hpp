#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "firstorder/linop.hpp"
#include "firstorder/prox.hpp"

namespace firstorder {

struct SolverConfig {
  long max_iters = 10000;
  double theta = 1.0;          // relaxation, [0,1]
  double a_ratio = 1.0;        // a = sqrt(tau/sigma)
  double fobos_C = 1.0;        // eta_n = C / sqrt(n)
  double smooth_eps = 1e-2;    // Moreau-envelope smoothing parameter
  double kappa = 0.618;        // online L smoothing
  double online_L0 = 0.0;      // 0 -> 0.1 * ||K||
  long record_every = 1;
  unsigned seed = 0;
  // Generous: the online solver's optimistic start can overshoot by many
  // orders of magnitude before the step sizes adapt.
  double divergence_cap = 1e100;

  void validate() const;
};

struct TraceRecord {
  long iter = 0;
  double energy = 0.0;
  double elapsed_seconds = 0.0;
  std::optional<double> gap;
  std::optional<double> best_energy;
};

struct Trace {
  std::vector<TraceRecord> records;
};

/// A known saddle point of a test problem, enabling partial-gap recording.
struct GapOracle {
  Vec x_hat;
  Vec y_hat;
};

/// min_x max_y <Kx,y> + lambda G(x) - F*(y).
struct SaddleProblem {
  LinearOperator op;
  std::function<Vec(const Vec&, double)> prox_fstar;  // (v, sigma)
  std::function<Vec(const Vec&, double)> prox_g;      // (v, tau*lambda)
  std::function<double(const Vec&)> energy;
  double lambda = 1.0;
  // Optional evaluators, needed only for gap diagnostics. g_eval returns
  // lambda*G(x) (the full regularization term); fstar_eval returns F*(y).
  std::function<double(const Vec&)> fstar_eval;
  std::function<double(const Vec&)> g_eval;
};

/// min_x F(x) + lambda G(x) with F given by value and (sub)gradient.
struct CompositeProblem {
  Index dim = 0;
  std::function<double(const Vec&)> loss_value;
  std::function<Vec(const Vec&)> loss_grad;  // gradient, or a subgradient
  std::optional<double> loss_lipschitz;      // present iff the loss is smooth
  std::function<Vec(const Vec&, double)> prox_g;  // (v, tau*lambda)
  std::function<double(const Vec&)> energy;
  double lambda = 1.0;
};

struct OnlineDiagnostics {
  std::vector<double> ltilde_history;     // accepted curvature estimates
  std::vector<double> candidate_history;  // L^{n+1} = max(L^n, Ltilde), non-decreasing
  std::vector<double> l_history;          // smoothed L actually used
};

struct SolveResult {
  Vec x;
  Trace trace;
  OnlineDiagnostics online;  // populated by pdcp_online_solve only
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& solver, long iter);
  long iteration;
};

SolveResult pdcp_solve(const SaddleProblem& problem, const SolverConfig& config,
                       const GapOracle* gap = nullptr);
SolveResult pdcp_online_solve(const SaddleProblem& problem,
                              const SolverConfig& config,
                              const GapOracle* gap = nullptr);
SolveResult fobos_solve(const CompositeProblem& problem,
                        const SolverConfig& config);
SolveResult fista_solve(const CompositeProblem& problem,
                        const SolverConfig& config);

/// Moreau envelope of a non-smooth loss with a known prox:
/// F_eps(z) = min_u F(u) + ||u - z||^2 / (2 eps), gradient (z - prox_{eps F}(z))/eps,
/// Lipschitz constant 1/eps.
struct SmoothedLoss {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  double lipschitz = 0.0;
};
SmoothedLoss smooth_loss(const ProxFn& loss, double eps);

/// [<K x, y_hat> - F*(y_hat) + lambda G(x)] - [<K x_hat, y> - F*(y) + lambda G(x_hat)];
/// non-negative when (x_hat, y_hat) is a saddle point.
double partial_gap(const SaddleProblem& problem, const Vec& x, const Vec& y,
                   const Vec& x_hat, const Vec& y_hat);

/// t_{n+1} = (1 + sqrt(1 + 4 t_n^2)) / 2, the FISTA momentum recursion.
inline double fista_momentum_next(double t) {
  return (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
}

/// ||x_hat - x0|| / ||y_hat - y0||, the ratio minimizing the ergodic gap bound.
double optimal_ratio_hint(const Vec& x_hat, const Vec& y_hat, const Vec& x0,
                          const Vec& y0);

}  // namespace firstorder
