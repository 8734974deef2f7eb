#include "firstorder/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace firstorder {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_energy(double e, const char* solver, long iter, double cap) {
  if (!std::isfinite(e) || e > cap) throw DivergenceError(solver, iter);
}

bool should_record(long n, long max_iters, long every) {
  return n % every == 0 || n == max_iters;
}

}  // namespace

DivergenceError::DivergenceError(const std::string& solver, long iter)
    : std::runtime_error(solver + ": divergence detected at iteration " +
                         std::to_string(iter)),
      iteration(iter) {}

void SolverConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("SolverConfig: theta must be in [0,1]");
  if (!(a_ratio > 0.0) || !(fobos_C > 0.0) || !(smooth_eps > 0.0) ||
      !(kappa > 0.0))
    throw std::invalid_argument("SolverConfig: step constants must be > 0");
  if (record_every < 1)
    throw std::invalid_argument("SolverConfig: record_every must be >= 1");
}

double partial_gap(const SaddleProblem& p, const Vec& x, const Vec& y,
                   const Vec& x_hat, const Vec& y_hat) {
  if (!p.fstar_eval || !p.g_eval)
    throw std::invalid_argument("partial_gap: problem lacks F*/G evaluators");
  double fy = p.fstar_eval(y);
  if (std::isinf(fy)) return std::numeric_limits<double>::infinity();
  double lhs = p.op.apply(x).dot(y_hat) - p.fstar_eval(y_hat) + p.g_eval(x);
  double rhs = p.op.apply(x_hat).dot(y) - fy + p.g_eval(x_hat);
  return lhs - rhs;
}

double optimal_ratio_hint(const Vec& x_hat, const Vec& y_hat, const Vec& x0,
                          const Vec& y0) {
  double dy = (y_hat - y0).norm();
  if (dy == 0.0)
    throw std::invalid_argument("optimal_ratio_hint: ||y_hat - y0|| is zero");
  return (x_hat - x0).norm() / dy;
}

SmoothedLoss smooth_loss(const ProxFn& loss, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("smooth_loss: eps must be > 0");
  SmoothedLoss s;
  s.value = [loss, eps](const Vec& z) {
    Vec u = loss.prox(z, eps);
    return loss.eval(u) + (u - z).squaredNorm() / (2.0 * eps);
  };
  s.grad = [loss, eps](const Vec& z) -> Vec {
    return (z - loss.prox(z, eps)) / eps;
  };
  s.lipschitz = 1.0 / eps;
  return s;
}

namespace {

// Shared iteration body for PD CP and its online variant; `adapt` toggles
// the step-size adaptation.
SolveResult pdcp_impl(const SaddleProblem& p, const SolverConfig& cfg,
                      const GapOracle* gap, bool adapt, const char* name) {
  cfg.validate();
  const Index dx = p.op.in_dim, dy = p.op.out_dim;
  const double a = cfg.a_ratio;
  const double norm_k = safe_norm(p.op);

  double l_smooth;
  if (adapt) {
    l_smooth = cfg.online_L0 > 0.0 ? cfg.online_L0
                                   : std::max(0.1 * p.op.norm_estimate, 1e-8);
  } else {
    l_smooth = norm_k > 0.0 ? norm_k : 1.0;
  }
  double l_candidate = l_smooth;
  double tau = a / l_smooth;
  double sigma = 1.0 / (a * l_smooth);

  Vec x = Vec::Zero(dx), y = Vec::Zero(dy);
  Vec x_sum = Vec::Zero(dx), y_sum = Vec::Zero(dy);
  Vec kx = p.op.apply(x);
  Vec dx_prev;  // x^n - x^{n-1}, empty until the first primal step
  Vec kdx_prev;

  SolveResult res;
  auto t0 = Clock::now();

  for (long n = 1; n <= cfg.max_iters; ++n) {
    Vec y_old = y;
    // K x_bar from the cached K x: x_bar = x + theta (x - x_prev), so
    // K x_bar = kx + theta * K(x - x_prev).
    Vec arg = y + sigma * (dx_prev.size() ? Vec(kx + cfg.theta * kdx_prev)
                                          : kx);
    y = p.prox_fstar(arg, sigma);

    if (adapt && dx_prev.size()) {
      double ndx = dx_prev.norm();
      double ndy = (y - y_old).norm();
      if (ndx * ndy > 1e-14) {
        double ltilde = kdx_prev.dot(y - y_old) / (ndx * ndy);
        res.online.ltilde_history.push_back(ltilde);
        l_candidate = std::max(l_candidate, ltilde);
        l_smooth = (l_smooth + cfg.kappa * std::max(l_smooth, l_candidate)) /
                   (1.0 + cfg.kappa);
      }
      res.online.candidate_history.push_back(l_candidate);
      res.online.l_history.push_back(l_smooth);
    }

    Vec x_old = x;
    x = p.prox_g(x - tau * p.op.apply_adjoint(y), tau * p.lambda);
    dx_prev = x - x_old;
    Vec kx_new = p.op.apply(x);
    kdx_prev = kx_new - kx;
    kx = kx_new;

    x_sum += x;
    y_sum += y;

    if (adapt) {
      tau = a / l_smooth;
      sigma = 1.0 / (a * l_smooth);
    }

    if (should_record(n, cfg.max_iters, cfg.record_every)) {
      double e = p.energy(x);
      check_energy(e, name, n, cfg.divergence_cap);
      TraceRecord rec{n, e, seconds_since(t0), std::nullopt, std::nullopt};
      if (gap) {
        double nn = static_cast<double>(n);
        rec.gap = partial_gap(p, x_sum / nn, y_sum / nn, gap->x_hat, gap->y_hat);
      }
      res.trace.records.push_back(rec);
    }
  }
  res.x = x;
  return res;
}

}  // namespace

SolveResult pdcp_solve(const SaddleProblem& p, const SolverConfig& cfg,
                       const GapOracle* gap) {
  return pdcp_impl(p, cfg, gap, false, "pdcp");
}

SolveResult pdcp_online_solve(const SaddleProblem& p, const SolverConfig& cfg,
                              const GapOracle* gap) {
  return pdcp_impl(p, cfg, gap, true, "pdcp_online");
}

SolveResult fobos_solve(const CompositeProblem& p, const SolverConfig& cfg) {
  cfg.validate();
  Vec x = Vec::Zero(p.dim);
  Vec best_x = x;
  double best = std::numeric_limits<double>::infinity();

  SolveResult res;
  auto t0 = Clock::now();
  for (long n = 1; n <= cfg.max_iters; ++n) {
    double eta = cfg.fobos_C / std::sqrt(static_cast<double>(n));
    x = p.prox_g(x - eta * p.loss_grad(x), eta * p.lambda);
    if (should_record(n, cfg.max_iters, cfg.record_every)) {
      double e = p.energy(x);
      check_energy(e, "fobos", n, cfg.divergence_cap);
      if (e < best) {
        best = e;
        best_x = x;
      }
      res.trace.records.push_back(
          TraceRecord{n, e, seconds_since(t0), std::nullopt, best});
    }
  }
  res.x = best_x;
  return res;
}

SolveResult fista_solve(const CompositeProblem& p, const SolverConfig& cfg) {
  cfg.validate();
  if (!p.loss_lipschitz)
    throw std::invalid_argument(
        "fista_solve: loss has no Lipschitz constant; smooth it first");
  const double lip = *p.loss_lipschitz;
  if (!(lip > 0.0))
    throw std::invalid_argument("fista_solve: Lipschitz constant must be > 0");

  Vec x = Vec::Zero(p.dim), z = x;
  double t = 1.0;

  SolveResult res;
  auto t0 = Clock::now();
  for (long n = 1; n <= cfg.max_iters; ++n) {
    Vec x_new = p.prox_g(z - p.loss_grad(z) / lip, p.lambda / lip);
    double t_new = fista_momentum_next(t);
    z = x_new + ((t - 1.0) / t_new) * (x_new - x);
    x = x_new;
    t = t_new;
    if (should_record(n, cfg.max_iters, cfg.record_every)) {
      double e = p.energy(x);
      check_energy(e, "fista", n, cfg.divergence_cap);
      res.trace.records.push_back(
          TraceRecord{n, e, seconds_since(t0), std::nullopt, std::nullopt});
    }
  }
  res.x = x;
  return res;
}

}  // namespace firstorder
