#pragma once

#include <functional>
#include <vector>

#include "firstorder/linop.hpp"

namespace firstorder {

/// A convex function together with its proximal operator
/// prox_{t f}(v) = argmin_x t f(x) + ||x - v||^2 / 2.
struct ProxFn {
  std::function<double(const Vec&)> eval;       // +inf allowed
  std::function<Vec(const Vec&, double)> prox;  // (v, t), t > 0
};

/// A function and its convex conjugate; the two proxes are linked by the
/// Moreau decomposition v = prox_{t f}(v) + t prox_{f*/t}(v/t).
struct ConjugatePair {
  ProxFn f;
  ProxFn fstar;
};

/// ||v - prox_{t f}(v) - t prox_{f*/t}(v/t)||; zero for a valid pair.
double moreau_residual(const ConjugatePair& pair, const Vec& v, double t);

// ---- regularizer proxes -------------------------------------------------

/// Component-wise soft threshold sign(v_i) max(|v_i| - t, 0).
Vec prox_l1(const Vec& v, double t);

/// Block soft threshold: per group g, v_g * max(1 - t/||v_g||_2, 0).
/// `groups` must partition [0, v.size()).
Vec prox_group_l21(const Vec& v, double t,
                   const std::vector<std::vector<Index>>& groups);

/// Euclidean projection onto {z : ||z||_1 <= radius} (sort and threshold).
Vec project_l1_ball(const Vec& v, double radius);

/// Prox of the l_{1,inf} norm (sum over rows of the row-wise max-abs),
/// via Moreau decomposition through row-wise l1-ball projection.
Mat prox_l1inf(const Mat& v, double t);

/// Singular value soft thresholding: U soft(S, t) V^T.
Mat prox_trace_norm(const Mat& v, double t);

/// Prox of x^T Q x for symmetric psd Q: solves (I + 2 t Q) x = v.
Vec prox_quadratic(const Vec& v, double t, const Mat& q);

/// Reusable prox of x^T Q x with the eigendecomposition of Q cached, so the
/// coefficient t may change between applications (adaptive step sizes).
class QuadraticProx {
 public:
  explicit QuadraticProx(const Mat& q);
  Vec operator()(const Vec& v, double t) const;
  double value(const Vec& x) const;  // x^T Q x
  double max_eigenvalue() const { return max_eig_; }

 private:
  Mat q_;
  Mat eigvecs_;
  Vec eigvals_;
  double max_eig_ = 0.0;
};

/// Prox of <c,x> + indicator of the box [lo, hi]: clip(v - t c, lo, hi).
Vec prox_box_linear(const Vec& v, double t, const Vec& lo, const Vec& hi,
                    const Vec& c);

// ---- loss conjugate proxes (dual updates of the saddle form) ------------

/// Conjugate of the margin hinge sum_i max(0, 1 - u_i) under the
/// <1 - Kx, y> construction: F*(y) = -sum y_i + indicator of [0,1]^N.
/// Prox is clip(v + sigma, 0, 1).
Vec prox_hinge_conjugate(const Vec& v, double sigma);

/// Conjugate of the square loss ||z - b||^2 / 2: prox is (v - sigma b)/(1 + sigma).
Vec prox_square_conjugate(const Vec& v, double sigma, const Vec& b);

/// Conjugate of the absolute loss ||z - b||_1: prox is clip(v - sigma b, -1, 1).
Vec prox_abs_conjugate(const Vec& v, double sigma, const Vec& b);

/// Conjugate of the eps-insensitive loss sum_i max(|z_i - b_i| - eps, 0):
/// prox is clip(soft(v - sigma b, sigma eps), -1, 1).
Vec prox_eps_insensitive_conjugate(const Vec& v, double sigma, const Vec& b,
                                   double eps);

// ---- primal loss ProxFns (inputs to Moreau-envelope smoothing) ----------

/// F(u) = sum_i max(0, 1 - u_i), u the classification margins.
ProxFn hinge_margin_loss();
/// F(z) = ||z - b||_1.
ProxFn abs_loss(const Vec& b);
/// F(z) = sum_i max(|z_i - b_i| - eps, 0).
ProxFn eps_insensitive_loss(const Vec& b, double eps);
/// F(z) = ||z - b||^2 / 2.
ProxFn square_loss(const Vec& b);

/// Conjugate pairs for the registered losses, used by the Moreau
/// decomposition checks.
ConjugatePair square_loss_pair(const Vec& b);
ConjugatePair abs_loss_pair(const Vec& b);
ConjugatePair eps_insensitive_loss_pair(const Vec& b, double eps);
ConjugatePair hinge_margin_loss_pair(Index dim);
ConjugatePair l1_linf_ball_pair();

}  // namespace firstorder
