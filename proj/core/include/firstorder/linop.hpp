#pragma once

#include <Eigen/Dense>
#include <functional>

namespace firstorder {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// A linear map K between finite-dimensional spaces, with its adjoint and a
/// cached estimate of the induced (spectral) norm.
struct LinearOperator {
  Index in_dim = 0;
  Index out_dim = 0;
  std::function<Vec(const Vec&)> forward;
  std::function<Vec(const Vec&)> adjoint;
  double norm_estimate = 0.0;

  /// Dimension-checked forward map; throws std::invalid_argument on mismatch.
  Vec apply(const Vec& x) const;
  /// Dimension-checked adjoint map.
  Vec apply_adjoint(const Vec& y) const;
};

LinearOperator make_matrix_operator(const Mat& k);
LinearOperator make_identity_operator(Index dim);
LinearOperator make_zero_operator(Index in_dim, Index out_dim);

/// Spectral norm via power iteration on K*K from a seeded random start.
/// Returns the square root of the best Rayleigh quotient seen, so the result
/// is monotone non-decreasing in `iters` for a fixed seed and never exceeds
/// the true norm.
double estimate_norm(const LinearOperator& op, int iters = 100, unsigned seed = 0);

/// Safety factor applied to norm estimates before they enter step-size
/// bounds (tau*sigma <= 1/||K||^2 must hold even if the power iteration
/// slightly undershoots).
inline constexpr double kNormSafetyFactor = 1.02;

/// norm_estimate (computing it if unset) times the safety factor.
double safe_norm(const LinearOperator& op);

}  // namespace firstorder
