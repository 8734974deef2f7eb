#include "firstorder/linop.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace firstorder {

Vec LinearOperator::apply(const Vec& x) const {
  if (x.size() != in_dim)
    throw std::invalid_argument("LinearOperator::apply: expected dimension " +
                                std::to_string(in_dim) + ", got " +
                                std::to_string(x.size()));
  return forward(x);
}

Vec LinearOperator::apply_adjoint(const Vec& y) const {
  if (y.size() != out_dim)
    throw std::invalid_argument(
        "LinearOperator::apply_adjoint: expected dimension " +
        std::to_string(out_dim) + ", got " + std::to_string(y.size()));
  return adjoint(y);
}

LinearOperator make_matrix_operator(const Mat& k) {
  LinearOperator op;
  op.in_dim = k.cols();
  op.out_dim = k.rows();
  op.forward = [k](const Vec& x) -> Vec { return k * x; };
  op.adjoint = [k](const Vec& y) -> Vec { return k.transpose() * y; };
  op.norm_estimate = estimate_norm(op);
  return op;
}

LinearOperator make_identity_operator(Index dim) {
  LinearOperator op;
  op.in_dim = dim;
  op.out_dim = dim;
  op.forward = [](const Vec& x) -> Vec { return x; };
  op.adjoint = [](const Vec& y) -> Vec { return y; };
  op.norm_estimate = 1.0;
  return op;
}

LinearOperator make_zero_operator(Index in_dim, Index out_dim) {
  LinearOperator op;
  op.in_dim = in_dim;
  op.out_dim = out_dim;
  op.forward = [out_dim](const Vec&) -> Vec { return Vec::Zero(out_dim); };
  op.adjoint = [in_dim](const Vec&) -> Vec { return Vec::Zero(in_dim); };
  op.norm_estimate = 0.0;
  return op;
}

double estimate_norm(const LinearOperator& op, int iters, unsigned seed) {
  if (iters < 1) throw std::invalid_argument("estimate_norm: iters must be >= 1");
  if (op.in_dim == 0) return 0.0;

  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec x(op.in_dim);
  for (Index i = 0; i < op.in_dim; ++i) x[i] = gauss(rng);
  double xn = x.norm();
  if (xn == 0.0) x[0] = 1.0; else x /= xn;

  double best = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vec bx = op.adjoint(op.forward(x));  // (K*K) x
    double rayleigh = x.dot(bx);         // x normalized, so this is the quotient
    if (rayleigh > best) best = rayleigh;
    double bn = bx.norm();
    if (bn < 1e-300) break;  // zero operator (or x landed in the null space)
    x = bx / bn;
  }
  return std::sqrt(best);
}

double safe_norm(const LinearOperator& op) {
  double n = op.norm_estimate > 0.0 ? op.norm_estimate : estimate_norm(op);
  return n * kNormSafetyFactor;
}

}  // namespace firstorder
