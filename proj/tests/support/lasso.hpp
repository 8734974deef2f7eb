// Small lasso instances (min ||A x - b||^2 / 2 + lambda ||x||_1) in both
// solver-facing forms, for solver tests.
#pragma once

#include "firstorder/solvers.hpp"

namespace test_support {

using firstorder::CompositeProblem;
using firstorder::Mat;
using firstorder::SaddleProblem;
using firstorder::Vec;

inline SaddleProblem lasso_saddle(const Mat& a, const Vec& b, double lambda) {
  SaddleProblem p;
  p.op = firstorder::make_matrix_operator(a);
  p.lambda = lambda;
  p.prox_fstar = [b](const Vec& v, double s) -> Vec {
    return firstorder::prox_square_conjugate(v, s, b);
  };
  p.prox_g = [](const Vec& v, double t) -> Vec {
    return firstorder::prox_l1(v, t);
  };
  p.energy = [a, b, lambda](const Vec& x) {
    return 0.5 * (a * x - b).squaredNorm() + lambda * x.lpNorm<1>();
  };
  p.fstar_eval = [b](const Vec& y) { return 0.5 * y.squaredNorm() + b.dot(y); };
  p.g_eval = [lambda](const Vec& x) { return lambda * x.lpNorm<1>(); };
  return p;
}

inline CompositeProblem lasso_composite(const Mat& a, const Vec& b,
                                        double lambda) {
  CompositeProblem p;
  p.dim = a.cols();
  p.lambda = lambda;
  p.loss_value = [a, b](const Vec& x) { return 0.5 * (a * x - b).squaredNorm(); };
  p.loss_grad = [a, b](const Vec& x) -> Vec { return a.transpose() * (a * x - b); };
  double n = firstorder::safe_norm(firstorder::make_matrix_operator(a));
  p.loss_lipschitz = n * n;
  p.prox_g = [](const Vec& v, double t) -> Vec { return firstorder::prox_l1(v, t); };
  p.energy = [a, b, lambda](const Vec& x) {
    return 0.5 * (a * x - b).squaredNorm() + lambda * x.lpNorm<1>();
  };
  return p;
}

}  // namespace test_support
