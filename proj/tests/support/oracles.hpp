// Test-only oracles, independent of the library's implementation paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

inline Vec random_vec(Index n, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

inline Mat random_mat(Index r, Index c, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Mat m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = gauss(rng);
  return m;
}

// One-sided (Hestenes) Jacobi SVD; returns singular values sorted
// descending. Independent of Eigen's SVD machinery.
inline std::vector<double> jacobi_singular_values(Mat a, double tol = 1e-13,
                                                  int max_sweeps = 60) {
  if (a.rows() < a.cols()) a = Mat(a.transpose());
  const Index n = a.cols();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool converged = true;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        double app = a.col(p).squaredNorm();
        double aqq = a.col(q).squaredNorm();
        double apq = a.col(p).dot(a.col(q));
        if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) continue;
        converged = false;
        double zeta = (aqq - app) / (2.0 * apq);
        double t = std::copysign(1.0, zeta) /
                   (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        Vec cp = a.col(p), cq = a.col(q);
        a.col(p) = c * cp - s * cq;
        a.col(q) = s * cp + c * cq;
      }
    }
    if (converged) break;
  }
  std::vector<double> sv;
  for (Index j = 0; j < n; ++j) sv.push_back(a.col(j).norm());
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

// Minimizes phi(p) = t f(p) + ||p - v||^2 / 2 by cyclic coordinate-wise
// golden-section search. Requires f finite near the minimizer.
inline Vec prox_argmin(const std::function<double(const Vec&)>& f, const Vec& v,
                       double t, double span = 0.0, int rounds = 400) {
  auto phi = [&](const Vec& p) { return t * f(p) + 0.5 * (p - v).squaredNorm(); };
  double width = span > 0.0 ? span : 2.0 * (v.cwiseAbs().maxCoeff() + t + 1.0);
  Vec p = v;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int round = 0; round < rounds; ++round) {
    double w = width * std::pow(0.85, round);
    if (w < 1e-14) break;
    for (Index i = 0; i < p.size(); ++i) {
      double lo = p[i] - w, hi = p[i] + w;
      double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
      Vec pa = p, pb = p;
      pa[i] = x1;
      pb[i] = x2;
      double f1 = phi(pa), f2 = phi(pb);
      for (int it = 0; it < 90; ++it) {
        if (f1 < f2) {
          hi = x2; x2 = x1; f2 = f1;
          x1 = hi - gr * (hi - lo);
          pa[i] = x1; f1 = phi(pa);
        } else {
          lo = x1; x1 = x2; f1 = f2;
          x2 = lo + gr * (hi - lo);
          pb[i] = x2; f2 = phi(pb);
        }
      }
      p[i] = (lo + hi) / 2.0;
    }
  }
  return p;
}

// Projection onto {||z||_1 <= r} by exhaustive active-set enumeration over
// supports (KKT solve per support); dimensions <= 4.
inline Vec l1_ball_projection_qp(const Vec& v, double r) {
  if (v.lpNorm<1>() <= r) return v;
  const Index n = v.size();
  Vec best = Vec::Zero(n);
  double best_obj = 0.5 * v.squaredNorm();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<Index> support;
    for (Index i = 0; i < n; ++i)
      if (mask & (1u << i)) support.push_back(i);
    double abs_sum = 0.0;
    for (Index i : support) abs_sum += std::abs(v[i]);
    double mu = (abs_sum - r) / static_cast<double>(support.size());
    if (mu < 0.0) continue;
    Vec z = Vec::Zero(n);
    bool ok = true;
    for (Index i : support) {
      double zi = std::abs(v[i]) - mu;
      if (zi <= 0.0) { ok = false; break; }
      z[i] = std::copysign(zi, v[i]);
    }
    if (!ok) continue;
    for (Index i = 0; i < n; ++i)
      if (!(mask & (1u << i)) && std::abs(v[i]) > mu) { ok = false; break; }
    if (!ok) continue;
    double obj = 0.5 * (z - v).squaredNorm();
    if (obj < best_obj) { best_obj = obj; best = z; }
  }
  return best;
}

// Exhaustive coordinate descent for min ||A x - b||^2 / 2 + lambda ||x||_1,
// run to machine precision.
inline Vec lasso_coordinate_descent(const Mat& a, const Vec& b, double lambda,
                                    long max_rounds = 2000000) {
  const Index n = a.cols();
  Vec x = Vec::Zero(n);
  Vec col_sq(n);
  for (Index j = 0; j < n; ++j) col_sq[j] = a.col(j).squaredNorm();
  Vec residual = -b;  // A x - b
  for (long round = 0; round < max_rounds; ++round) {
    double max_change = 0.0;
    for (Index j = 0; j < n; ++j) {
      double old = x[j];
      double rho = a.col(j).dot(residual - a.col(j) * old);  // gradient part
      double raw = -rho / col_sq[j];
      double thr = lambda / col_sq[j];
      double next = std::copysign(std::max(std::abs(raw) - thr, 0.0), raw);
      if (next != old) {
        residual += a.col(j) * (next - old);
        x[j] = next;
        max_change = std::max(max_change, std::abs(next - old));
      }
    }
    if (max_change < 1e-16) break;
  }
  return x;
}

}  // namespace oracles
