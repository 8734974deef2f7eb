#include "firstorder/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace firstorder {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoxTol = 1e-12;

void require_positive(double t, const char* who) {
  if (!(t > 0.0))
    throw std::invalid_argument(std::string(who) + ": parameter must be > 0");
}

double soft(double x, double t) {
  return std::copysign(std::max(std::abs(x) - t, 0.0), x);
}

bool in_box(const Vec& y, double lo, double hi) {
  return (y.array() >= lo - kBoxTol).all() && (y.array() <= hi + kBoxTol).all();
}

}  // namespace

double moreau_residual(const ConjugatePair& pair, const Vec& v, double t) {
  require_positive(t, "moreau_residual");
  Vec lhs = pair.f.prox(v, t) + t * pair.fstar.prox(v / t, 1.0 / t);
  return (v - lhs).norm();
}

Vec prox_l1(const Vec& v, double t) {
  require_positive(t, "prox_l1");
  return v.unaryExpr([t](double x) { return soft(x, t); });
}

Vec prox_group_l21(const Vec& v, double t,
                   const std::vector<std::vector<Index>>& groups) {
  require_positive(t, "prox_group_l21");
  std::vector<char> seen(static_cast<size_t>(v.size()), 0);
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("prox_group_l21: empty group");
    for (Index i : g) {
      if (i < 0 || i >= v.size() || seen[static_cast<size_t>(i)])
        throw std::invalid_argument("prox_group_l21: groups must partition the coordinates");
      seen[static_cast<size_t>(i)] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw std::invalid_argument("prox_group_l21: groups must cover all coordinates");

  Vec out = v;
  for (const auto& g : groups) {
    double nrm = 0.0;
    for (Index i : g) nrm += v[i] * v[i];
    nrm = std::sqrt(nrm);
    double scale = nrm > 0.0 ? std::max(1.0 - t / nrm, 0.0) : 0.0;
    for (Index i : g) out[i] = v[i] * scale;
  }
  return out;
}

Vec project_l1_ball(const Vec& v, double radius) {
  require_positive(radius, "project_l1_ball");
  if (v.lpNorm<1>() <= radius) return v;
  // Duchi et al. sort-and-threshold.
  std::vector<double> u(v.data(), v.data() + v.size());
  for (double& x : u) x = std::abs(x);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0, theta = 0.0;
  for (size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    double candidate = (cumsum - radius) / static_cast<double>(j + 1);
    if (candidate >= u[j] && j > 0) break;
    theta = candidate;
  }
  theta = std::max(theta, 0.0);
  return v.unaryExpr([theta](double x) { return soft(x, theta); });
}

Mat prox_l1inf(const Mat& v, double t) {
  require_positive(t, "prox_l1inf");
  Mat out(v.rows(), v.cols());
  for (Index r = 0; r < v.rows(); ++r) {
    Vec row = v.row(r).transpose();
    out.row(r) = (row - project_l1_ball(row, t)).transpose();
  }
  return out;
}

Mat prox_trace_norm(const Mat& v, double t) {
  require_positive(t, "prox_trace_norm");
  Eigen::JacobiSVD<Mat> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw std::runtime_error("prox_trace_norm: SVD did not converge");
  Vec s = svd.singularValues();
  for (Index i = 0; i < s.size(); ++i) s[i] = std::max(s[i] - t, 0.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

Vec prox_quadratic(const Vec& v, double t, const Mat& q) {
  require_positive(t, "prox_quadratic");
  if (q.rows() != q.cols() || q.rows() != v.size())
    throw std::invalid_argument("prox_quadratic: dimension mismatch");
  Mat system = Mat::Identity(v.size(), v.size()) + 2.0 * t * q;
  Eigen::LDLT<Mat> ldlt(system);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("prox_quadratic: factorization failed");
  return ldlt.solve(v);
}

QuadraticProx::QuadraticProx(const Mat& q) : q_((q + q.transpose()) / 2.0) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(q_);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("QuadraticProx: eigendecomposition failed");
  eigvecs_ = eig.eigenvectors();
  eigvals_ = eig.eigenvalues();
  max_eig_ = eigvals_.size() ? eigvals_.maxCoeff() : 0.0;
}

Vec QuadraticProx::operator()(const Vec& v, double t) const {
  require_positive(t, "QuadraticProx");
  Vec w = eigvecs_.transpose() * v;
  for (Index i = 0; i < w.size(); ++i) w[i] /= 1.0 + 2.0 * t * eigvals_[i];
  return eigvecs_ * w;
}

double QuadraticProx::value(const Vec& x) const { return x.dot(q_ * x); }

Vec prox_box_linear(const Vec& v, double t, const Vec& lo, const Vec& hi,
                    const Vec& c) {
  require_positive(t, "prox_box_linear");
  if (lo.size() != v.size() || hi.size() != v.size() || c.size() != v.size())
    throw std::invalid_argument("prox_box_linear: dimension mismatch");
  if ((lo.array() > hi.array()).any())
    throw std::invalid_argument("prox_box_linear: lo > hi");
  return (v - t * c).cwiseMax(lo).cwiseMin(hi);
}

Vec prox_hinge_conjugate(const Vec& v, double sigma) {
  require_positive(sigma, "prox_hinge_conjugate");
  return (v.array() + sigma).cwiseMax(0.0).cwiseMin(1.0).matrix();
}

Vec prox_square_conjugate(const Vec& v, double sigma, const Vec& b) {
  require_positive(sigma, "prox_square_conjugate");
  if (b.size() != v.size())
    throw std::invalid_argument("prox_square_conjugate: dimension mismatch");
  return (v - sigma * b) / (1.0 + sigma);
}

Vec prox_abs_conjugate(const Vec& v, double sigma, const Vec& b) {
  require_positive(sigma, "prox_abs_conjugate");
  if (b.size() != v.size())
    throw std::invalid_argument("prox_abs_conjugate: dimension mismatch");
  return (v - sigma * b).cwiseMax(-1.0).cwiseMin(1.0);
}

Vec prox_eps_insensitive_conjugate(const Vec& v, double sigma, const Vec& b,
                                   double eps) {
  require_positive(sigma, "prox_eps_insensitive_conjugate");
  if (eps < 0.0)
    throw std::invalid_argument("prox_eps_insensitive_conjugate: eps must be >= 0");
  if (b.size() != v.size())
    throw std::invalid_argument("prox_eps_insensitive_conjugate: dimension mismatch");
  Vec w = v - sigma * b;
  double th = sigma * eps;
  return w.unaryExpr([th](double x) { return soft(x, th); })
      .cwiseMax(-1.0)
      .cwiseMin(1.0);
}

ProxFn hinge_margin_loss() {
  ProxFn f;
  f.eval = [](const Vec& u) {
    return (1.0 - u.array()).cwiseMax(0.0).sum();
  };
  f.prox = [](const Vec& v, double t) -> Vec {
    require_positive(t, "hinge_margin_loss.prox");
    return v.unaryExpr([t](double x) {
      if (x >= 1.0) return x;
      if (x >= 1.0 - t) return 1.0;
      return x + t;
    });
  };
  return f;
}

ProxFn abs_loss(const Vec& b) {
  ProxFn f;
  f.eval = [b](const Vec& z) { return (z - b).lpNorm<1>(); };
  f.prox = [b](const Vec& v, double t) -> Vec {
    require_positive(t, "abs_loss.prox");
    return b + (v - b).unaryExpr([t](double x) { return soft(x, t); });
  };
  return f;
}

ProxFn eps_insensitive_loss(const Vec& b, double eps) {
  if (eps < 0.0) throw std::invalid_argument("eps_insensitive_loss: eps must be >= 0");
  ProxFn f;
  f.eval = [b, eps](const Vec& z) {
    return ((z - b).array().abs() - eps).cwiseMax(0.0).sum();
  };
  f.prox = [b, eps](const Vec& v, double t) -> Vec {
    require_positive(t, "eps_insensitive_loss.prox");
    Vec u = v - b;
    return b + u.unaryExpr([eps, t](double x) {
             double a = std::abs(x);
             if (a <= eps) return x;
             if (a <= eps + t) return std::copysign(eps, x);
             return x - std::copysign(t, x);
           });
  };
  return f;
}

ProxFn square_loss(const Vec& b) {
  ProxFn f;
  f.eval = [b](const Vec& z) { return 0.5 * (z - b).squaredNorm(); };
  f.prox = [b](const Vec& v, double t) -> Vec {
    require_positive(t, "square_loss.prox");
    return (v + t * b) / (1.0 + t);
  };
  return f;
}

ConjugatePair square_loss_pair(const Vec& b) {
  ConjugatePair p;
  p.f = square_loss(b);
  p.fstar.eval = [b](const Vec& y) { return 0.5 * y.squaredNorm() + b.dot(y); };
  p.fstar.prox = [b](const Vec& v, double s) -> Vec {
    return prox_square_conjugate(v, s, b);
  };
  return p;
}

ConjugatePair abs_loss_pair(const Vec& b) {
  ConjugatePair p;
  p.f = abs_loss(b);
  p.fstar.eval = [b](const Vec& y) {
    if (!in_box(y, -1.0, 1.0)) return kInf;
    return b.dot(y);
  };
  p.fstar.prox = [b](const Vec& v, double s) -> Vec {
    return prox_abs_conjugate(v, s, b);
  };
  return p;
}

ConjugatePair eps_insensitive_loss_pair(const Vec& b, double eps) {
  ConjugatePair p;
  p.f = eps_insensitive_loss(b, eps);
  p.fstar.eval = [b, eps](const Vec& y) {
    if (!in_box(y, -1.0, 1.0)) return kInf;
    return b.dot(y) + eps * y.lpNorm<1>();
  };
  p.fstar.prox = [b, eps](const Vec& v, double s) -> Vec {
    return prox_eps_insensitive_conjugate(v, s, b, eps);
  };
  return p;
}

ConjugatePair hinge_margin_loss_pair(Index dim) {
  // Conjugate of sum_i max(0, 1 - u_i): F*(y) = sum y_i on [-1, 0]^N.
  ConjugatePair p;
  p.f = hinge_margin_loss();
  p.fstar.eval = [](const Vec& y) {
    if (!in_box(y, -1.0, 0.0)) return kInf;
    return y.sum();
  };
  p.fstar.prox = [](const Vec& v, double s) -> Vec {
    require_positive(s, "hinge_margin_conjugate.prox");
    return (v.array() - s).cwiseMax(-1.0).cwiseMin(0.0).matrix();
  };
  (void)dim;
  return p;
}

ConjugatePair l1_linf_ball_pair() {
  ConjugatePair p;
  p.f.eval = [](const Vec& x) { return x.lpNorm<1>(); };
  p.f.prox = [](const Vec& v, double t) -> Vec { return prox_l1(v, t); };
  p.fstar.eval = [](const Vec& y) {
    return in_box(y, -1.0, 1.0) ? 0.0 : kInf;
  };
  p.fstar.prox = [](const Vec& v, double) -> Vec {
    return v.cwiseMax(-1.0).cwiseMin(1.0);
  };
  return p;
}

}  // namespace firstorder
