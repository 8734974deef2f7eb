#include "firstorder/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace firstorder {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoxTol = 1e-9;

Mat gaussian_matrix(Index rows, Index cols, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = gauss(rng);
  return m;
}

void check_labels(const Vec& labels) {
  for (Index i = 0; i < labels.size(); ++i)
    if (labels[i] != 1.0 && labels[i] != -1.0)
      throw std::invalid_argument("labels must be +1 or -1");
}

double row_l21(const Mat& x) {
  double s = 0.0;
  for (Index r = 0; r < x.rows(); ++r) s += x.row(r).norm();
  return s;
}

double l1inf_norm(const Mat& x) {
  double s = 0.0;
  for (Index r = 0; r < x.rows(); ++r) s += x.row(r).cwiseAbs().maxCoeff();
  return s;
}

double trace_norm(const Mat& x) {
  return Eigen::JacobiSVD<Mat>(x).singularValues().sum();
}

double hinge_sum(const Vec& margins) {
  return (1.0 - margins.array()).cwiseMax(0.0).sum();
}

// Margin-hinge saddle pieces shared by the SVM-style problems. The saddle
// operator is -diag(b) * (data map), so that max over y in [0,1]^N of
// <Kx, y> + sum y_i recovers sum_i max(0, 1 - b_i <a_i, x>).
std::function<double(const Vec&)> hinge_fstar_eval() {
  return [](const Vec& y) {
    if ((y.array() < -kBoxTol).any() || (y.array() > 1.0 + kBoxTol).any())
      return kInf;
    return -y.sum();
  };
}

Eigen::Map<const Mat> as_matrix(const Vec& v, Index rows, Index cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

Vec flatten(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}

}  // namespace

void make_blobs(const SyntheticDataConfig& cfg, Mat& features, Vec& labels) {
  std::mt19937 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  features.resize(cfg.n_samples, cfg.n_features);
  labels.resize(cfg.n_samples);
  Vec center = Vec::Zero(cfg.n_features);
  for (Index j = 0; j < center.size(); ++j) center[j] = gauss(rng);
  center *= 1.5 / center.norm() * std::sqrt(double(cfg.n_features));
  for (int i = 0; i < cfg.n_samples; ++i) {
    double sign = (i % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j < cfg.n_features; ++j)
      features(i, j) = sign * center[j] / std::sqrt(double(cfg.n_features)) +
                       gauss(rng);
    labels[i] = sign;
  }
}

std::vector<std::tuple<int, int, double>> make_synthetic_ratings(
    int rows, int cols, double observed_fraction, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Mat u = gaussian_matrix(rows, 2, rng), v = gaussian_matrix(cols, 2, rng);
  Mat scores = u * v.transpose();
  std::vector<std::tuple<int, int, double>> obs;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (unif(rng) < observed_fraction)
        obs.emplace_back(i, j, scores(i, j) >= 0.0 ? 1.0 : -1.0);
  if (obs.empty()) obs.emplace_back(0, 0, 1.0);
  return obs;
}

Mat rbf_kernel(const Mat& features, double bandwidth) {
  const Index n = features.rows();
  Mat d2(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      d2(i, j) = (features.row(i) - features.row(j)).squaredNorm();
  double h = bandwidth;
  if (h <= 0.0) {
    std::vector<double> dists;
    dists.reserve(static_cast<size_t>(n * (n - 1) / 2));
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) dists.push_back(std::sqrt(d2(i, j)));
    if (dists.empty()) {
      h = 1.0;
    } else {
      std::nth_element(dists.begin(), dists.begin() + dists.size() / 2,
                       dists.end());
      h = dists[dists.size() / 2];
      if (h <= 0.0) h = 1.0;
    }
  }
  return (-d2.array() / (2.0 * h * h)).exp().matrix();
}

ProblemSpec build_dim_reduction(const Mat& a, const Mat& b_mat, double lambda) {
  if (a.rows() < 1 || a.cols() < 1 || b_mat.cols() < 1)
    throw std::invalid_argument("build_dim_reduction: degenerate dimensions");
  if (a.rows() != b_mat.rows())
    throw std::invalid_argument("build_dim_reduction: A and B row counts differ");
  const Index m = a.rows(), d = a.cols(), k = b_mat.cols();
  Vec b = flatten(b_mat);

  ProblemSpec spec;
  spec.name = "dim_reduction";
  spec.lambda = lambda;
  spec.dim = d * k;

  LinearOperator op;
  op.in_dim = d * k;
  op.out_dim = m * k;
  op.forward = [a, d, k](const Vec& x) -> Vec {
    return flatten(a * as_matrix(x, d, k));
  };
  op.adjoint = [a, d, k, m](const Vec& y) -> Vec {
    return flatten(a.transpose() * as_matrix(y, m, k));
  };
  op.norm_estimate = estimate_norm(op);

  std::vector<std::vector<Index>> groups(static_cast<size_t>(d));
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < k; ++c) groups[static_cast<size_t>(r)].push_back(r + c * d);

  spec.saddle.op = op;
  spec.saddle.lambda = lambda;
  spec.saddle.prox_fstar = [b](const Vec& v, double s) -> Vec {
    return prox_square_conjugate(v, s, b);
  };
  spec.saddle.prox_g = [groups](const Vec& v, double t) -> Vec {
    if (t == 0.0) return v;  // lambda = 0: G vanishes
    return prox_group_l21(v, t, groups);
  };
  spec.saddle.energy = [op, b, lambda, d, k](const Vec& x) {
    return 0.5 * (op.forward(x) - b).squaredNorm() +
           lambda * row_l21(as_matrix(x, d, k));
  };
  spec.saddle.fstar_eval = [b](const Vec& y) {
    return 0.5 * y.squaredNorm() + b.dot(y);
  };
  spec.saddle.g_eval = [lambda, d, k](const Vec& x) {
    return lambda * row_l21(as_matrix(x, d, k));
  };

  CompositeProblem comp;
  comp.dim = d * k;
  comp.lambda = lambda;
  comp.loss_value = [a, b_mat, d, k](const Vec& x) {
    return 0.5 * (a * as_matrix(x, d, k) - b_mat).squaredNorm();
  };
  comp.loss_grad = [a, b_mat, d, k](const Vec& x) -> Vec {
    return flatten(a.transpose() * (a * as_matrix(x, d, k) - b_mat));
  };
  double an = safe_norm(op);
  comp.loss_lipschitz = an * an;
  comp.prox_g = spec.saddle.prox_g;
  comp.energy = [comp_loss = comp.loss_value, lambda, d, k](const Vec& x) {
    return comp_loss(x) + lambda * row_l21(as_matrix(x, d, k));
  };
  spec.composite = comp;
  return spec;
}

ProblemSpec build_dim_reduction(const SyntheticDataConfig& cfg, double lambda,
                                int n_targets) {
  if (cfg.n_samples < 1 || cfg.n_features < 1 || n_targets < 1)
    throw std::invalid_argument("build_dim_reduction: degenerate dimensions");
  const Index m = cfg.n_samples, d = cfg.n_features, k = n_targets;
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Mat a = gaussian_matrix(m, d, rng);
  Mat x_true = Mat::Zero(d, k);
  for (Index r = 0; r < d; ++r)
    if (unif(rng) < cfg.sparsity) x_true.row(r) = gaussian_matrix(1, k, rng);
  Mat b_mat = a * x_true + cfg.noise_sd * gaussian_matrix(m, k, rng);
  return build_dim_reduction(a, b_mat, lambda);
}

namespace {

// Common assembly for the hinge + quadratic problems (linear and kernel
// primal SVM). `data` maps x to the per-sample scores <a_i, x>.
ProblemSpec build_hinge_quadratic(const std::string& name, const Mat& data,
                                  const Vec& labels, double lambda,
                                  std::shared_ptr<QuadraticProx> quad,
                                  std::function<double(const Vec&)> quad_value) {
  check_labels(labels);
  if (data.rows() != labels.size())
    throw std::invalid_argument(name + ": feature/label count mismatch");
  Mat margins_map = labels.asDiagonal() * data;  // rows b_i a_i

  ProblemSpec spec;
  spec.name = name;
  spec.lambda = lambda;
  spec.dim = data.cols();

  LinearOperator op = make_matrix_operator(-margins_map);
  spec.saddle.op = op;
  spec.saddle.lambda = lambda;
  spec.saddle.prox_fstar = [](const Vec& v, double s) -> Vec {
    return prox_hinge_conjugate(v, s);
  };
  spec.saddle.prox_g = [quad](const Vec& v, double t) -> Vec {
    return (*quad)(v, t);
  };
  spec.saddle.energy = [op, lambda, quad_value](const Vec& x) {
    return (1.0 + op.forward(x).array()).cwiseMax(0.0).sum() +
           lambda * quad_value(x);
  };
  spec.saddle.fstar_eval = hinge_fstar_eval();
  spec.saddle.g_eval = [lambda, quad_value](const Vec& x) {
    return lambda * quad_value(x);
  };

  CompositeProblem comp;
  comp.dim = spec.dim;
  comp.lambda = lambda;
  comp.loss_value = [margins_map](const Vec& x) {
    return hinge_sum(margins_map * x);
  };
  comp.loss_grad = [margins_map](const Vec& x) -> Vec {
    Vec u = margins_map * x;
    Vec s(u.size());
    for (Index i = 0; i < u.size(); ++i) s[i] = u[i] < 1.0 ? -1.0 : 0.0;
    return margins_map.transpose() * s;
  };
  comp.prox_g = spec.saddle.prox_g;
  comp.energy = [margins_map, lambda, quad_value](const Vec& x) {
    return hinge_sum(margins_map * x) + lambda * quad_value(x);
  };
  spec.composite = comp;

  double kn = safe_norm(op);
  spec.composite_smoothed = [margins_map, comp, kn](double eps) {
    SmoothedLoss sl = smooth_loss(hinge_margin_loss(), eps);
    CompositeProblem sm = comp;
    sm.loss_value = [margins_map, sl](const Vec& x) {
      return sl.value(margins_map * x);
    };
    sm.loss_grad = [margins_map, sl](const Vec& x) -> Vec {
      return margins_map.transpose() * sl.grad(margins_map * x);
    };
    sm.loss_lipschitz = sl.lipschitz * kn * kn;
    return sm;  // energy stays the original non-smooth energy
  };
  return spec;
}

}  // namespace

ProblemSpec build_linear_svm(const Mat& features, const Vec& labels,
                             double lambda) {
  auto quad = std::make_shared<QuadraticProx>(
      Mat::Identity(features.cols(), features.cols()));
  return build_hinge_quadratic("linear_svm", features, labels, lambda, quad,
                               [](const Vec& x) { return x.squaredNorm(); });
}

ProblemSpec build_kernel_svm_primal_from_kernel(const Mat& h, const Vec& labels,
                                                double lambda) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("build_kernel_svm_primal: kernel must be square");
  Eigen::SelfAdjointEigenSolver<Mat> eig((h + h.transpose()) / 2.0);
  double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < -1e-8 * scale)
    throw std::invalid_argument("build_kernel_svm_primal: kernel matrix is not psd");
  auto quad = std::make_shared<QuadraticProx>(h);
  return build_hinge_quadratic("kernel_svm_primal", h, labels, lambda, quad,
                               [h](const Vec& x) { return x.dot(h * x); });
}

ProblemSpec build_kernel_svm_primal(const Mat& features, const Vec& labels,
                                    double lambda) {
  return build_kernel_svm_primal_from_kernel(rbf_kernel(features), labels,
                                             lambda);
}

ProblemSpec build_kernel_svm_dual_from_kernel(const Mat& h, const Vec& labels,
                                              double lambda) {
  check_labels(labels);
  if (!(lambda > 0.0))
    throw std::invalid_argument("build_kernel_svm_dual: lambda must be > 0");
  if (h.rows() != h.cols() || h.rows() != labels.size())
    throw std::invalid_argument("build_kernel_svm_dual: kernel/label shape mismatch");
  const Index n = h.rows();
  Mat hhat = (labels.asDiagonal() * h * labels.asDiagonal()) / (2.0 * lambda);
  hhat = (hhat + hhat.transpose()) / 2.0;

  Eigen::SelfAdjointEigenSolver<Mat> eig(hhat);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("build_kernel_svm_dual: eigendecomposition failed");
  double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < -1e-8 * scale)
    throw std::invalid_argument("build_kernel_svm_dual: kernel matrix is not psd");
  Vec evals = eig.eigenvalues().cwiseMax(0.0);
  Mat factor = evals.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
  double max_eig = evals.maxCoeff();

  ProblemSpec spec;
  spec.name = "kernel_svm_dual";
  spec.lambda = 1.0;  // G enters the energy unscaled; lambda is inside Hhat
  spec.dim = n;

  Vec lo = Vec::Zero(n), hi = Vec::Ones(n), c = Vec::Constant(n, -1.0);
  auto box_energy_term = [lo, hi](const Vec& x) {
    if ((x.array() < -kBoxTol).any() || (x.array() > 1.0 + kBoxTol).any())
      return kInf;
    return -x.sum();
  };

  LinearOperator op = make_matrix_operator(factor);
  op.norm_estimate = std::sqrt(max_eig);
  spec.saddle.op = op;
  spec.saddle.lambda = 1.0;
  spec.saddle.prox_fstar = [](const Vec& v, double s) -> Vec {
    return v / (1.0 + s);
  };
  spec.saddle.prox_g = [lo, hi, c](const Vec& v, double t) -> Vec {
    return prox_box_linear(v, t, lo, hi, c);
  };
  spec.saddle.energy = [op, box_energy_term](const Vec& x) {
    double lin = box_energy_term(x);
    if (std::isinf(lin)) return kInf;
    return 0.5 * op.forward(x).squaredNorm() + lin;
  };
  spec.saddle.fstar_eval = [](const Vec& y) { return 0.5 * y.squaredNorm(); };
  spec.saddle.g_eval = box_energy_term;

  CompositeProblem comp;
  comp.dim = n;
  comp.lambda = 1.0;
  comp.loss_value = [hhat](const Vec& x) { return 0.5 * x.dot(hhat * x); };
  comp.loss_grad = [hhat](const Vec& x) -> Vec { return hhat * x; };
  comp.loss_lipschitz = std::max(max_eig, 1e-12);
  comp.prox_g = spec.saddle.prox_g;
  comp.energy = [hhat, box_energy_term](const Vec& x) {
    double lin = box_energy_term(x);
    if (std::isinf(lin)) return kInf;
    return 0.5 * x.dot(hhat * x) + lin;
  };
  spec.composite = comp;
  return spec;
}

ProblemSpec build_kernel_svm_dual(const Mat& features, const Vec& labels,
                                  double lambda) {
  return build_kernel_svm_dual_from_kernel(rbf_kernel(features), labels,
                                           lambda);
}

ProblemSpec build_feature_selection(const Mat& a, const Vec& b, int n_groups,
                                    double lambda) {
  const Index m = a.rows(), d = a.cols(), g = n_groups;
  if (m < 1 || d < 1 || g < 1 || d % g != 0)
    throw std::invalid_argument(
        "build_feature_selection: n_features must be a positive multiple of n_groups");
  if (b.size() != m)
    throw std::invalid_argument("build_feature_selection: A/b size mismatch");
  const Index per = d / g;
  std::vector<std::vector<Index>> groups(static_cast<size_t>(g));
  for (Index j = 0; j < g; ++j)
    for (Index i = 0; i < per; ++i) groups[static_cast<size_t>(j)].push_back(j * per + i);

  ProblemSpec spec;
  spec.name = "feature_selection";
  spec.lambda = lambda;
  spec.dim = d;

  LinearOperator op = make_matrix_operator(a);
  auto group_norm = [groups](const Vec& x) {
    double s = 0.0;
    for (const auto& grp : groups) {
      double nn = 0.0;
      for (Index i : grp) nn += x[i] * x[i];
      s += std::sqrt(nn);
    }
    return s;
  };

  spec.saddle.op = op;
  spec.saddle.lambda = lambda;
  spec.saddle.prox_fstar = [b](const Vec& v, double s) -> Vec {
    return prox_abs_conjugate(v, s, b);
  };
  spec.saddle.prox_g = [groups](const Vec& v, double t) -> Vec {
    if (t == 0.0) return v;  // lambda = 0: G vanishes
    return prox_group_l21(v, t, groups);
  };
  spec.saddle.energy = [op, b, lambda, group_norm](const Vec& x) {
    return (op.forward(x) - b).lpNorm<1>() + lambda * group_norm(x);
  };
  spec.saddle.fstar_eval = [b](const Vec& y) {
    if ((y.array().abs() > 1.0 + kBoxTol).any()) return kInf;
    return b.dot(y);
  };
  spec.saddle.g_eval = [lambda, group_norm](const Vec& x) {
    return lambda * group_norm(x);
  };

  CompositeProblem comp;
  comp.dim = d;
  comp.lambda = lambda;
  comp.loss_value = [a, b](const Vec& x) { return (a * x - b).lpNorm<1>(); };
  comp.loss_grad = [a, b](const Vec& x) -> Vec {
    Vec r = a * x - b;
    return a.transpose() * r.array().sign().matrix();
  };
  comp.prox_g = spec.saddle.prox_g;
  comp.energy = [a, b, lambda, group_norm](const Vec& x) {
    return (a * x - b).lpNorm<1>() + lambda * group_norm(x);
  };
  spec.composite = comp;

  double kn = safe_norm(op);
  spec.composite_smoothed = [a, b, comp, kn](double eps) {
    SmoothedLoss sl = smooth_loss(abs_loss(b), eps);
    CompositeProblem sm = comp;
    sm.loss_value = [a, sl](const Vec& x) { return sl.value(a * x); };
    sm.loss_grad = [a, sl](const Vec& x) -> Vec {
      return a.transpose() * sl.grad(a * x);
    };
    sm.loss_lipschitz = sl.lipschitz * kn * kn;
    return sm;
  };
  return spec;
}

ProblemSpec build_feature_selection(const SyntheticDataConfig& cfg,
                                    double lambda) {
  const Index m = cfg.n_samples, d = cfg.n_features, g = cfg.n_groups;
  if (m < 1 || d < 1 || g < 1 || d % g != 0)
    throw std::invalid_argument(
        "build_feature_selection: n_features must be a positive multiple of n_groups");
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat a = gaussian_matrix(m, d, rng);
  const Index per = d / g;
  Vec x_true = Vec::Zero(d);
  for (Index j = 0; j < g; ++j)
    if (unif(rng) < cfg.sparsity || j == 0)
      for (Index i = 0; i < per; ++i) x_true[j * per + i] = gauss(rng);
  Vec b = a * x_true;
  for (Index i = 0; i < m; ++i) b[i] += cfg.noise_sd * gauss(rng);
  return build_feature_selection(a, b, cfg.n_groups, lambda);
}

ProblemSpec build_multitask(const std::vector<Mat>& designs, const Vec& targets,
                            double lambda, double eps_width) {
  const Index tasks = static_cast<Index>(designs.size());
  if (tasks < 1 || designs[0].rows() < 1 || designs[0].cols() < 1)
    throw std::invalid_argument("build_multitask: degenerate dimensions");
  const Index m = designs[0].rows(), d = designs[0].cols();
  for (const Mat& dm : designs)
    if (dm.rows() != m || dm.cols() != d)
      throw std::invalid_argument("build_multitask: task design shapes differ");
  if (targets.size() != m * tasks)
    throw std::invalid_argument("build_multitask: target vector size mismatch");
  if (eps_width < 0.0)
    throw std::invalid_argument("build_multitask: eps_width must be >= 0");
  const Vec& b = targets;

  ProblemSpec spec;
  spec.name = "multitask";
  spec.lambda = lambda;
  spec.dim = d * tasks;

  LinearOperator op;
  op.in_dim = d * tasks;
  op.out_dim = m * tasks;
  op.forward = [designs, d, m, tasks](const Vec& x) -> Vec {
    auto xm = as_matrix(x, d, tasks);
    Vec out(m * tasks);
    for (Index t = 0; t < tasks; ++t)
      out.segment(t * m, m) = designs[static_cast<size_t>(t)] * xm.col(t);
    return out;
  };
  op.adjoint = [designs, d, m, tasks](const Vec& y) -> Vec {
    Mat out(d, tasks);
    for (Index t = 0; t < tasks; ++t)
      out.col(t) = designs[static_cast<size_t>(t)].transpose() * y.segment(t * m, m);
    return flatten(out);
  };
  op.norm_estimate = estimate_norm(op);

  spec.saddle.op = op;
  spec.saddle.lambda = lambda;
  spec.saddle.prox_fstar = [b, eps_width](const Vec& v, double s) -> Vec {
    return prox_eps_insensitive_conjugate(v, s, b, eps_width);
  };
  spec.saddle.prox_g = [d, tasks](const Vec& v, double t) -> Vec {
    if (t == 0.0) return v;  // lambda = 0: G vanishes
    return flatten(prox_l1inf(as_matrix(v, d, tasks), t));
  };
  spec.saddle.energy = [op, b, eps_width, lambda, d, tasks](const Vec& x) {
    Vec r = op.forward(x) - b;
    return (r.array().abs() - eps_width).cwiseMax(0.0).sum() +
           lambda * l1inf_norm(as_matrix(x, d, tasks));
  };
  spec.saddle.fstar_eval = [b, eps_width](const Vec& y) {
    if ((y.array().abs() > 1.0 + kBoxTol).any()) return kInf;
    return b.dot(y) + eps_width * y.lpNorm<1>();
  };
  spec.saddle.g_eval = [lambda, d, tasks](const Vec& x) {
    return lambda * l1inf_norm(as_matrix(x, d, tasks));
  };

  CompositeProblem comp;
  comp.dim = spec.dim;
  comp.lambda = lambda;
  comp.loss_value = [op, b, eps_width](const Vec& x) {
    return ((op.forward(x) - b).array().abs() - eps_width).cwiseMax(0.0).sum();
  };
  comp.loss_grad = [op, b, eps_width](const Vec& x) -> Vec {
    Vec r = op.forward(x) - b;
    Vec s(r.size());
    for (Index i = 0; i < r.size(); ++i)
      s[i] = std::abs(r[i]) > eps_width ? (r[i] > 0.0 ? 1.0 : -1.0) : 0.0;
    return op.adjoint(s);
  };
  comp.prox_g = spec.saddle.prox_g;
  comp.energy = spec.saddle.energy;
  spec.composite = comp;

  double kn = safe_norm(op);
  spec.composite_smoothed = [op, b, eps_width, comp, kn](double eps) {
    SmoothedLoss sl = smooth_loss(eps_insensitive_loss(b, eps_width), eps);
    CompositeProblem sm = comp;
    sm.loss_value = [op, sl](const Vec& x) { return sl.value(op.forward(x)); };
    sm.loss_grad = [op, sl](const Vec& x) -> Vec {
      return op.adjoint(sl.grad(op.forward(x)));
    };
    sm.loss_lipschitz = sl.lipschitz * kn * kn;
    return sm;
  };
  return spec;
}

ProblemSpec build_multitask(const SyntheticDataConfig& cfg, double lambda,
                            double eps_width) {
  const Index tasks = cfg.n_groups, m = cfg.n_samples, d = cfg.n_features;
  if (tasks < 1 || m < 1 || d < 1)
    throw std::invalid_argument("build_multitask: degenerate dimensions");
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Mat> designs;
  for (Index t = 0; t < tasks; ++t) designs.push_back(gaussian_matrix(m, d, rng));
  Mat x_true = Mat::Zero(d, tasks);
  for (Index r = 0; r < d; ++r)
    if (unif(rng) < cfg.sparsity || r == 0)
      x_true.row(r) = gaussian_matrix(1, tasks, rng);
  Vec b(m * tasks);
  for (Index t = 0; t < tasks; ++t) {
    Vec bt = designs[static_cast<size_t>(t)] * x_true.col(t);
    for (Index i = 0; i < m; ++i) b[t * m + i] = bt[i] + cfg.noise_sd * gauss(rng);
  }
  return build_multitask(designs, b, lambda, eps_width);
}

ProblemSpec build_matrix_factorization(
    const std::vector<std::tuple<int, int, double>>& observations, int rows,
    int cols, double lambda) {
  if (observations.empty())
    throw std::invalid_argument("build_matrix_factorization: no observations");
  std::vector<char> seen(static_cast<size_t>(rows) * static_cast<size_t>(cols), 0);
  for (const auto& [i, j, s] : observations) {
    if (i < 0 || i >= rows || j < 0 || j >= cols)
      throw std::invalid_argument("build_matrix_factorization: index out of shape");
    if (s != 1.0 && s != -1.0)
      throw std::invalid_argument("build_matrix_factorization: ratings must be +-1");
    size_t cell = static_cast<size_t>(i) + static_cast<size_t>(j) * rows;
    if (seen[cell])
      throw std::invalid_argument("build_matrix_factorization: duplicate observation");
    seen[cell] = 1;
  }

  const Index n_obs = static_cast<Index>(observations.size());
  const Index dim = static_cast<Index>(rows) * cols;
  auto obs = std::make_shared<std::vector<std::tuple<int, int, double>>>(observations);

  ProblemSpec spec;
  spec.name = "matrix_factorization";
  spec.lambda = lambda;
  spec.dim = dim;

  // Selection operator with the hinge sign flip: (Kx)_p = -s_p X_{ij}. The
  // rows hit distinct cells, so ||K|| = 1 exactly.
  LinearOperator op;
  op.in_dim = dim;
  op.out_dim = n_obs;
  op.forward = [obs, rows](const Vec& x) -> Vec {
    Vec out(static_cast<Index>(obs->size()));
    for (size_t p = 0; p < obs->size(); ++p) {
      const auto& [i, j, s] = (*obs)[p];
      out[static_cast<Index>(p)] = -s * x[i + static_cast<Index>(j) * rows];
    }
    return out;
  };
  op.adjoint = [obs, rows, dim](const Vec& y) -> Vec {
    Vec out = Vec::Zero(dim);
    for (size_t p = 0; p < obs->size(); ++p) {
      const auto& [i, j, s] = (*obs)[p];
      out[i + static_cast<Index>(j) * rows] -= s * y[static_cast<Index>(p)];
    }
    return out;
  };
  op.norm_estimate = 1.0;

  spec.saddle.op = op;
  spec.saddle.lambda = lambda;
  spec.saddle.prox_fstar = [](const Vec& v, double s) -> Vec {
    return prox_hinge_conjugate(v, s);
  };
  spec.saddle.prox_g = [rows, cols](const Vec& v, double t) -> Vec {
    if (t == 0.0) return v;  // lambda = 0: G vanishes
    return flatten(prox_trace_norm(as_matrix(v, rows, cols), t));
  };
  spec.saddle.energy = [op, lambda, rows, cols](const Vec& x) {
    return (1.0 + op.forward(x).array()).cwiseMax(0.0).sum() +
           lambda * trace_norm(as_matrix(x, rows, cols));
  };
  spec.saddle.fstar_eval = hinge_fstar_eval();
  spec.saddle.g_eval = [lambda, rows, cols](const Vec& x) {
    return lambda * trace_norm(as_matrix(x, rows, cols));
  };

  CompositeProblem comp;
  comp.dim = dim;
  comp.lambda = lambda;
  comp.loss_value = [obs, rows](const Vec& x) {
    double e = 0.0;
    for (const auto& [i, j, s] : *obs)
      e += std::max(0.0, 1.0 - s * x[i + static_cast<Index>(j) * rows]);
    return e;
  };
  comp.loss_grad = [obs, rows, dim](const Vec& x) -> Vec {
    Vec g = Vec::Zero(dim);
    for (const auto& [i, j, s] : *obs) {
      Index cell = i + static_cast<Index>(j) * rows;
      if (s * x[cell] < 1.0) g[cell] -= s;
    }
    return g;
  };
  comp.prox_g = spec.saddle.prox_g;
  comp.energy = [loss = comp.loss_value, lambda, rows, cols](const Vec& x) {
    return loss(x) + lambda * trace_norm(as_matrix(x, rows, cols));
  };
  spec.composite = comp;

  spec.composite_smoothed = [obs, rows, dim, comp](double eps) {
    SmoothedLoss sl = smooth_loss(hinge_margin_loss(), eps);
    CompositeProblem sm = comp;
    // Natural (unflipped) margins u_p = s_p X_{ij}; ||selection|| = 1.
    auto margins = [obs, rows](const Vec& x) -> Vec {
      Vec u(static_cast<Index>(obs->size()));
      for (size_t p = 0; p < obs->size(); ++p) {
        const auto& [i, j, s] = (*obs)[p];
        u[static_cast<Index>(p)] = s * x[i + static_cast<Index>(j) * rows];
      }
      return u;
    };
    sm.loss_value = [margins, sl](const Vec& x) { return sl.value(margins(x)); };
    sm.loss_grad = [obs, rows, dim, margins, sl](const Vec& x) -> Vec {
      Vec gm = sl.grad(margins(x));
      Vec g = Vec::Zero(dim);
      for (size_t p = 0; p < obs->size(); ++p) {
        const auto& [i, j, s] = (*obs)[p];
        g[i + static_cast<Index>(j) * rows] += s * gm[static_cast<Index>(p)];
      }
      return g;
    };
    sm.loss_lipschitz = sl.lipschitz;
    return sm;
  };
  return spec;
}

}  // namespace firstorder
