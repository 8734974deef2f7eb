#pragma once

#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "firstorder/solvers.hpp"

namespace firstorder {

struct SyntheticDataConfig {
  int n_samples = 50;
  int n_features = 20;
  int n_groups = 5;  // groups for feature selection, tasks for multi-task
  double sparsity = 0.2;
  double noise_sd = 0.1;
  unsigned seed = 0;
};

/// One of the benchmark problems in both solver-facing forms. The composite
/// (sub)gradient form feeds Fobos; `composite_smoothed` builds the FISTA
/// variant when the loss is non-smooth (null when the loss is already smooth
/// and `composite->loss_lipschitz` is set).
struct ProblemSpec {
  std::string name;
  double lambda = 1.0;
  Index dim = 0;
  SaddleProblem saddle;
  std::optional<CompositeProblem> composite;
  std::function<CompositeProblem(double eps)> composite_smoothed;
};

/// min over X of ||A X - B||_F^2 / 2 + lambda * sum of row norms of X.
ProblemSpec build_dim_reduction(const Mat& a, const Mat& b, double lambda);
ProblemSpec build_dim_reduction(const SyntheticDataConfig& cfg,
                                double lambda = 1.0, int n_targets = 5);

/// Hinge loss plus a quadratic regularizer x^T Q x (Q = identity).
ProblemSpec build_linear_svm(const Mat& features, const Vec& labels,
                             double lambda = 10.0);

/// Hinge loss on kernel expansions plus x^T H x, H a Gaussian RBF kernel.
/// The `_from_kernel` variant takes a precomputed psd kernel matrix.
ProblemSpec build_kernel_svm_primal(const Mat& features, const Vec& labels,
                                    double lambda = 1.0);
ProblemSpec build_kernel_svm_primal_from_kernel(const Mat& kernel,
                                                const Vec& labels,
                                                double lambda = 1.0);

/// Dual kernel SVM: x^T Hhat x / 2 - sum x_i over the box [0,1]^N, with
/// Hhat = diag(b) H diag(b) / (2 lambda). The loss is smooth.
ProblemSpec build_kernel_svm_dual(const Mat& features, const Vec& labels,
                                  double lambda = 1.0);
ProblemSpec build_kernel_svm_dual_from_kernel(const Mat& kernel,
                                              const Vec& labels,
                                              double lambda = 1.0);

/// ||A x - b||_1 + lambda * group lasso over equal-size feature groups.
ProblemSpec build_feature_selection(const Mat& a, const Vec& b, int n_groups,
                                    double lambda);
ProblemSpec build_feature_selection(const SyntheticDataConfig& cfg,
                                    double lambda = 1e-3);

/// Per-task eps-insensitive regression plus lambda * ||X||_{1,inf}.
/// `targets` is the stacked per-task target vector.
ProblemSpec build_multitask(const std::vector<Mat>& designs, const Vec& targets,
                            double lambda, double eps_width);
ProblemSpec build_multitask(const SyntheticDataConfig& cfg,
                            double lambda = 1e-3, double eps_width = 0.1);

/// Max-margin matrix factorization: hinge on observed +-1 entries plus
/// lambda * trace norm. Observations are (row, col, +-1) triples.
ProblemSpec build_matrix_factorization(
    const std::vector<std::tuple<int, int, double>>& observations, int rows,
    int cols, double lambda = 1e-5);

/// Desk-scale synthetic instances -----------------------------------------

/// Two Gaussian blobs with +-1 labels.
void make_blobs(const SyntheticDataConfig& cfg, Mat& features, Vec& labels);

/// Low-rank +-1 rating pattern with a random observation mask.
std::vector<std::tuple<int, int, double>> make_synthetic_ratings(
    int rows, int cols, double observed_fraction, unsigned seed);

/// Gaussian RBF kernel; bandwidth 0 selects the median pairwise distance.
Mat rbf_kernel(const Mat& features, double bandwidth = 0.0);

}  // namespace firstorder
