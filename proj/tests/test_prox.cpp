#include <doctest.h>

#include <random>

#include "firstorder/prox.hpp"
#include "support/oracles.hpp"
#include "support/prox_cases.hpp"

using namespace firstorder;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("soft threshold closed forms") {
  CHECK(prox_l1(vec({2}), 1.0)[0] == doctest::Approx(1.0));
  CHECK(prox_l1(vec({0.5}), 1.0)[0] == doctest::Approx(0.0));
  Vec p = prox_l1(vec({-3, 0.2}), 0.5);
  CHECK(p[0] == doctest::Approx(-2.5));
  CHECK(p[1] == doctest::Approx(0.0));
  CHECK_THROWS_AS(prox_l1(vec({1}), 0.0), std::invalid_argument);
}

TEST_CASE("group l21 shrinkage") {
  std::vector<std::vector<Index>> one_group{{0, 1}};
  // Numerical argmin oracle confirms the closed-form (2.4, 3.2) for (3,4), t=1.
  Vec p = prox_group_l21(vec({3, 4}), 1.0, one_group);
  CHECK(p[0] == doctest::Approx(2.4));
  CHECK(p[1] == doctest::Approx(3.2));
  Vec q = oracles::prox_argmin(
      [](const Vec& x) { return x.norm(); }, vec({3, 4}), 1.0);
  CHECK((p - q).norm() < 1e-6);

  Vec z = prox_group_l21(vec({0.3, 0.4}), 1.0, one_group);
  CHECK(z.norm() == doctest::Approx(0.0));

  Vec tiny = prox_group_l21(vec({3, 4}), 1e-12, one_group);
  CHECK((tiny - vec({3, 4})).norm() < 1e-10);

  CHECK_THROWS_AS(prox_group_l21(vec({1, 2}), 1.0, {{0, 1}, {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(prox_group_l21(vec({1, 2}), 1.0, {{0}}), std::invalid_argument);
  CHECK_THROWS_AS(prox_group_l21(vec({1, 2}), 1.0, {{0, 0}, {1}}),
                  std::invalid_argument);
}

TEST_CASE("l1 ball projection") {
  CHECK((project_l1_ball(vec({0.5, 0.5}), 1.0) - vec({0.5, 0.5})).norm() == 0.0);
  CHECK((project_l1_ball(vec({2, 0}), 1.0) - vec({1, 0})).norm() < 1e-12);
  CHECK((project_l1_ball(vec({1, 1}), 1.0) - vec({0.5, 0.5})).norm() < 1e-12);

  // Matches the active-set QP oracle on random low-dimensional cases.
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Index n = 2 + trial % 3;
    Vec v = oracles::random_vec(n, rng, 2.0);
    double r = 0.1 + std::abs(oracles::random_vec(1, rng)[0]);
    Vec got = project_l1_ball(v, r);
    Vec expected = oracles::l1_ball_projection_qp(v, r);
    CHECK((got - expected).norm() < 1e-8);
    CHECK(got.lpNorm<1>() <= r * (1.0 + 1e-12));
  }
}

TEST_CASE("l1inf prox") {
  Mat row(1, 2);
  row << 2, 0;
  Mat p = prox_l1inf(row, 1.0);
  CHECK(p(0, 0) == doctest::Approx(1.0));
  CHECK(p(0, 1) == doctest::Approx(0.0));
  // numerical argmin oracle over the two variables
  Vec q = oracles::prox_argmin(
      [](const Vec& x) { return x.cwiseAbs().maxCoeff(); }, vec({2, 0}), 1.0);
  CHECK(std::abs(p(0, 0) - q[0]) < 1e-6);
  CHECK(std::abs(p(0, 1) - q[1]) < 1e-6);

  Mat small(2, 2);
  small << 0.2, 0.3, -0.1, 0.4;  // every row has ||row||_1 <= 1
  CHECK(prox_l1inf(small, 1.0).norm() == doctest::Approx(0.0));

  Mat big(2, 2);
  big << 3, -2, 1, 5;
  CHECK((prox_l1inf(big, 1e-12) - big).norm() < 1e-10);
}

TEST_CASE("trace norm prox") {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = 1;
  Mat p = prox_trace_norm(d, 2.0);
  CHECK(p(0, 0) == doctest::Approx(1.0));
  CHECK(p(1, 1) == doctest::Approx(0.0).epsilon(1e-12));

  Mat small(2, 2);
  small << 0.1, 0.05, -0.02, 0.08;
  CHECK(prox_trace_norm(small, 1.0).norm() == doctest::Approx(0.0));

  // Spectra shift by t; subspaces preserved (checked through the shifted
  // singular values from the independent Jacobi oracle).
  std::mt19937 rng(23);
  Mat m = oracles::random_mat(4, 3, rng);
  double t = 0.4;
  Mat out = prox_trace_norm(m, t);
  auto sv_in = oracles::jacobi_singular_values(m);
  auto sv_out = oracles::jacobi_singular_values(out);
  for (size_t i = 0; i < sv_out.size(); ++i)
    CHECK(sv_out[i] == doctest::Approx(std::max(sv_in[i] - t, 0.0)).epsilon(1e-9));
  // Left/right subspaces preserved: the prox commutes with the original map
  // on the dominant subspace, so M^T out must be symmetric psd.
  Mat cross = m.transpose() * out;
  CHECK((cross - cross.transpose()).norm() < 1e-9);

  double tn_in = 0.0, tn_out = 0.0;
  for (double s : sv_in) tn_in += s;
  for (double s : sv_out) tn_out += s;
  CHECK(tn_out <= tn_in);
  CHECK((prox_trace_norm(m, 1e-12) - m).norm() < 1e-8);
}

TEST_CASE("quadratic prox") {
  Vec v = vec({2, -4});
  CHECK((prox_quadratic(v, 0.5, Mat::Identity(2, 2)) - v / 2.0).norm() < 1e-12);
  CHECK((prox_quadratic(v, 1.0, Mat::Zero(2, 2)) - v).norm() < 1e-12);
  Mat q = Mat::Zero(2, 2);
  q(0, 0) = 1;
  q(1, 1) = 2;
  Vec p = prox_quadratic(vec({3, 5}), 1.0, q);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(1.0));

  QuadraticProx cached(q);
  CHECK((cached(vec({3, 5}), 1.0) - p).norm() < 1e-12);
  CHECK(cached.max_eigenvalue() == doctest::Approx(2.0));
}

TEST_CASE("loss conjugate proxes: closed forms") {
  CHECK(prox_hinge_conjugate(vec({0.5}), 0.3)[0] == doctest::Approx(0.8));
  CHECK(prox_hinge_conjugate(vec({0.9}), 0.5)[0] == doctest::Approx(1.0));
  CHECK(prox_hinge_conjugate(vec({-2}), 0.5)[0] == doctest::Approx(0.0));

  CHECK(prox_square_conjugate(vec({2}), 1.0, vec({0}))[0] == doctest::Approx(1.0));
  CHECK(prox_square_conjugate(vec({2}), 1e-12, vec({0}))[0] ==
        doctest::Approx(2.0).epsilon(1e-9));

  Vec pa = prox_abs_conjugate(vec({2, -0.5}), 0.7, vec({0, 0}));
  CHECK(pa[0] == doctest::Approx(1.0));
  CHECK(pa[1] == doctest::Approx(-0.5));
  Vec v2 = vec({1.4, -0.6});
  CHECK(prox_abs_conjugate(v2, 2.0, Vec(v2 / 2.0)).norm() == doctest::Approx(0.0));

  // eps = 0 reduces to the absolute-loss conjugate
  std::mt19937 rng(29);
  Vec v = oracles::random_vec(4, rng), b = oracles::random_vec(4, rng);
  CHECK((prox_eps_insensitive_conjugate(v, 0.8, b, 0.0) -
         prox_abs_conjugate(v, 0.8, b))
            .norm() < 1e-14);
  CHECK(prox_eps_insensitive_conjugate(vec({2}), 0.5, vec({0}), 1.0)[0] ==
        doctest::Approx(1.0));  // soft(2, 0.5) = 1.5, clipped to 1

  Vec lo = vec({0}), hi = vec({1}), c = vec({-1});
  CHECK(prox_box_linear(vec({0.5}), 0.3, lo, hi, c)[0] == doctest::Approx(0.8));
  CHECK(prox_box_linear(vec({-9}), 0.3, lo, hi, c)[0] == doctest::Approx(0.0));
  CHECK_THROWS_AS(prox_box_linear(vec({0}), 1.0, vec({2}), vec({1}), vec({0})),
                  std::invalid_argument);
}

TEST_CASE("Moreau decomposition for all registered pairs") {
  std::mt19937 rng(31);
  for (auto& [name, pair] : prox_cases::conjugate_pairs()) {
    CAPTURE(name);
    for (double t : {0.1, 1.0, 10.0}) {
      for (int trial = 0; trial < 25; ++trial) {
        Vec v = oracles::random_vec(4, rng, 2.0);
        CHECK(moreau_residual(pair, v, t) <= 1e-10);
      }
    }
  }

  // self-conjugate square case: prox halves twice
  ConjugatePair sq = square_loss_pair(Vec::Zero(1));
  CHECK(moreau_residual(sq, vec({2}), 1.0) <= 1e-12);
  // l1 / linf-ball: 3 = 2 + 1
  CHECK(moreau_residual(l1_linf_ball_pair(), vec({3}), 1.0) <= 1e-12);
}

TEST_CASE("argmin characterization and nonexpansiveness (sampled)") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> tdist(0.05, 3.0);
  for (const auto& pc : prox_cases::catalogue()) {
    CAPTURE(pc.name);
    for (int trial = 0; trial < 40; ++trial) {
      Vec v = oracles::random_vec(pc.dim, rng, 2.0);
      double t = tdist(rng);
      Vec p = pc.prox(v, t);
      double obj = t * pc.eval(p) + 0.5 * (p - v).squaredNorm();
      for (int pert = 0; pert < 40; ++pert) {
        Vec d = oracles::random_vec(pc.dim, rng, 0.3);
        if (d.norm() > 1.0) d /= d.norm();
        Vec alt = p + d;
        double alt_obj = t * pc.eval(alt) + 0.5 * (alt - v).squaredNorm();
        CHECK(obj <= alt_obj + 1e-9);
      }
      Vec v2 = oracles::random_vec(pc.dim, rng, 2.0);
      Vec p2 = pc.prox(v2, t);
      CHECK((p - p2).norm() <= (v - v2).norm() * (1.0 + 1e-12));
    }
  }
}
