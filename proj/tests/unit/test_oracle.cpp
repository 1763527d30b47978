#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "aicsel/errors.hpp"
#include "aicsel/oracle.hpp"
#include "test_util.hpp"

namespace aicsel {
namespace {

TEST(Oracle, EmbedGhzTwo) {
  const auto d = oracle::embed(ghz_state(2));
  ASSERT_EQ(d.rho.rows(), 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const bool corner = (r == 0 || r == 3) && (c == 0 || c == 3);
      EXPECT_NEAR(std::abs(d.rho(r, c) - Complex(corner ? 0.5 : 0.0)), 0.0, 1e-14);
    }
  }
}

TEST(Oracle, TraceAndPurity) {
  const auto g3 = oracle::embed(ghz_state(3));
  EXPECT_NEAR(g3.rho.trace().real(), 1.0, 1e-12);
  EXPECT_NEAR((g3.rho * g3.rho).trace().real(), 1.0, 1e-12);
  const auto r = oracle::embed(random_pi_state(5, 2));
  EXPECT_NEAR(r.rho.trace().real(), 1.0, 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.rho);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
}

TEST(Oracle, MaximallyMixedIsUnbiasedCoins) {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 6; ++n) {
    const auto d = oracle::embed(maximally_mixed_state(n));
    EXPECT_LT((d.rho - Eigen::MatrixXcd::Identity(d.rho.rows(), d.rho.cols()) / double(d.rho.rows()))
                  .norm(),
              1e-12);
    const auto p = oracle::brute_distribution(d, testing::random_setting(rng));
    for (int k = 0; k <= n; ++k) EXPECT_NEAR(p[k], double(binomial(n, k)) / std::ldexp(1.0, n), 1e-12);
  }
}

TEST(Oracle, GhzAlongZ) {
  for (int n = 2; n <= 6; ++n) {
    const auto p = oracle::brute_distribution(oracle::embed(ghz_state(n)), Setting::from_angles(0, 0));
    EXPECT_NEAR(p[0], 0.5, 1e-12);
    EXPECT_NEAR(p[n], 0.5, 1e-12);
  }
}

TEST(Oracle, PermutationInvariance) {
  for (int n = 2; n <= 6; ++n) {
    const auto d = oracle::embed(random_pi_state(n, 31 + n));
    for (int q = 0; q + 1 < n; ++q) {
      std::vector<int> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = i;
      std::swap(perm[q], perm[q + 1]);
      const auto v = oracle::permutation_unitary(n, perm);
      EXPECT_LT((v * d.rho * v.adjoint() - d.rho).norm(), 1e-9) << n << " " << q;
    }
  }
}

TEST(Oracle, ReadBackInvertsEmbed) {
  for (int n = 2; n <= 6; ++n) {
    const PIState s = random_pi_state(n, 5 * n);
    const PIState back = oracle::read_back(oracle::embed(s));
    for (std::size_t b = 0; b < s.block_count(); ++b) {
      EXPECT_NEAR(back.block(b).weight, s.block(b).weight, 1e-10);
      EXPECT_LT((back.block(b).rho - s.block(b).rho).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

// The keystone check: block-diagonal probabilities equal brute force.
TEST(Oracle, BlockEngineMatchesBruteForce) {
  std::mt19937_64 rng(2718);
  for (int n = 2; n <= 6; ++n) {
    const auto plan = generate_plan(n);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const PIState s = random_pi_state(n, rng());
      const auto dense = oracle::embed(s);
      for (int t = 0; t < 10; ++t) {
        const Setting& st = plan.settings[(i + t) % plan.settings.size()];
        const auto pb = outcome_distribution(s, st);
        const auto po = oracle::brute_distribution(dense, st);
        for (int k = 0; k <= n; ++k) worst = std::max(worst, std::abs(pb[k] - po[k]));
      }
    }
    EXPECT_LT(worst, 1e-9) << "N=" << n;
  }
}

TEST(Oracle, RejectsLargeN) {
  EXPECT_THROW(oracle::embed(ghz_state(7)), Unsupported);
  EXPECT_THROW(oracle::schur_basis(9), Unsupported);
}

}  // namespace
}  // namespace aicsel
