#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "aicsel/errors.hpp"
#include "aicsel/estimation.hpp"
#include "aicsel/selection.hpp"

namespace aicsel {
namespace {

CountsDataset single_setting(int n, const Setting& s, std::vector<std::uint64_t> hist) {
  CountsDataset d;
  d.nQubits = n;
  d.perSetting.push_back(SettingCounts{s, std::move(hist)});
  return d;
}

CountsDataset perturbed_dataset(int n, double q, std::uint64_t shots, std::uint64_t seed) {
  SweepConfig c;
  c.nQubits = n;
  c.q = q;
  c.base = ThreeParamState{n, 0.0, 0.0, 1.0};
  c.baseSeed = seed;
  return sample_dataset(true_state(c, 0), generate_plan(n), shots, seed + 1);
}

TEST(LogLikelihood, FairCoinArithmetic) {
  const auto data = single_setting(1, Setting::from_angles(0.3, 0.2), {3, 1});
  EXPECT_NEAR(log_likelihood(maximally_mixed_state(1), data), 4 * std::log(0.5), 1e-12);
  EXPECT_NEAR(4 * std::log(0.5), -2.7726, 5e-5);
}

TEST(LogLikelihood, EmptyDatasetIsZero) {
  CountsDataset empty;
  empty.nQubits = 4;
  EXPECT_EQ(log_likelihood(ghz_state(4), empty), 0.0);
  EXPECT_EQ(log_likelihood(ThreeParamState{4, 0, 0, 1}, empty), 0.0);
}

TEST(LogLikelihood, BoundedByEmpirical) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    const auto data = sample_dataset(random_pi_state(n, rng()), generate_plan(n), 500, rng());
    const double bound = empirical_log_likelihood(data);
    EXPECT_LE(log_likelihood(random_pi_state(n, rng()), data), bound + 1e-9);
    EXPECT_LE(log_likelihood(ThreeParamState{n, 0.1, 0.2, 0.5}, data), bound + 1e-9);
  }
}

TEST(LogLikelihood, ThreeParamFastPathAgrees) {
  const auto data = perturbed_dataset(6, 0.05, 2000, 3);
  const ThreeParamState t{6, -0.2, 1.3, 0.7};
  EXPECT_NEAR(log_likelihood(t, data), log_likelihood(t.to_pi_state(), data), 1e-8);
}

// The fitter's real-arithmetic engine against the complex outcome table.
TEST(LogLikelihood, MatchesOutcomeDistributions) {
  for (int n : {2, 5, 8}) {
    const PIState s = random_pi_state(n, 40 + n);
    const auto data = sample_dataset(s, generate_plan(n), 50 * setting_count(n), 3);
    double expected = 0.0;
    for (const auto& sc : data.perSetting) {
      const auto p = outcome_distribution(s, sc.setting);
      for (int k = 0; k <= n; ++k) {
        if (sc.histogram[k] > 0) expected += double(sc.histogram[k]) * std::log(p[k]);
      }
    }
    EXPECT_NEAR(log_likelihood(s, data), expected, 1e-9 * std::abs(expected)) << "N=" << n;
  }
}

TEST(LogLikelihood, ImpossibleDataIsMinusInfinity) {
  // Only the j = 1/2 block carries weight, so k = 0 and k = 3 cannot occur.
  const PIState s(3, {PIBlock{SpinLabel(3), 0.0, BlockMatrix::Identity(4, 4) / 4.0},
                      PIBlock{SpinLabel(1), 1.0, BlockMatrix::Identity(2, 2) / 2.0}});
  const auto data = single_setting(3, Setting::from_angles(0.5, 0.5), {1, 2, 0, 0});
  EXPECT_EQ(log_likelihood(s, data), -std::numeric_limits<double>::infinity());
}

TEST(FitThreeParam, RecoversGhz) {
  const int n = 4;
  const auto plan = generate_plan(n);
  const auto data = sample_dataset(ghz_state(n), plan, 100'000 * plan.settings.size(), 11);
  const auto fit = fit_three_param(data);
  ASSERT_TRUE(fit.params);
  EXPECT_NEAR(fit.params->epsilon, 0.0, 0.02);
  EXPECT_NEAR(fit.params->phi, 0.0, 0.02);
  EXPECT_NEAR(fit.params->delta, 1.0, 0.02);
  EXPECT_TRUE(fit.converged);
}

TEST(FitThreeParam, RecoversGenericPoint) {
  const int n = 5;
  const auto plan = generate_plan(n);
  const auto data = sample_dataset(three_param_state(n, 0.3, 0.7, 0.9), plan,
                                   100'000 * plan.settings.size(), 12);
  const auto fit = fit_three_param(data);
  EXPECT_NEAR(fit.params->epsilon, 0.3, 0.02);
  EXPECT_NEAR(fit.params->phi, 0.7, 0.02);
  EXPECT_NEAR(fit.params->delta, 0.9, 0.02);
  EXPECT_NEAR(fit.logLikelihood, log_likelihood(*fit.params, data), 1e-9);
}

TEST(FitThreeParam, NeverWorseThanGrid) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + trial % 8;
    const auto data = sample_dataset(random_pi_state(n, rng()), generate_plan(n), 300, rng());
    const auto fit = fit_three_param(data);
    EXPECT_GE(fit.logLikelihood, three_param_grid_best(data) - 1e-12);
    EXPECT_GE(fit.params->phi, -std::numbers::pi);
    EXPECT_LT(fit.params->phi, std::numbers::pi);
  }
}

TEST(FitThreeParam, RejectsEmpty) {
  CountsDataset empty;
  empty.nQubits = 3;
  EXPECT_THROW(fit_three_param(empty), InvalidArgument);
  EXPECT_THROW(fit_pi(empty), InvalidArgument);
}

TEST(FitPi, SaturatesSingleSetting) {
  const int n = 5;
  const auto data = single_setting(n, Setting::from_angles(0.0, 0.0), {37, 0, 0, 0, 0, 63});
  const auto fit = fit_pi(data);
  const auto p = outcome_distribution(fit.state, data.perSetting[0].setting);
  EXPECT_NEAR(p[0], 0.37, 1e-8);
  EXPECT_NEAR(p[5], 0.63, 1e-8);
  EXPECT_NEAR(fit.logLikelihood, empirical_log_likelihood(data), 1e-6);
}

TEST(FitPi, MonotoneAndPhysicalAtEveryStep) {
  const auto data = perturbed_dataset(6, 0.05, 3000, 8);
  double previous = -std::numeric_limits<double>::infinity();
  int accepted = 0;
  PiFitOptions opts;
  opts.onAccepted = [&](int, double ll, const std::vector<BlockMatrix>& w) {
    EXPECT_GE(ll, previous);
    previous = ll;
    ++accepted;
    double trace = 0.0;
    for (const auto& b : w) {
      trace += b.trace().real();
      Eigen::SelfAdjointEigenSolver<BlockMatrix> es(b, Eigen::EigenvaluesOnly);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    }
    EXPECT_NEAR(trace, 1.0, 1e-10);
  };
  const auto fit = fit_pi(data, opts);
  EXPECT_GT(accepted, 0);
  EXPECT_EQ(fit.state.invariant_violation(), "");
}

TEST(FitPi, StationaryAtConvergence) {
  const auto data = perturbed_dataset(5, 0.02, 2100, 21);
  const auto fit = fit_pi(data);
  EXPECT_TRUE(fit.converged);
  EXPECT_LT(pi_stationarity(fit.state, data), 1e-5);
}

TEST(FitPi, Deterministic) {
  const auto data = perturbed_dataset(4, 0.1, 600, 5);
  const auto a = fit_pi(data), b = fit_pi(data);
  EXPECT_EQ(a.logLikelihood, b.logLikelihood);
  EXPECT_EQ(a.iterations, b.iterations);
  const auto c = fit_three_param(data), d = fit_three_param(data);
  EXPECT_EQ(c.logLikelihood, d.logLikelihood);
}

TEST(Nestedness, PiNeverBelowThreeParam) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> qdist(0.0, 0.1);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 8;
    const std::uint64_t shots = setting_count(n) * (1 + trial % 5) * 10;
    const auto data = perturbed_dataset(n, qdist(rng), shots, rng());
    const double l3 = fit_three_param(data).logLikelihood;
    const double lpi = fit_pi(data).logLikelihood;
    EXPECT_GE(lpi, l3 - 1e-6) << "trial " << trial << " N=" << n;
  }
}

}  // namespace
}  // namespace aicsel
