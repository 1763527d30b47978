#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "aicsel/errors.hpp"
#include "aicsel/selection.hpp"
#include "aicsel/serialization.hpp"

namespace aicsel {
namespace {

TEST(Aic, Arithmetic) {
  EXPECT_DOUBLE_EQ(aic(-100.0, 3), 206.0);
  EXPECT_DOUBLE_EQ(aic(0.0, 0), 0.0);
  EXPECT_NEAR(aic(-2.7726, 55), 115.5452, 1e-12);
  EXPECT_THROW(aic(-1.0, -1), InvalidArgument);
}

TEST(DeltaAic, IdentityAndNestedBound) {
  for (int n : {3, 5, 7}) {
    SweepConfig c;
    c.nQubits = n;
    c.q = 0.03;
    c.base = ThreeParamState{n, 0, 0, 1};
    const auto data = sample_dataset(true_state(c, 0), generate_plan(n), 40 * setting_count(n), 5);
    const auto r = delta_aic(data);
    EXPECT_EQ(r.kPI, pi_param_count(n));
    EXPECT_EQ(r.k3p, 3);
    EXPECT_EQ(r.M, data.total_shots());
    EXPECT_EQ(r.deltaAic, r.aic3p - r.aicPI);
    const double identity = 2 * (r.logLikelihoodPI - r.logLikelihood3p) - 2 * (r.kPI - 3);
    EXPECT_NEAR(r.deltaAic, identity, 1e-9 * std::abs(r.aic3p));
    EXPECT_GE(r.deltaAic, -2.0 * (r.kPI - 3) - 2e-6);
    EXPECT_TRUE(r.piMonotone);
  }
}

TEST(Crossing, ExactOnPiecewiseLinear) {
  std::vector<GridStat> g{{100, -30, 0, 1}, {200, -10, 0, 1}, {400, 30, 0, 1}, {800, 50, 0, 1}};
  const auto c = crossing_point(g);
  ASSERT_TRUE(c);
  EXPECT_DOUBLE_EQ(*c, 250.0);
}

TEST(Crossing, AbsentWithoutSignChange) {
  std::vector<GridStat> neg{{100, -30, 0, 1}, {200, -1, 0, 1}};
  EXPECT_FALSE(crossing_point(neg));
  std::vector<GridStat> pos{{100, 3, 0, 1}, {200, 5, 0, 1}};
  EXPECT_FALSE(crossing_point(pos));
}

TEST(Crossing, ZeroMeanPointCountsAsNegativeSide) {
  std::vector<GridStat> g{{100, -4, 0, 1}, {200, 0, 0, 1}, {300, 2, 0, 1}};
  EXPECT_DOUBLE_EQ(*crossing_point(g), 200.0);
}

TEST(Aggregate, MeanAndSampleStd) {
  std::vector<RepetitionRecord> recs(3);
  const double vals[] = {1.0, 2.0, 6.0};
  for (int i = 0; i < 3; ++i) {
    recs[i].repetition = i;
    recs[i].mIndex = 0;
    recs[i].report.deltaAic = vals[i];
  }
  const std::vector<std::uint64_t> grid{50};
  const auto g = aggregate(recs, grid);
  EXPECT_DOUBLE_EQ(g[0].meanDeltaAic, 3.0);
  EXPECT_DOUBLE_EQ(g[0].stdDeltaAic, std::sqrt(7.0));
  EXPECT_EQ(g[0].repetitions, 3);
}

SweepConfig small_config(double q) {
  SweepConfig c;
  c.nQubits = 3;
  c.q = q;
  c.base = ThreeParamState{3, 0, 0, 1};
  c.mGrid = {10, 40, 160};
  c.repetitions = 4;
  c.baseSeed = 77;
  return c;
}

TEST(Sweep, ZeroPerturbationNeverCrosses) {
  const auto r = sweep(small_config(0.0));
  EXPECT_FALSE(r.crossingM);
  for (const auto& g : r.grid) EXPECT_LT(g.meanDeltaAic, 0.0);
}

TEST(Sweep, ReproducibleAndOrderIndependent) {
  auto c = small_config(0.2);
  c.repetitions = 1;
  const auto a = sweep(c);
  const auto b = sweep(c);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].report.deltaAic, b.records[i].report.deltaAic);
  }
  c.repetitions = 3;
  c.workers = 1;
  const auto serial = sweep(c);
  c.workers = 4;
  const auto parallel = sweep(c);
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    EXPECT_EQ(serial.records[i].report.deltaAic, parallel.records[i].report.deltaAic);
    EXPECT_EQ(serial.records[i].seed, parallel.records[i].seed);
  }
}

TEST(Sweep, PersistedRecordsReaggregateIdentically) {
  const auto r = sweep(small_config(0.1));
  std::stringstream csv;
  write_sweep_csv(csv, r);
  std::vector<std::uint64_t> grid;
  const auto records = read_sweep_csv(csv, grid);
  const auto again = aggregate(records, grid);
  ASSERT_EQ(again.size(), r.grid.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    EXPECT_EQ(again[i].M, r.grid[i].M);
    EXPECT_EQ(again[i].meanDeltaAic, r.grid[i].meanDeltaAic);
    EXPECT_EQ(again[i].stdDeltaAic, r.grid[i].stdDeltaAic);
  }
}

TEST(Sweep, PinnedPerturbationSharesState) {
  auto c = small_config(0.3);
  c.pinPerturbation = true;
  const PIState a = true_state(c, 0), b = true_state(c, 5);
  EXPECT_EQ((a.block(0).rho - b.block(0).rho).norm(), 0.0);
  c.pinPerturbation = false;
  EXPECT_GT((true_state(c, 0).block(0).rho - true_state(c, 5).block(0).rho).norm(), 0.0);
}

TEST(Sweep, RejectsBadGrid) {
  auto c = small_config(0.1);
  c.mGrid = {40, 10};
  EXPECT_THROW(sweep(c), InvalidArgument);
  c.mGrid = {5};
  EXPECT_THROW(sweep(c), InvalidArgument);
  c.mGrid = {10};
  c.q = 1.5;
  EXPECT_THROW(sweep(c), InvalidArgument);
}

TEST(AutoSweep, CensoredAtCeiling) {
  auto c = small_config(0.0);
  c.repetitions = 2;
  const auto r = auto_sweep(c, WideningOptions{0, 40});
  EXPECT_TRUE(r.censored);
  EXPECT_FALSE(r.crossingM);
  ASSERT_EQ(r.grid.size(), 3u);  // 10, 20, 40
  EXPECT_EQ(r.grid.back().M, 40u);
}

TEST(Scaling, SingletonList) {
  ScalingOptions o;
  o.repetitions = 2;
  o.widening.ceiling = 1 << 14;
  const std::vector<int> ns{3};
  const auto pts = scaling_in_n(0.3, ns, o);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].nQubits, 3);
  EXPECT_TRUE(pts[0].crossingM || pts[0].censored);
  const std::vector<double> bad{0.0};
  EXPECT_THROW(scaling_in_q(3, bad, o), InvalidArgument);
}

TEST(LinearFit, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r2, 1.0, 1e-14);
}

}  // namespace
}  // namespace aicsel
