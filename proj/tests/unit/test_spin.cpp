#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "aicsel/spin.hpp"
#include "test_util.hpp"

namespace aicsel {
namespace {

using testing::expm;

TEST(SpinLabel, RejectsNegative) { EXPECT_THROW(SpinLabel(-1), std::invalid_argument); }

TEST(SpinLabel, SpinsForNQubits) {
  const auto s5 = spins_for(5);
  ASSERT_EQ(s5.size(), 3u);
  EXPECT_EQ(s5[0].twoJ(), 5);
  EXPECT_EQ(s5[2].twoJ(), 1);
  const auto s4 = spins_for(4);
  ASSERT_EQ(s4.size(), 3u);
  EXPECT_EQ(s4.back().twoJ(), 0);
}

TEST(LadderOperators, SpinHalfIsPauliOverTwo) {
  const auto ops = ladder_operators(SpinLabel(1));
  EXPECT_DOUBLE_EQ(ops.jz(0, 0).real(), 0.5);
  EXPECT_DOUBLE_EQ(ops.jz(1, 1).real(), -0.5);
  EXPECT_DOUBLE_EQ(ops.jx(0, 1).real(), 0.5);
  EXPECT_DOUBLE_EQ(ops.jx(1, 0).real(), 0.5);
  EXPECT_DOUBLE_EQ(ops.jy(0, 1).imag(), -0.5);
}

TEST(LadderOperators, SpinOneRaisingElements) {
  const BlockMatrix jp = raising_operator(SpinLabel(2));
  // rows/cols: m = 1, 0, -1
  EXPECT_NEAR(jp(0, 1).real(), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(jp(1, 2).real(), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(jp(0, 0), Complex(0.0));
  EXPECT_EQ(jp(2, 1), Complex(0.0));
}

TEST(LadderOperators, CommutationAndCasimir) {
  const Complex i(0.0, 1.0);
  for (int twoJ = 0; twoJ <= 50; ++twoJ) {
    const SpinLabel s(twoJ);
    const auto o = ladder_operators(s);
    auto comm = [](const BlockMatrix& a, const BlockMatrix& b) { return BlockMatrix(a * b - b * a); };
    EXPECT_LT((comm(o.jx, o.jy) - i * o.jz).norm(), 1e-10) << twoJ;
    EXPECT_LT((comm(o.jy, o.jz) - i * o.jx).norm(), 1e-10) << twoJ;
    EXPECT_LT((comm(o.jz, o.jx) - i * o.jy).norm(), 1e-10) << twoJ;
    const BlockMatrix casimir = o.jx * o.jx + o.jy * o.jy + o.jz * o.jz;
    const double jj = s.j() * (s.j() + 1.0);
    EXPECT_LT((casimir - jj * BlockMatrix::Identity(s.dim(), s.dim())).norm(), 1e-10 * std::max(1.0, jj));
  }
}

TEST(Rotation, ZeroAnglesIsIdentity) {
  for (int twoJ : {0, 1, 4, 9, 25}) {
    const auto r = rotation_to_axis(SpinLabel(twoJ), 0.0, 0.0);
    EXPECT_LT((r.entries - BlockMatrix::Identity(twoJ + 1, twoJ + 1)).norm(), 1e-12);
  }
}

TEST(Rotation, SpinHalfToX) {
  const auto r = rotation_to_axis(SpinLabel(1), std::numbers::pi / 2, 0.0);
  EXPECT_NEAR(r.entries(0, 0).real(), std::cos(std::numbers::pi / 4), 1e-14);
  EXPECT_NEAR(r.entries(1, 0).real(), std::sin(std::numbers::pi / 4), 1e-14);
  EXPECT_NEAR(r.entries(0, 0).imag(), 0.0, 1e-14);
}

TEST(Rotation, SpinOneMatchesScalingAndSquaring) {
  const SpinLabel s(2);
  const auto o = ladder_operators(s);
  const double theta = std::numbers::pi / 3, phi = 1.1;
  const Complex mi(0.0, -1.0);
  const BlockMatrix expected = expm(mi * phi * o.jz) * expm(mi * theta * o.jy);
  const auto r = rotation_to_axis(s, theta, phi);
  EXPECT_LT((r.entries - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Rotation, LargeSpinMatchesScalingAndSquaring) {
  const SpinLabel s(25);
  const auto o = ladder_operators(s);
  const Complex mi(0.0, -1.0);
  const BlockMatrix expected = expm(mi * 2.3 * o.jz) * expm(mi * 0.7 * o.jy);
  EXPECT_LT((rotation_to_axis(s, 0.7, 2.3).entries - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Rotation, UnitaryAndMapsJzToAxis) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(0.0, std::numbers::pi), ph(0.0, 2 * std::numbers::pi);
  for (int twoJ = 0; twoJ <= 26; ++twoJ) {
    const SpinLabel s(twoJ);
    const auto o = ladder_operators(s);
    const double theta = th(rng), phi = ph(rng);
    const BlockMatrix u = rotation_to_axis(s, theta, phi).entries;
    EXPECT_LT((u.adjoint() * u - BlockMatrix::Identity(s.dim(), s.dim())).norm(), 1e-12) << twoJ;
    const BlockMatrix nJ = std::sin(theta) * std::cos(phi) * o.jx +
                           std::sin(theta) * std::sin(phi) * o.jy + std::cos(theta) * o.jz;
    EXPECT_LT((u * o.jz * u.adjoint() - nJ).norm(), 1e-10) << twoJ;
  }
}

}  // namespace
}  // namespace aicsel
