#pragma once

// Collective product measurements: every qubit is measured along the same
// Bloch direction n and a shot is summarized by k, the number of qubits found
// along +n. In block j the outcome k is the rotated Dicke projector with
// m = k - N/2.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aicsel/pi_state.hpp"

namespace aicsel {

struct Setting {
  double theta = 0.0;
  double phi = 0.0;
  Eigen::Vector3d n = Eigen::Vector3d::UnitZ();

  static Setting from_angles(double theta, double phi);
  static Setting from_direction(const Eigen::Vector3d& direction);
};

struct MeasurementPlan {
  int nQubits = 0;
  std::vector<Setting> settings;
};

/// D_N = C(N+2, N).
int setting_count(int nQubits);

/// Fibonacci spherical lattice with D_N points.
MeasurementPlan generate_plan(int nQubits);

/// Dicke row a = j - m holding outcome k in a block, or -1 when the block
/// cannot produce k.
inline int dicke_row(SpinLabel spin, int nQubits, int k) {
  const int a = (spin.twoJ() + nQubits) / 2 - k;
  return (a >= 0 && a <= spin.twoJ()) ? a : -1;
}

/// Per-setting rotation matrices for every block of an N-qubit state.
class SettingRotations {
 public:
  SettingRotations(int nQubits, std::span<const Setting> settings);

  int n_qubits() const { return nQubits_; }
  std::size_t setting_count() const { return nSettings_; }
  std::size_t block_count() const { return spins_.size(); }
  SpinLabel spin(std::size_t block) const { return spins_[block]; }

  /// All settings' U_j side by side: dim x (dim * settings). Columns
  /// [s*dim, (s+1)*dim) hold U_j for setting s.
  const BlockMatrix& stacked(std::size_t block) const { return stacked_[block]; }
  auto rotation(std::size_t setting, std::size_t block) const {
    const int d = spins_[block].dim();
    return stacked_[block].middleCols(static_cast<Eigen::Index>(setting) * d, d);
  }

 private:
  int nQubits_;
  std::size_t nSettings_;
  std::vector<SpinLabel> spins_;
  std::vector<BlockMatrix> stacked_;
};

/// p(k | setting), k = 0..N, for every setting at once. Rows are settings.
Eigen::MatrixXd outcome_table(std::span<const BlockMatrix> weightedBlocks,
                              const SettingRotations& rotations);

std::vector<double> outcome_distribution(const PIState& state, const Setting& setting);

struct SettingCounts {
  Setting setting;
  std::vector<std::uint64_t> histogram;  // index k = 0..N

  std::uint64_t shots() const;
};

struct CountsDataset {
  int nQubits = 0;
  std::vector<SettingCounts> perSetting;

  std::uint64_t total_shots() const;
  std::vector<Setting> settings() const;
};

/// Multinomial draw of `shots` trials over `probabilities`.
std::vector<std::uint64_t> sample_multinomial(std::span<const double> probabilities,
                                              std::uint64_t shots, std::mt19937_64& rng);

CountsDataset sample_dataset(const PIState& state, const MeasurementPlan& plan,
                             std::uint64_t totalShots, std::uint64_t rngSeed);

/// effects[setting][k][block]: U_j |j,m><j,m| U_j^dagger with m = k - N/2
/// (zero matrix where the block cannot yield k).
using ProjectedPovm = std::vector<std::vector<std::vector<BlockMatrix>>>;

ProjectedPovm projected_povm(const MeasurementPlan& plan, int nQubits);

}  // namespace aicsel
