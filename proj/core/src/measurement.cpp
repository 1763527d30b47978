#include "aicsel/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "aicsel/errors.hpp"

namespace aicsel {

namespace {

constexpr double kNegativeDust = 1e-12;

double clamp_probability(double p) {
  if (p < 0.0) {
    if (p < -kNegativeDust) {
      throw InternalError("outcome probability " + std::to_string(p) + " is negative");
    }
    return 0.0;
  }
  return p;
}

}  // namespace

Setting Setting::from_angles(double theta, double phi) {
  Setting s;
  s.theta = theta;
  s.phi = phi;
  s.n = Eigen::Vector3d(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                        std::cos(theta));
  return s;
}

Setting Setting::from_direction(const Eigen::Vector3d& direction) {
  const double norm = direction.norm();
  if (!(norm > 0.0)) {
    throw InvalidArgument("Setting::from_direction: zero vector");
  }
  const Eigen::Vector3d u = direction / norm;
  const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  double phi = std::atan2(u.y(), u.x());
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return from_angles(theta, phi);
}

int setting_count(int nQubits) {
  if (nQubits < 1) {
    throw InvalidArgument("setting_count: need at least one qubit");
  }
  return static_cast<int>(binomial(nQubits + 2, nQubits));
}

MeasurementPlan generate_plan(int nQubits) {
  const int d = setting_count(nQubits);
  // 1/golden ratio
  const double golden_conj = (std::sqrt(5.0) - 1.0) / 2.0;
  MeasurementPlan plan;
  plan.nQubits = nQubits;
  plan.settings.reserve(d);
  for (int i = 0; i < d; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / d;
    double turns = i * golden_conj;
    turns -= std::floor(turns);
    plan.settings.push_back(Setting::from_angles(std::acos(z), 2.0 * std::numbers::pi * turns));
  }
  return plan;
}

SettingRotations::SettingRotations(int nQubits, std::span<const Setting> settings)
    : nQubits_(nQubits), nSettings_(settings.size()), spins_(spins_for(nQubits)) {
  stacked_.reserve(spins_.size());
  for (const auto& spin : spins_) {
    const int d = spin.dim();
    const WignerRotator rot(spin);
    BlockMatrix all(d, d * static_cast<Eigen::Index>(nSettings_));
    for (std::size_t s = 0; s < nSettings_; ++s) {
      all.middleCols(static_cast<Eigen::Index>(s) * d, d) =
          rot.rotation(settings[s].theta, settings[s].phi);
    }
    stacked_.push_back(std::move(all));
  }
}

Eigen::MatrixXd outcome_table(std::span<const BlockMatrix> weightedBlocks,
                              const SettingRotations& rotations) {
  const int n = rotations.n_qubits();
  if (weightedBlocks.size() != rotations.block_count()) {
    throw InvalidArgument("outcome_table: block count mismatch");
  }
  const auto nSettings = static_cast<Eigen::Index>(rotations.setting_count());
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(nSettings, n + 1);
  for (std::size_t b = 0; b < rotations.block_count(); ++b) {
    const SpinLabel spin = rotations.spin(b);
    const int d = spin.dim();
    if (weightedBlocks[b].rows() != d || weightedBlocks[b].cols() != d) {
      throw InvalidArgument("outcome_table: block " + std::to_string(b) + " has wrong shape");
    }
    const BlockMatrix& u = rotations.stacked(b);
    const BlockMatrix x = weightedBlocks[b] * u;
    // diag(U^dagger W U) column by column.
    const Eigen::RowVectorXd diag = (u.conjugate().cwiseProduct(x)).real().colwise().sum();
    const int kTop = (spin.twoJ() + n) / 2;
    for (Eigen::Index s = 0; s < nSettings; ++s) {
      for (int a = 0; a < d; ++a) {
        table(s, kTop - a) += diag(s * d + a);
      }
    }
  }
  return table.unaryExpr(&clamp_probability);
}

std::vector<double> outcome_distribution(const PIState& state, const Setting& setting) {
  const SettingRotations rot(state.n_qubits(), std::span<const Setting>(&setting, 1));
  const auto weighted = state.weighted_blocks();
  const Eigen::MatrixXd table = outcome_table(weighted, rot);
  return std::vector<double>(table.data(), table.data() + table.size());
}

std::uint64_t SettingCounts::shots() const {
  return std::accumulate(histogram.begin(), histogram.end(), std::uint64_t{0});
}

std::uint64_t CountsDataset::total_shots() const {
  std::uint64_t total = 0;
  for (const auto& s : perSetting) total += s.shots();
  return total;
}

std::vector<Setting> CountsDataset::settings() const {
  std::vector<Setting> out;
  out.reserve(perSetting.size());
  for (const auto& s : perSetting) out.push_back(s.setting);
  return out;
}

std::vector<std::uint64_t> sample_multinomial(std::span<const double> probabilities,
                                              std::uint64_t shots, std::mt19937_64& rng) {
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  double remainingMass = 1.0;
  std::uint64_t remaining = shots;
  for (std::size_t i = 0; i < probabilities.size() && remaining > 0; ++i) {
    if (i + 1 == probabilities.size()) {
      counts[i] = remaining;
      break;
    }
    const double p = remainingMass > 0.0 ? std::clamp(probabilities[i] / remainingMass, 0.0, 1.0)
                                         : 0.0;
    std::binomial_distribution<std::uint64_t> draw(remaining, p);
    counts[i] = draw(rng);
    remaining -= counts[i];
    remainingMass -= probabilities[i];
  }
  return counts;
}

CountsDataset sample_dataset(const PIState& state, const MeasurementPlan& plan,
                             std::uint64_t totalShots, std::uint64_t rngSeed) {
  if (plan.nQubits != state.n_qubits()) {
    throw InvalidArgument("sample_dataset: plan and state disagree on qubit count");
  }
  const std::uint64_t d = plan.settings.size();
  if (d == 0 || totalShots < d) {
    throw InvalidArgument("sample_dataset: need at least one shot per setting (M >= D_N)");
  }
  const SettingRotations rot(plan.nQubits, plan.settings);
  const auto weighted = state.weighted_blocks();
  const Eigen::MatrixXd table = outcome_table(weighted, rot);

  std::mt19937_64 rng(rngSeed);
  CountsDataset data;
  data.nQubits = plan.nQubits;
  data.perSetting.reserve(d);
  for (std::uint64_t s = 0; s < d; ++s) {
    const std::uint64_t shots = totalShots / d + (s < totalShots % d ? 1 : 0);
    std::vector<double> p(table.cols());
    for (Eigen::Index k = 0; k < table.cols(); ++k) p[k] = table(s, k);
    data.perSetting.push_back(SettingCounts{plan.settings[s], sample_multinomial(p, shots, rng)});
  }
  return data;
}

ProjectedPovm projected_povm(const MeasurementPlan& plan, int nQubits) {
  if (plan.nQubits != nQubits) {
    throw InvalidArgument("projected_povm: plan qubit count mismatch");
  }
  const SettingRotations rot(nQubits, plan.settings);
  ProjectedPovm povm(plan.settings.size());
  for (std::size_t s = 0; s < plan.settings.size(); ++s) {
    povm[s].resize(nQubits + 1);
    for (int k = 0; k <= nQubits; ++k) {
      for (std::size_t b = 0; b < rot.block_count(); ++b) {
        const SpinLabel spin = rot.spin(b);
        const int a = dicke_row(spin, nQubits, k);
        if (a < 0) {
          povm[s][k].push_back(BlockMatrix::Zero(spin.dim(), spin.dim()));
        } else {
          const auto u = rot.rotation(s, b);
          povm[s][k].push_back(u.col(a) * u.col(a).adjoint());
        }
      }
    }
  }
  return povm;
}

}  // namespace aicsel
