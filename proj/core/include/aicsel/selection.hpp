#pragma once

// AIC-based comparison of the three-parameter and PI models, and the
// Monte-Carlo sweeps over measurement budget M, qubit number N and
// perturbation strength q.
//
// Sign convention: deltaAic = AIC_3P - AIC_PI. Negative values favour the
// three-parameter model, positive values the PI model.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aicsel/estimation.hpp"

namespace aicsel {

inline constexpr int kThreeParamCount = 3;

double aic(double logLikelihood, int paramCount);

struct AicReport {
  double logLikelihood3p = 0.0;
  double logLikelihoodPI = 0.0;
  double aic3p = 0.0;
  double aicPI = 0.0;
  double deltaAic = 0.0;
  int k3p = kThreeParamCount;
  int kPI = 0;
  std::uint64_t M = 0;
  int piIterations = 0;
  bool piConverged = false;
  /// True when every accepted PI iteration was non-decreasing in likelihood.
  bool piMonotone = true;
};

struct DeltaAicOptions {
  ThreeParamFitOptions threeParam;
  PiFitOptions pi;
};

AicReport delta_aic(const CountsDataset& data, const DeltaAicOptions& opts = {});

struct SweepConfig {
  int nQubits = 5;
  double q = 0.0;
  ThreeParamState base{5, 0.0, 0.0, 1.0};
  std::vector<std::uint64_t> mGrid;
  int repetitions = 1;
  std::uint64_t baseSeed = 1;
  int workers = 1;
  /// Reuse the repetition-0 perturbation for every repetition instead of
  /// drawing a fresh one.
  bool pinPerturbation = false;
  DeltaAicOptions fit;
  /// Called once per finished (repetition, M) work item; may be invoked from
  /// worker threads, one call at a time.
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct RepetitionRecord {
  int repetition = 0;
  std::size_t mIndex = 0;
  std::uint64_t M = 0;
  std::uint64_t seed = 0;
  AicReport report;
};

struct GridStat {
  std::uint64_t M = 0;
  double meanDeltaAic = 0.0;
  double stdDeltaAic = 0.0;
  int repetitions = 0;
};

struct SweepResult {
  int nQubits = 0;
  double q = 0.0;
  std::vector<GridStat> grid;
  std::optional<double> crossingM;
  /// Auto-widening reached its ceiling without a sign change.
  bool censored = false;
  std::vector<RepetitionRecord> records;
};

/// Per-M mean and sample standard deviation over the records.
std::vector<GridStat> aggregate(std::span<const RepetitionRecord> records,
                                std::span<const std::uint64_t> mGrid);

/// Linear interpolation between the last negative-mean grid point before the
/// first positive mean and that positive point. Empty when the curve never
/// goes from negative to positive.
std::optional<double> crossing_point(std::span<const GridStat> grid);

/// The true state of one repetition: (1-q) rho_3P + q rho_PI with rho_PI a
/// seeded random PI state orthogonalized against the three-parameter family.
PIState true_state(const SweepConfig& config, int repetition);

SweepResult sweep(const SweepConfig& config);

struct WideningOptions {
  /// First grid point; 0 means D_N (one shot per setting).
  std::uint64_t startM = 0;
  std::uint64_t ceiling = std::uint64_t{1} << 22;
};

/// Doubling grid startM, 2 startM, ... evaluated one point at a time until the
/// mean deltaAic turns positive or the ceiling is reached.
SweepResult auto_sweep(SweepConfig config, const WideningOptions& widening = {});

struct ScalingPoint {
  int nQubits = 0;
  double q = 0.0;
  std::optional<double> crossingM;
  bool censored = false;
  SweepResult sweep;
};

struct ScalingOptions {
  int repetitions = 50;
  std::uint64_t baseSeed = 1;
  int workers = 1;
  ThreeParamState base{0, 0.0, 0.0, 1.0};  // nQubits filled per run
  WideningOptions widening;
  DeltaAicOptions fit;
  std::function<void(const std::string&)> log;
  /// Forwarded to each underlying sweep.
  std::function<void(std::size_t done, std::size_t total)> progress;
};

std::vector<ScalingPoint> scaling_in_n(double q, std::span<const int> nList,
                                       const ScalingOptions& opts = {});
std::vector<ScalingPoint> scaling_in_q(int nQubits, std::span<const double> qList,
                                       const ScalingOptions& opts = {});

/// Least-squares line y = a + b x with coefficient of determination.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace aicsel
