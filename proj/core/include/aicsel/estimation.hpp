#pragma once

// Maximum-likelihood fits of count data: the three-parameter noisy-GHZ model
// and the full permutationally invariant model. Log-likelihoods use the
// natural logarithm, L = sum_{setting,k} f_k ln p_k.

#include <functional>
#include <limits>
#include <optional>

#include "aicsel/measurement.hpp"
#include "aicsel/pi_state.hpp"

namespace aicsel {

enum class Model { kThreeParam, kPI };

struct FitResult {
  Model model = Model::kPI;
  PIState state;
  std::optional<ThreeParamState> params;  // set for three-parameter fits
  double logLikelihood = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Probabilities below this floor are clamped before taking logs.
inline constexpr double kProbabilityFloor = 1e-300;

/// Returns -infinity when a bin with f > 0 can only be produced by blocks of
/// zero weight (data the model declares impossible).
double log_likelihood(const PIState& state, const CountsDataset& data);
double log_likelihood(const ThreeParamState& params, const CountsDataset& data);

/// sum_setting sum_k f ln(f / shots): the likelihood of the empirical
/// frequencies, an upper bound for every model.
double empirical_log_likelihood(const CountsDataset& data);

struct ThreeParamFitOptions {
  int gridEpsilon = 5;
  int gridPhi = 8;
  int gridDelta = 5;
  int refineStarts = 3;
  double diameterTolerance = 1e-7;
  int maxSimplexIterations = 5000;
};

FitResult fit_three_param(const CountsDataset& data, const ThreeParamFitOptions& opts = {});

/// Best log-likelihood over the coarse starting grid (exposed for tests).
double three_param_grid_best(const CountsDataset& data, const ThreeParamFitOptions& opts = {});

struct PiFitOptions {
  int maxIterations = 5000;
  double gainTolerance = 1e-10;
  double initialKappa = 1.0;
  int resetStreak = 10;
  double frozenWeight = 1e-12;
  /// Called after every accepted step with (iteration, logLikelihood, state
  /// weighted blocks).
  std::function<void(int, double, const std::vector<BlockMatrix>&)> onAccepted;
};

FitResult fit_pi(const CountsDataset& data, const PiFitOptions& opts = {});

/// ||[R(rho), rho]||_F / ||rho||_F on the weighted block-diagonal operator.
double pi_stationarity(const PIState& state, const CountsDataset& data);

}  // namespace aicsel
