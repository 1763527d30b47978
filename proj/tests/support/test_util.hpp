#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "aicsel/measurement.hpp"

namespace aicsel::testing {

/// Matrix exponential by scaling and squaring with a Taylor core; independent
/// of the eigendecomposition route used by the library.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const Eigen::MatrixXcd scaled = a / std::ldexp(1.0, squarings);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * scaled / double(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

inline Setting random_setting(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Setting::from_direction(Eigen::Vector3d(g(rng), g(rng), g(rng)));
}

}  // namespace aicsel::testing
