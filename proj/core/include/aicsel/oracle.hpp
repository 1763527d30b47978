#pragma once

// Brute-force reference on the full 2^N space (N <= 6). Slow and obvious on
// purpose: it validates the block-diagonal probability engine.

#include <cstdint>
#include <functional>
#include <vector>

#include "aicsel/measurement.hpp"
#include "aicsel/pi_state.hpp"

namespace aicsel::oracle {

inline constexpr int kMaxQubits = 6;

struct DenseState {
  int nQubits = 0;
  Eigen::MatrixXcd rho;
};

/// Orthonormal Schur basis: for each block (largest spin first) and each of
/// its K_j multiplicity copies, a 2^N x (2j+1) isometry whose column a is
/// |j, m = j - a, copy>.
struct SchurBasis {
  int nQubits = 0;
  std::vector<std::vector<Eigen::MatrixXcd>> copies;  // [block][copy]
};

/// Computational basis index convention: qubit 0 is the most significant
/// bit and bit value 0 is the +1/2 eigenstate of sigma_z / 2.
SchurBasis schur_basis(int nQubits);

/// Unitary permuting qubits: qubit i of the input lands on qubit perm[i].
Eigen::MatrixXcd permutation_unitary(int nQubits, const std::vector<int>& perm);

DenseState embed(const PIState& state);

/// Inverse of embed on PI operators: P_j rho_j = sum_copies V^dagger rho V.
PIState read_back(const DenseState& dense);

/// p(k), k = number of qubits found along +n, from explicit product projectors.
std::vector<double> brute_distribution(const DenseState& dense, const Setting& setting);

struct EquivalenceReport {
  int nQubits = 0;
  int comparisons = 0;  // (state, setting) pairs
  double maxDeviation = 0.0;
};

/// Seeded random PI states against plan settings (cycled when the plan is
/// shorter than settingsPerState). `tamper` may alter each block-engine
/// distribution before comparison; the CLI uses it as a fault hook.
EquivalenceReport check_equivalence(
    int nQubits, int samples, int settingsPerState, std::uint64_t seed,
    const std::function<void(std::vector<double>&)>& tamper = {});

}  // namespace aicsel::oracle
