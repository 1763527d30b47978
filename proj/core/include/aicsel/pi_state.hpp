#pragma once

// Block-diagonal permutationally invariant (PI) states.
//
// An N-qubit PI state decomposes as  (+)_j  P_j rho_j (x) 1/K_j  where j runs
// over N/2, N/2-1, ..., (0 or 1/2). Only the weights P_j and the
// (2j+1)-dimensional blocks rho_j are stored; the multiplicity factor is
// implicit. Blocks are kept largest spin first, so blocks[0] is the
// symmetric subspace containing the GHZ state.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aicsel/spin.hpp"

namespace aicsel {

struct PIBlock {
  SpinLabel spin;
  double weight = 0.0;
  BlockMatrix rho;
};

class PIState {
 public:
  PIState() = default;
  PIState(int nQubits, std::vector<PIBlock> blocks);

  /// Build from unnormalized weighted blocks W_j = P_j rho_j (one per spin,
  /// largest first). Weights become traces normalized to sum 1; blocks with
  /// vanishing trace get a maximally mixed placeholder.
  static PIState from_weighted(int nQubits, const std::vector<BlockMatrix>& weighted);

  int n_qubits() const { return nQubits_; }
  const std::vector<PIBlock>& blocks() const { return blocks_; }
  const PIBlock& block(std::size_t i) const { return blocks_.at(i); }
  std::size_t block_count() const { return blocks_.size(); }

  /// P_j rho_j for every block.
  std::vector<BlockMatrix> weighted_blocks() const;

  /// Empty string when every invariant holds within tol; otherwise a
  /// description of the first violation.
  std::string invariant_violation(double tol = 1e-10) const;

 private:
  int nQubits_ = 0;
  std::vector<PIBlock> blocks_;
};

/// Noisy GHZ family: population imbalance epsilon, relative phase phi and
/// coherence delta between |0...0> and |1...1>.
struct ThreeParamState {
  int nQubits = 0;
  double epsilon = 0.0;
  double phi = 0.0;
  double delta = 1.0;

  /// Throws InvalidArgument when any parameter leaves its box.
  void validate() const;

  /// 2x2 matrix on span{|e>, |g>}, with e the m = +N/2 Dicke state.
  Eigen::Matrix2cd corner() const;
  PIState to_pi_state() const;
};

/// Wrap an angle into [-pi, pi).
double wrap_phase(double phi);

struct MultiplicityTable {
  int nQubits = 0;
  std::map<SpinLabel, std::uint64_t> kj;

  std::uint64_t at(SpinLabel s) const { return kj.at(s); }
};

std::uint64_t binomial(int n, int k);

MultiplicityTable multiplicities(int nQubits);

/// Free real parameters of a normalized block-diagonal PI state.
int pi_param_count(int nQubits);

PIState ghz_state(int nQubits);
PIState three_param_state(int nQubits, double epsilon, double phi, double delta);

/// Identity on the reduced block-diagonal space: P_j proportional to 2j+1.
/// This is the starting point of the PI likelihood maximization.
PIState pi_identity_state(int nQubits);

/// The full-space maximally mixed state 1/2^N: P_j = (2j+1) K_j / 2^N.
PIState maximally_mixed_state(int nQubits);

/// Dirichlet(1,...,1) block weights and Hilbert-Schmidt (Ginibre) blocks.
PIState random_pi_state(int nQubits, std::uint64_t rngSeed);

/// Remove all support on the extreme Dicke states |e>, |g> of the top block,
/// making the state Hilbert-Schmidt orthogonal to every three-parameter state.
PIState orthogonalize_to_3p(const PIState& state);

/// (1-q) rho_3P + q rho_PI, computed on the weighted blocks.
PIState mix_true_state(const ThreeParamState& rho3p, const PIState& rhoPI, double q);
PIState mix_states(const PIState& a, const PIState& b, double q);

}  // namespace aicsel
