#include "aicsel/pi_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "aicsel/errors.hpp"

namespace aicsel {

namespace {

BlockMatrix maximally_mixed_block(int dim) {
  return BlockMatrix::Identity(dim, dim) / static_cast<double>(dim);
}

void require_qubits(int nQubits, int minimum, const char* what) {
  if (nQubits < minimum) {
    throw InvalidArgument(std::string(what) + ": need at least " + std::to_string(minimum) +
                          " qubits, got " + std::to_string(nQubits));
  }
}

}  // namespace

PIState::PIState(int nQubits, std::vector<PIBlock> blocks)
    : nQubits_(nQubits), blocks_(std::move(blocks)) {
  const auto spins = spins_for(nQubits);
  if (blocks_.size() != spins.size()) {
    throw InvalidArgument("PIState: expected " + std::to_string(spins.size()) + " blocks for " +
                          std::to_string(nQubits) + " qubits");
  }
  for (std::size_t i = 0; i < spins.size(); ++i) {
    const auto& b = blocks_[i];
    if (b.spin != spins[i] || b.rho.rows() != spins[i].dim() || b.rho.cols() != spins[i].dim()) {
      throw InvalidArgument("PIState: block " + std::to_string(i) + " has wrong spin or shape");
    }
  }
}

PIState PIState::from_weighted(int nQubits, const std::vector<BlockMatrix>& weighted) {
  const auto spins = spins_for(nQubits);
  if (weighted.size() != spins.size()) {
    throw InvalidArgument("PIState::from_weighted: block count mismatch");
  }
  double total = 0.0;
  for (const auto& w : weighted) {
    total += w.trace().real();
  }
  if (!(total > 0.0)) {
    throw InvalidArgument("PIState::from_weighted: total trace must be positive");
  }
  std::vector<PIBlock> blocks;
  blocks.reserve(spins.size());
  for (std::size_t i = 0; i < spins.size(); ++i) {
    const double tr = weighted[i].trace().real();
    PIBlock b{spins[i], tr / total, BlockMatrix()};
    if (tr > 1e-300 && b.weight > 0.0) {
      b.rho = weighted[i] / tr;
      // Symmetrize away rounding so downstream Hermitian solvers see exact input.
      b.rho = 0.5 * (b.rho + b.rho.adjoint()).eval();
    } else {
      b.weight = 0.0;
      b.rho = maximally_mixed_block(spins[i].dim());
    }
    blocks.push_back(std::move(b));
  }
  return PIState(nQubits, std::move(blocks));
}

std::vector<BlockMatrix> PIState::weighted_blocks() const {
  std::vector<BlockMatrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    out.push_back(b.weight * b.rho);
  }
  return out;
}

std::string PIState::invariant_violation(double tol) const {
  std::ostringstream msg;
  double sum = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& b = blocks_[i];
    if (b.weight < 0.0) {
      msg << "block " << i << " has negative weight " << b.weight;
      return msg.str();
    }
    sum += b.weight;
    if ((b.rho - b.rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
      msg << "block " << i << " is not Hermitian";
      return msg.str();
    }
    if (std::abs(b.rho.trace() - Complex(1.0)) > tol) {
      msg << "block " << i << " trace " << b.rho.trace();
      return msg.str();
    }
    Eigen::SelfAdjointEigenSolver<BlockMatrix> es(b.rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) {
      msg << "block " << i << " min eigenvalue " << es.eigenvalues().minCoeff();
      return msg.str();
    }
  }
  if (std::abs(sum - 1.0) > tol) {
    msg << "weights sum to " << sum;
    return msg.str();
  }
  return {};
}

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi + std::numbers::pi, two_pi);
  if (w < 0.0) w += two_pi;
  w -= std::numbers::pi;
  return w >= std::numbers::pi ? -std::numbers::pi : w;
}

void ThreeParamState::validate() const {
  require_qubits(nQubits, 2, "ThreeParamState");
  if (!(epsilon >= -1.0 && epsilon <= 1.0)) {
    throw InvalidArgument("ThreeParamState: epsilon outside [-1, 1]");
  }
  if (!(phi >= -std::numbers::pi && phi < std::numbers::pi)) {
    throw InvalidArgument("ThreeParamState: phi outside [-pi, pi)");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw InvalidArgument("ThreeParamState: delta outside [0, 1]");
  }
}

Eigen::Matrix2cd ThreeParamState::corner() const {
  const Complex coherence = 0.5 * delta * std::sqrt(std::max(0.0, 1.0 - epsilon * epsilon)) *
                            std::polar(1.0, phi);
  Eigen::Matrix2cd c;
  c << 0.5 * (1.0 + epsilon), coherence, std::conj(coherence), 0.5 * (1.0 - epsilon);
  return c;
}

PIState ThreeParamState::to_pi_state() const {
  validate();
  const auto spins = spins_for(nQubits);
  std::vector<PIBlock> blocks;
  for (const auto& s : spins) {
    blocks.push_back(PIBlock{s, 0.0, maximally_mixed_block(s.dim())});
  }
  const int last = nQubits;  // top block has dim N+1
  BlockMatrix top = BlockMatrix::Zero(nQubits + 1, nQubits + 1);
  const Eigen::Matrix2cd c = corner();
  top(0, 0) = c(0, 0);
  top(0, last) = c(0, 1);
  top(last, 0) = c(1, 0);
  top(last, last) = c(1, 1);
  blocks[0].weight = 1.0;
  blocks[0].rho = std::move(top);
  return PIState(nQubits, std::move(blocks));
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    // c * (n-k+i) / i is an integer; cancel the gcd first to avoid overflow.
    const std::uint64_t g = std::gcd(c, static_cast<std::uint64_t>(i));
    c = (c / g) * (static_cast<std::uint64_t>(n - k + i) / (static_cast<std::uint64_t>(i) / g));
  }
  return c;
}

MultiplicityTable multiplicities(int nQubits) {
  require_qubits(nQubits, 1, "multiplicities");
  MultiplicityTable t;
  t.nQubits = nQubits;
  for (const auto& s : spins_for(nQubits)) {
    const int lower = (nQubits - s.twoJ()) / 2;  // N/2 - j
    t.kj[s] = binomial(nQubits, lower) - binomial(nQubits, lower - 1);
  }
  return t;
}

int pi_param_count(int nQubits) {
  require_qubits(nQubits, 1, "pi_param_count");
  int total = 0;
  for (const auto& s : spins_for(nQubits)) {
    total += s.dim() * s.dim();
  }
  return total - 1;
}

PIState ghz_state(int nQubits) {
  require_qubits(nQubits, 2, "ghz_state");
  return three_param_state(nQubits, 0.0, 0.0, 1.0);
}

PIState three_param_state(int nQubits, double epsilon, double phi, double delta) {
  return ThreeParamState{nQubits, epsilon, phi, delta}.to_pi_state();
}

PIState pi_identity_state(int nQubits) {
  std::vector<BlockMatrix> w;
  for (const auto& s : spins_for(nQubits)) {
    w.push_back(BlockMatrix::Identity(s.dim(), s.dim()));
  }
  return PIState::from_weighted(nQubits, w);
}

PIState maximally_mixed_state(int nQubits) {
  const auto k = multiplicities(nQubits);
  std::vector<PIBlock> blocks;
  const double full = std::ldexp(1.0, nQubits);
  for (const auto& s : spins_for(nQubits)) {
    blocks.push_back(PIBlock{s, s.dim() * static_cast<double>(k.at(s)) / full,
                             maximally_mixed_block(s.dim())});
  }
  return PIState(nQubits, std::move(blocks));
}

PIState random_pi_state(int nQubits, std::uint64_t rngSeed) {
  require_qubits(nQubits, 2, "random_pi_state");
  std::mt19937_64 rng(rngSeed);
  std::exponential_distribution<double> expo(1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const auto spins = spins_for(nQubits);
  std::vector<double> gammas(spins.size());
  double gsum = 0.0;
  for (auto& g : gammas) {
    g = expo(rng);
    gsum += g;
  }
  std::vector<PIBlock> blocks;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    const int d = spins[i].dim();
    BlockMatrix g(d, d);
    for (int c = 0; c < d; ++c) {
      for (int r = 0; r < d; ++r) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        g(r, c) = Complex(re, im);
      }
    }
    BlockMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    blocks.push_back(PIBlock{spins[i], gammas[i] / gsum, std::move(rho)});
  }
  return PIState(nQubits, std::move(blocks));
}

PIState orthogonalize_to_3p(const PIState& state) {
  // A PSD operator with <e|X|e> = 0 must annihilate |e>, so Hilbert-Schmidt
  // orthogonality to span{|e><e|, |g><g|, |e><g|, |g><e|} together with
  // positivity forces the whole e and g rows/columns to vanish. Compression
  // by Q = 1 - |e><e| - |g><g| achieves exactly that and keeps positivity.
  const int n = state.n_qubits();
  auto compress = [n](std::vector<BlockMatrix> w) {
    auto& top = w.front();
    top.row(0).setZero();
    top.col(0).setZero();
    top.row(n).setZero();
    top.col(n).setZero();
    return w;
  };
  std::vector<BlockMatrix> w = compress(state.weighted_blocks());
  double total = 0.0;
  for (const auto& b : w) total += b.trace().real();
  if (total < 1e-14) {
    // Nothing survives (e.g. a pure GHZ input): fall back to the compressed identity.
    std::vector<BlockMatrix> id;
    for (const auto& s : spins_for(n)) id.push_back(BlockMatrix::Identity(s.dim(), s.dim()));
    w = compress(std::move(id));
  }
  return PIState::from_weighted(n, w);
}

PIState mix_states(const PIState& a, const PIState& b, double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw InvalidArgument("mix_states: q must lie in [0, 1]");
  }
  if (a.n_qubits() != b.n_qubits()) {
    throw InvalidArgument("mix_states: qubit counts differ");
  }
  if (q == 0.0) return a;
  if (q == 1.0) return b;
  auto wa = a.weighted_blocks();
  const auto wb = b.weighted_blocks();
  for (std::size_t i = 0; i < wa.size(); ++i) {
    wa[i] = (1.0 - q) * wa[i] + q * wb[i];
  }
  return PIState::from_weighted(a.n_qubits(), wa);
}

PIState mix_true_state(const ThreeParamState& rho3p, const PIState& rhoPI, double q) {
  if (rho3p.nQubits != rhoPI.n_qubits()) {
    throw InvalidArgument("mix_true_state: qubit counts differ");
  }
  return mix_states(rho3p.to_pi_state(), rhoPI, q);
}

}  // namespace aicsel
