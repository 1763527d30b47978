#include "aicsel/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "aicsel/errors.hpp"

namespace aicsel::oracle {

namespace {

void require_small(int nQubits) {
  if (nQubits < 1 || nQubits > kMaxQubits) {
    throw Unsupported("dense oracle supports 1.." + std::to_string(kMaxQubits) +
                      " qubits, got " + std::to_string(nQubits));
  }
}

// Sum of single-qubit lowering operators |1><0| applied to v.
Eigen::VectorXcd lower(const Eigen::VectorXcd& v, int nQubits) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (Eigen::Index x = 0; x < v.size(); ++x) {
    if (v(x) == Complex(0.0)) continue;
    for (int q = 0; q < nQubits; ++q) {
      const Eigen::Index bit = Eigen::Index{1} << (nQubits - 1 - q);
      if ((x & bit) == 0) out(x | bit) += v(x);
    }
  }
  return out;
}

int zeros_in(Eigen::Index x, int nQubits) {
  return nQubits - std::popcount(static_cast<unsigned>(x));
}

}  // namespace

SchurBasis schur_basis(int nQubits) {
  require_small(nQubits);
  const Eigen::Index full = Eigen::Index{1} << nQubits;
  const auto spins = spins_for(nQubits);
  const auto mult = multiplicities(nQubits);

  SchurBasis basis;
  basis.nQubits = nQubits;
  // Vectors constructed so far, bucketed by number of zeros (i.e. by Jz).
  std::vector<std::vector<Eigen::VectorXcd>> sector(nQubits + 1);

  for (const auto& spin : spins) {
    const double j = spin.j();
    const int zerosTop = (nQubits + spin.twoJ()) / 2;
    std::vector<Eigen::MatrixXcd> copies;
    for (Eigen::Index x = 0; x < full; ++x) {
      if (zeros_in(x, nQubits) != zerosTop) continue;
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(full);
      v(x) = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& w : sector[zerosTop]) v -= w.dot(v) * w;
      }
      const double norm = v.norm();
      if (norm < 1e-8) continue;
      v /= norm;

      Eigen::MatrixXcd iso(full, spin.dim());
      iso.col(0) = v;
      sector[zerosTop].push_back(v);
      for (int a = 1; a < spin.dim(); ++a) {
        const double m = spin.m_of(a - 1);
        Eigen::VectorXcd next = lower(iso.col(a - 1), nQubits) / std::sqrt(j * (j + 1) - m * (m - 1));
        iso.col(a) = next;
        sector[zerosTop - a].push_back(next);
      }
      copies.push_back(std::move(iso));
    }
    if (copies.size() != mult.at(spin)) {
      throw InternalError("schur_basis: found " + std::to_string(copies.size()) +
                          " highest-weight vectors for twoJ=" + std::to_string(spin.twoJ()));
    }
    basis.copies.push_back(std::move(copies));
  }
  return basis;
}

Eigen::MatrixXcd permutation_unitary(int nQubits, const std::vector<int>& perm) {
  require_small(nQubits);
  const Eigen::Index full = Eigen::Index{1} << nQubits;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(full, full);
  for (Eigen::Index x = 0; x < full; ++x) {
    Eigen::Index y = 0;
    for (int q = 0; q < nQubits; ++q) {
      const bool set = (x >> (nQubits - 1 - q)) & 1;
      if (set) y |= Eigen::Index{1} << (nQubits - 1 - perm[q]);
    }
    v(y, x) = 1.0;
  }
  return v;
}

DenseState embed(const PIState& state) {
  const int n = state.n_qubits();
  require_small(n);
  const SchurBasis basis = schur_basis(n);
  const Eigen::Index full = Eigen::Index{1} << n;
  DenseState out{n, Eigen::MatrixXcd::Zero(full, full)};
  for (std::size_t b = 0; b < state.block_count(); ++b) {
    const auto& blk = state.block(b);
    const auto& copies = basis.copies[b];
    const double scale = blk.weight / static_cast<double>(copies.size());
    for (const auto& v : copies) {
      out.rho += scale * v * blk.rho * v.adjoint();
    }
  }
  return out;
}

PIState read_back(const DenseState& dense) {
  const SchurBasis basis = schur_basis(dense.nQubits);
  std::vector<BlockMatrix> weighted;
  for (const auto& copies : basis.copies) {
    BlockMatrix w = BlockMatrix::Zero(copies.front().cols(), copies.front().cols());
    for (const auto& v : copies) w += v.adjoint() * dense.rho * v;
    weighted.push_back(std::move(w));
  }
  return PIState::from_weighted(dense.nQubits, weighted);
}

std::vector<double> brute_distribution(const DenseState& dense, const Setting& setting) {
  const int n = dense.nQubits;
  require_small(n);
  const Eigen::Vector3d& d = setting.n;
  Eigen::Matrix2cd nsigma;
  nsigma << d.z(), Complex(d.x(), -d.y()), Complex(d.x(), d.y()), -d.z();
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd up = 0.5 * (id + nsigma);
  const Eigen::Matrix2cd down = 0.5 * (id - nsigma);

  const Eigen::Index full = Eigen::Index{1} << n;
  std::vector<double> p(n + 1, 0.0);
  for (Eigen::Index s = 0; s < full; ++s) {
    // Bit value 0 in s means "found along +n" for that qubit.
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Ones(1, 1);
    for (int q = 0; q < n; ++q) {
      const bool isDown = (s >> (n - 1 - q)) & 1;
      const Eigen::Matrix2cd& f = isDown ? down : up;
      Eigen::MatrixXcd next(proj.rows() * 2, proj.cols() * 2);
      for (Eigen::Index r = 0; r < proj.rows(); ++r) {
        for (Eigen::Index c = 0; c < proj.cols(); ++c) {
          next.block<2, 2>(2 * r, 2 * c) = proj(r, c) * f;
        }
      }
      proj = std::move(next);
    }
    const double prob = dense.rho.cwiseProduct(proj.transpose()).sum().real();
    p[zeros_in(s, n)] += prob;
  }
  return p;
}

EquivalenceReport check_equivalence(int nQubits, int samples, int settingsPerState,
                                    std::uint64_t seed,
                                    const std::function<void(std::vector<double>&)>& tamper) {
  require_small(nQubits);
  if (samples < 1 || settingsPerState < 1) {
    throw InvalidArgument("check_equivalence: samples and settings must be positive");
  }
  const auto plan = generate_plan(nQubits);
  std::mt19937_64 rng(seed);
  EquivalenceReport report;
  report.nQubits = nQubits;
  for (int i = 0; i < samples; ++i) {
    const PIState s = random_pi_state(nQubits, rng());
    const auto dense = embed(s);
    for (int t = 0; t < settingsPerState; ++t) {
      const Setting& st = plan.settings[static_cast<std::size_t>(i + t) % plan.settings.size()];
      auto pb = outcome_distribution(s, st);
      if (tamper) tamper(pb);
      const auto po = brute_distribution(dense, st);
      for (int k = 0; k <= nQubits; ++k) {
        report.maxDeviation = std::max(report.maxDeviation, std::abs(pb[k] - po[k]));
      }
      ++report.comparisons;
    }
  }
  return report;
}

}  // namespace aicsel::oracle
