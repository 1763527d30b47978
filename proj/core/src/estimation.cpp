#include "aicsel/estimation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "aicsel/errors.hpp"
#include "aicsel/nelder_mead.hpp"

namespace aicsel {

namespace {

Eigen::MatrixXd count_matrix(const CountsDataset& data) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data.perSetting.size()),
                                            data.nQubits + 1);
  for (std::size_t s = 0; s < data.perSetting.size(); ++s) {
    const auto& h = data.perSetting[s].histogram;
    if (h.size() != static_cast<std::size_t>(data.nQubits + 1)) {
      throw InvalidArgument("dataset histogram " + std::to_string(s) + " has " +
                            std::to_string(h.size()) + " bins, expected N+1");
    }
    for (std::size_t k = 0; k < h.size(); ++k) f(static_cast<Eigen::Index>(s), k) = double(h[k]);
  }
  return f;
}

double sum_f_log_p(const Eigen::MatrixXd& f, const Eigen::MatrixXd& p) {
  double ll = 0.0;
  for (Eigen::Index s = 0; s < f.rows(); ++s) {
    for (Eigen::Index k = 0; k < f.cols(); ++k) {
      if (f(s, k) > 0.0) ll += f(s, k) * std::log(std::max(p(s, k), kProbabilityFloor));
    }
  }
  return ll;
}

// Probability tables and likelihood gradients for block-diagonal states on a
// fixed dataset. Each rotation factors as U = P d with P = diag(e^{-i phi m})
// and d the real Wigner matrix, so
//   p_a = [d^T Re(Y) d]_aa,   Y_bc = rho_bc e^{i phi (c - b)},
//   R   = sum_s M_s o e^{-i phi_s (c - b)},   M_s = d_s diag(w_s) d_s^T,
// which keeps the O(d^3) work per setting in real arithmetic.
class PiEngine {
 public:
  explicit PiEngine(const CountsDataset& data)
      : n_(data.nQubits),
        spins_(spins_for(data.nQubits)),
        counts_(count_matrix(data)),
        shots_(counts_.sum()) {
    const auto nSettings = static_cast<Eigen::Index>(data.perSetting.size());
    const int dMax = spins_.front().dim();
    cosTable_.resize(dMax, nSettings);
    sinTable_.resize(dMax, nSettings);
    for (Eigen::Index s = 0; s < nSettings; ++s) {
      const double phi = data.perSetting[static_cast<std::size_t>(s)].setting.phi;
      for (int delta = 0; delta < dMax; ++delta) {
        cosTable_(delta, s) = std::cos(phi * delta);
        sinTable_(delta, s) = std::sin(phi * delta);
      }
    }
    for (const auto& spin : spins_) {
      const int d = spin.dim();
      const WignerRotator rot(spin);
      Eigen::MatrixXd stacked(d, d * nSettings);
      for (Eigen::Index s = 0; s < nSettings; ++s) {
        stacked.middleCols(s * d, d) =
            rot.small_d(data.perSetting[static_cast<std::size_t>(s)].setting.theta).real();
      }
      smallD_.push_back(std::move(stacked));
    }
  }

  std::size_t blocks() const { return spins_.size(); }
  SpinLabel spin(std::size_t b) const { return spins_[b]; }
  const Eigen::MatrixXd& counts() const { return counts_; }

  Eigen::MatrixXd probabilities(const std::vector<BlockMatrix>& w) const {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(counts_.rows(), n_ + 1);
    for (std::size_t b = 0; b < spins_.size(); ++b) {
      if (w[b].size() == 0) continue;
      const int d = spins_[b].dim();
      const int kTop = (spins_[b].twoJ() + n_) / 2;
      const Eigen::MatrixXd re = w[b].real(), im = w[b].imag();
      Eigen::MatrixXd x(d, d), xd(d, d);
      for (Eigen::Index s = 0; s < p.rows(); ++s) {
        for (int c = 0; c < d; ++c) {
          for (int r = 0; r < d; ++r) {
            const int delta = c - r;
            const double cs = cosTable_(std::abs(delta), s);
            const double sn = delta >= 0 ? sinTable_(delta, s) : -sinTable_(-delta, s);
            x(r, c) = re(r, c) * cs - im(r, c) * sn;
          }
        }
        const auto ds = smallD_[b].middleCols(s * d, d);
        xd.noalias() = x * ds;
        for (int a = 0; a < d; ++a) p(s, kTop - a) += ds.col(a).dot(xd.col(a));
      }
    }
    return p;
  }

  double log_likelihood(const Eigen::MatrixXd& p) const { return sum_f_log_p(counts_, p); }

  // R_b = (1/S) sum_{s,k: f>0} f/p U_b |a><a| U_b^dagger.
  BlockMatrix gradient_block(std::size_t b, const Eigen::MatrixXd& p) const {
    const int d = spins_[b].dim();
    const int kTop = (spins_[b].twoJ() + n_) / 2;
    Eigen::MatrixXd re = Eigen::MatrixXd::Zero(d, d), im = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd weights(d);
    Eigen::MatrixXd m(d, d);
    for (Eigen::Index s = 0; s < p.rows(); ++s) {
      bool any = false;
      for (int a = 0; a < d; ++a) {
        const double f = counts_(s, kTop - a);
        weights(a) = f > 0.0 ? f / (std::max(p(s, kTop - a), kProbabilityFloor) * shots_) : 0.0;
        any = any || f > 0.0;
      }
      if (!any) continue;
      const auto ds = smallD_[b].middleCols(s * d, d);
      m.noalias() = ds * weights.asDiagonal() * ds.transpose();
      for (int c = 0; c < d; ++c) {
        for (int r = 0; r < d; ++r) {
          const int delta = c - r;
          const double cs = cosTable_(std::abs(delta), s);
          const double sn = delta >= 0 ? sinTable_(delta, s) : -sinTable_(-delta, s);
          re(r, c) += m(r, c) * cs;
          im(r, c) -= m(r, c) * sn;
        }
      }
    }
    BlockMatrix out(d, d);
    out.real() = re;
    out.imag() = im;
    return out;
  }

 private:
  int n_;
  std::vector<SpinLabel> spins_;
  Eigen::MatrixXd counts_;
  double shots_;
  Eigen::MatrixXd cosTable_, sinTable_;  // [phase difference][setting]
  std::vector<Eigen::MatrixXd> smallD_;   // per block, d x (d * settings)
};

// Corner amplitudes of the top-block rotations: x = U(0, a), y = U(N, a),
// indexed [setting][k] with k = N - a.
struct CornerAmplitudes {
  Eigen::MatrixXcd x;
  Eigen::MatrixXcd y;
};

CornerAmplitudes corner_amplitudes(const CountsDataset& data) {
  const int n = data.nQubits;
  const WignerRotator rot{SpinLabel(n)};
  CornerAmplitudes c{Eigen::MatrixXcd(data.perSetting.size(), n + 1),
                     Eigen::MatrixXcd(data.perSetting.size(), n + 1)};
  for (std::size_t s = 0; s < data.perSetting.size(); ++s) {
    const auto& st = data.perSetting[s].setting;
    const BlockMatrix u = rot.rotation(st.theta, st.phi);
    for (int a = 0; a <= n; ++a) {
      c.x(static_cast<Eigen::Index>(s), n - a) = u(0, a);
      c.y(static_cast<Eigen::Index>(s), n - a) = u(n, a);
    }
  }
  return c;
}

Eigen::MatrixXd three_param_probabilities(const CornerAmplitudes& amp, const ThreeParamState& t) {
  const Eigen::Matrix2cd c = t.corner();
  const double c00 = c(0, 0).real(), c11 = c(1, 1).real();
  const Complex c01 = c(0, 1);
  Eigen::MatrixXd p(amp.x.rows(), amp.x.cols());
  for (Eigen::Index s = 0; s < p.rows(); ++s) {
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      const Complex x = amp.x(s, k), y = amp.y(s, k);
      p(s, k) = c00 * std::norm(x) + c11 * std::norm(y) + 2.0 * (c01 * std::conj(x) * y).real();
    }
  }
  return p;
}

void require_data(const CountsDataset& data, const char* what) {
  if (data.nQubits < 2) {
    throw InvalidArgument(std::string(what) + ": dataset needs at least two qubits");
  }
  if (data.total_shots() == 0) {
    throw InvalidArgument(std::string(what) + ": dataset is empty");
  }
}

}  // namespace

double log_likelihood(const PIState& state, const CountsDataset& data) {
  if (data.perSetting.empty()) return 0.0;
  if (state.n_qubits() != data.nQubits) {
    throw InvalidArgument("log_likelihood: state and dataset disagree on qubit count");
  }
  const PiEngine engine(data);
  const auto weighted = state.weighted_blocks();
  const Eigen::MatrixXd p = engine.probabilities(weighted);
  const Eigen::MatrixXd& f = engine.counts();
  // Outcome k is possible only if some block with positive weight reaches it.
  const int n = data.nQubits;
  for (int k = 0; k <= n; ++k) {
    if (f.col(k).sum() == 0.0) continue;
    bool reachable = false;
    for (const auto& b : state.blocks()) {
      if (b.weight > 0.0 && dicke_row(b.spin, n, k) >= 0) reachable = true;
    }
    if (!reachable) return -std::numeric_limits<double>::infinity();
  }
  return engine.log_likelihood(p);
}

double log_likelihood(const ThreeParamState& params, const CountsDataset& data) {
  if (data.perSetting.empty()) return 0.0;
  return sum_f_log_p(count_matrix(data), three_param_probabilities(corner_amplitudes(data), params));
}

double empirical_log_likelihood(const CountsDataset& data) {
  double ll = 0.0;
  for (const auto& s : data.perSetting) {
    const double shots = static_cast<double>(s.shots());
    for (auto f : s.histogram) {
      if (f > 0) ll += double(f) * std::log(double(f) / shots);
    }
  }
  return ll;
}

namespace {

struct GridPoint {
  std::array<double, 3> x;
  double ll;
};

std::vector<GridPoint> three_param_grid(const CountsDataset& data, const CornerAmplitudes& amp,
                                        const Eigen::MatrixXd& f, const ThreeParamFitOptions& o) {
  std::vector<GridPoint> grid;
  const int n = data.nQubits;
  for (int ie = 0; ie < o.gridEpsilon; ++ie) {
    const double eps = o.gridEpsilon == 1 ? 0.0 : -1.0 + 2.0 * ie / (o.gridEpsilon - 1);
    for (int ip = 0; ip < o.gridPhi; ++ip) {
      const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * ip / o.gridPhi;
      for (int id = 0; id < o.gridDelta; ++id) {
        const double delta = o.gridDelta == 1 ? 1.0 : double(id) / (o.gridDelta - 1);
        const ThreeParamState t{n, eps, phi, delta};
        grid.push_back({{eps, phi, delta}, sum_f_log_p(f, three_param_probabilities(amp, t))});
      }
    }
  }
  std::stable_sort(grid.begin(), grid.end(),
                   [](const GridPoint& a, const GridPoint& b) { return a.ll > b.ll; });
  return grid;
}

}  // namespace

double three_param_grid_best(const CountsDataset& data, const ThreeParamFitOptions& opts) {
  require_data(data, "three_param_grid_best");
  return three_param_grid(data, corner_amplitudes(data), count_matrix(data), opts).front().ll;
}

FitResult fit_three_param(const CountsDataset& data, const ThreeParamFitOptions& opts) {
  require_data(data, "fit_three_param");
  const int n = data.nQubits;
  const CornerAmplitudes amp = corner_amplitudes(data);
  const Eigen::MatrixXd f = count_matrix(data);
  const auto grid = three_param_grid(data, amp, f, opts);

  // phi is periodic, so it is left free inside the simplex and wrapped at the end.
  auto project = [](std::array<double, 3> x) {
    x[0] = std::clamp(x[0], -1.0, 1.0);
    x[2] = std::clamp(x[2], 0.0, 1.0);
    return x;
  };
  auto objective = [&](const std::array<double, 3>& x) {
    const ThreeParamState t{n, x[0], x[1], x[2]};
    return -sum_f_log_p(f, three_param_probabilities(amp, t));
  };
  SimplexOptions<3> so;
  so.initialStep = {1.0 / std::max(1, opts.gridEpsilon - 1),
                    std::numbers::pi / std::max(1, opts.gridPhi),
                    0.5 / std::max(1, opts.gridDelta - 1)};
  so.diameterTolerance = opts.diameterTolerance;
  so.maxIterations = opts.maxSimplexIterations;

  FitResult best;
  best.model = Model::kThreeParam;
  best.logLikelihood = -std::numeric_limits<double>::infinity();
  std::array<double, 3> bestX = grid.front().x;
  int totalIterations = 0;
  const int starts = std::min<int>(opts.refineStarts, static_cast<int>(grid.size()));
  for (int i = 0; i < starts; ++i) {
    const auto r = nelder_mead<3>(objective, project, grid[i].x, so);
    totalIterations += r.iterations;
    if (-r.value > best.logLikelihood) {
      best.logLikelihood = -r.value;
      best.converged = r.converged;
      bestX = r.x;
    }
  }
  // Refinement only ever improves on the grid.
  if (grid.front().ll > best.logLikelihood) {
    best.logLikelihood = grid.front().ll;
    bestX = grid.front().x;
  }
  ThreeParamState t{n, bestX[0], wrap_phase(bestX[1]), bestX[2]};
  best.params = t;
  best.state = t.to_pi_state();
  best.iterations = totalIterations;
  return best;
}

FitResult fit_pi(const CountsDataset& data, const PiFitOptions& opts) {
  require_data(data, "fit_pi");
  const int n = data.nQubits;
  const PiEngine engine(data);
  const std::size_t nb = engine.blocks();

  std::vector<BlockMatrix> w = pi_identity_state(n).weighted_blocks();
  std::vector<bool> frozen(nb, false);
  Eigen::MatrixXd p = engine.probabilities(w);
  double ll = engine.log_likelihood(p);

  FitResult result;
  result.model = Model::kPI;
  double kappa = opts.initialKappa;
  int streak = 0;
  int it = 0;
  std::vector<BlockMatrix> grad(nb);
  std::vector<BlockMatrix> trial(nb);
  bool needGradient = true;

  while (it < opts.maxIterations) {
    if (needGradient) {
      for (std::size_t b = 0; b < nb; ++b) {
        grad[b] = frozen[b] ? BlockMatrix() : engine.gradient_block(b, p);
      }
      needGradient = false;
    }
    double total = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      if (frozen[b]) {
        trial[b] = BlockMatrix::Zero(w[b].rows(), w[b].cols());
        continue;
      }
      BlockMatrix t = kappa * grad[b];
      t.diagonal().array() += 1.0;
      t /= (1.0 + kappa);
      trial[b] = t * w[b] * t.adjoint();
      trial[b] = 0.5 * (trial[b] + trial[b].adjoint()).eval();
      total += trial[b].trace().real();
    }
    for (auto& t : trial) t /= total;

    const Eigen::MatrixXd pTrial = engine.probabilities(trial);
    const double llTrial = engine.log_likelihood(pTrial);
    ++it;
    if (!(llTrial >= ll)) {
      kappa *= 0.5;
      streak = 0;
      if (kappa < 1e-12) {
        // No ascent direction left at machine precision.
        result.converged = true;
        break;
      }
      continue;
    }
    const double gain = llTrial - ll;
    w.swap(trial);
    p = pTrial;
    ll = llTrial;
    needGradient = true;
    for (std::size_t b = 0; b < nb; ++b) {
      if (!frozen[b] && w[b].trace().real() < opts.frozenWeight) {
        frozen[b] = true;
        w[b].setZero();
      }
    }
    if (opts.onAccepted) opts.onAccepted(it, ll, w);
    if (gain < opts.gainTolerance) {
      result.converged = true;
      break;
    }
    if (++streak >= opts.resetStreak) {
      kappa = opts.initialKappa;
      streak = 0;
    }
  }
  result.state = PIState::from_weighted(n, w);
  // Likelihood of the state actually returned (after freezing and normalization).
  result.logLikelihood = engine.log_likelihood(engine.probabilities(result.state.weighted_blocks()));
  result.iterations = it;
  return result;
}

double pi_stationarity(const PIState& state, const CountsDataset& data) {
  const PiEngine engine(data);
  const auto w = state.weighted_blocks();
  const Eigen::MatrixXd p = engine.probabilities(w);
  double num = 0.0, den = 0.0;
  for (std::size_t b = 0; b < engine.blocks(); ++b) {
    if (state.block(b).weight == 0.0) continue;
    const BlockMatrix r = engine.gradient_block(b, p);
    num += (r * w[b] - w[b] * r).squaredNorm();
    den += w[b].squaredNorm();
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

}  // namespace aicsel
