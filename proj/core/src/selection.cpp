#include "aicsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

#include "aicsel/errors.hpp"
#include "aicsel/parallel.hpp"
#include "aicsel/seeds.hpp"

namespace aicsel {

double aic(double logLikelihood, int paramCount) {
  if (paramCount < 0) throw InvalidArgument("aic: parameter count must be non-negative");
  return -2.0 * logLikelihood + 2.0 * paramCount;
}

AicReport delta_aic(const CountsDataset& data, const DeltaAicOptions& opts) {
  AicReport r;
  r.M = data.total_shots();
  r.kPI = pi_param_count(data.nQubits);

  const FitResult three = fit_three_param(data, opts.threeParam);

  PiFitOptions piOpts = opts.pi;
  double previous = -std::numeric_limits<double>::infinity();
  bool monotone = true;
  auto userHook = opts.pi.onAccepted;
  piOpts.onAccepted = [&](int it, double ll, const std::vector<BlockMatrix>& w) {
    if (ll < previous) monotone = false;
    previous = ll;
    if (userHook) userHook(it, ll, w);
  };
  const FitResult pi = fit_pi(data, piOpts);

  r.logLikelihood3p = three.logLikelihood;
  r.logLikelihoodPI = pi.logLikelihood;
  r.aic3p = aic(three.logLikelihood, r.k3p);
  r.aicPI = aic(pi.logLikelihood, r.kPI);
  r.deltaAic = r.aic3p - r.aicPI;
  r.piIterations = pi.iterations;
  r.piConverged = pi.converged;
  r.piMonotone = monotone;
  return r;
}

std::vector<GridStat> aggregate(std::span<const RepetitionRecord> records,
                                std::span<const std::uint64_t> mGrid) {
  std::vector<GridStat> out(mGrid.size());
  std::vector<std::vector<double>> values(mGrid.size());
  for (const auto& rec : records) {
    if (rec.mIndex >= mGrid.size()) throw InvalidArgument("aggregate: record outside grid");
    values[rec.mIndex].push_back(rec.report.deltaAic);
  }
  for (std::size_t i = 0; i < mGrid.size(); ++i) {
    const auto& v = values[i];
    out[i].M = mGrid[i];
    out[i].repetitions = static_cast<int>(v.size());
    if (v.empty()) continue;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    out[i].meanDeltaAic = mean;
    out[i].stdDeltaAic = v.size() > 1 ? std::sqrt(ss / double(v.size() - 1)) : 0.0;
  }
  return out;
}

std::optional<double> crossing_point(std::span<const GridStat> grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].meanDeltaAic > 0.0) {
      if (i == 0) return std::nullopt;
      const auto& lo = grid[i - 1];
      const auto& hi = grid[i];
      if (lo.meanDeltaAic > 0.0) return std::nullopt;
      const double t = -lo.meanDeltaAic / (hi.meanDeltaAic - lo.meanDeltaAic);
      return double(lo.M) + t * (double(hi.M) - double(lo.M));
    }
  }
  return std::nullopt;
}

PIState true_state(const SweepConfig& config, int repetition) {
  ThreeParamState base = config.base;
  base.nQubits = config.nQubits;
  base.validate();
  if (config.q == 0.0) return base.to_pi_state();
  const int drawIndex = config.pinPerturbation ? 0 : repetition;
  const auto seed = derive_seed(config.baseSeed, static_cast<std::uint64_t>(drawIndex), 0,
                                StreamTag::kPerturbation);
  const PIState perturbation = orthogonalize_to_3p(random_pi_state(config.nQubits, seed));
  return mix_true_state(base, perturbation, config.q);
}

namespace {

void validate_config(const SweepConfig& c) {
  if (c.nQubits < 2) throw InvalidArgument("sweep: need at least two qubits");
  if (!(c.q >= 0.0 && c.q <= 1.0)) throw InvalidArgument("sweep: q must lie in [0, 1]");
  if (c.repetitions < 1) throw InvalidArgument("sweep: repetitions must be >= 1");
  const auto d = static_cast<std::uint64_t>(setting_count(c.nQubits));
  for (std::size_t i = 0; i < c.mGrid.size(); ++i) {
    if (c.mGrid[i] < d) {
      throw InvalidArgument("sweep: grid value " + std::to_string(c.mGrid[i]) +
                            " is below D_N = " + std::to_string(d));
    }
    if (i > 0 && c.mGrid[i] <= c.mGrid[i - 1]) {
      throw InvalidArgument("sweep: M grid must be strictly ascending");
    }
  }
}

// Evaluate grid points [first, mGrid.size()) for all repetitions.
std::vector<RepetitionRecord> run_items(const SweepConfig& c, const std::vector<PIState>& states,
                                        const MeasurementPlan& plan, std::size_t first) {
  const std::size_t nM = c.mGrid.size() - first;
  const std::size_t total = nM * static_cast<std::size_t>(c.repetitions);
  std::vector<RepetitionRecord> out(total);
  std::mutex progressMutex;
  std::size_t done = 0;
  parallel_for(total, c.workers, [&](std::size_t item) {
    const int rep = static_cast<int>(item / nM);
    const std::size_t mi = first + item % nM;
    RepetitionRecord rec;
    rec.repetition = rep;
    rec.mIndex = mi;
    rec.M = c.mGrid[mi];
    rec.seed = derive_seed(c.baseSeed, static_cast<std::uint64_t>(rep), rec.M, StreamTag::kSampling);
    const CountsDataset data = sample_dataset(states[static_cast<std::size_t>(rep)], plan, rec.M, rec.seed);
    rec.report = delta_aic(data, c.fit);
    out[item] = rec;
    if (c.progress) {
      std::lock_guard lock(progressMutex);
      c.progress(++done, total);
    }
  });
  return out;
}

std::vector<PIState> true_states(const SweepConfig& c) {
  std::vector<PIState> states;
  states.reserve(static_cast<std::size_t>(c.repetitions));
  for (int r = 0; r < c.repetitions; ++r) states.push_back(true_state(c, r));
  return states;
}

void sort_records(std::vector<RepetitionRecord>& records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.repetition, a.mIndex) < std::tie(b.repetition, b.mIndex);
  });
}

}  // namespace

SweepResult sweep(const SweepConfig& config) {
  validate_config(config);
  if (config.mGrid.empty()) throw InvalidArgument("sweep: empty M grid");
  const MeasurementPlan plan = generate_plan(config.nQubits);
  const auto states = true_states(config);

  SweepResult res;
  res.nQubits = config.nQubits;
  res.q = config.q;
  res.records = run_items(config, states, plan, 0);
  sort_records(res.records);
  res.grid = aggregate(res.records, config.mGrid);
  res.crossingM = crossing_point(res.grid);
  return res;
}

SweepResult auto_sweep(SweepConfig config, const WideningOptions& widening) {
  const auto d = static_cast<std::uint64_t>(setting_count(config.nQubits));
  const std::uint64_t start = widening.startM == 0 ? d : widening.startM;
  config.mGrid.clear();
  validate_config(config);
  if (start < d) throw InvalidArgument("auto_sweep: start below D_N");

  const MeasurementPlan plan = generate_plan(config.nQubits);
  const auto states = true_states(config);

  SweepResult res;
  res.nQubits = config.nQubits;
  res.q = config.q;
  for (std::uint64_t m = start; m <= widening.ceiling; m *= 2) {
    config.mGrid.push_back(m);
    auto fresh = run_items(config, states, plan, config.mGrid.size() - 1);
    res.records.insert(res.records.end(), fresh.begin(), fresh.end());
    res.grid = aggregate(res.records, config.mGrid);
    if (res.grid.back().meanDeltaAic > 0.0) break;
  }
  sort_records(res.records);
  res.crossingM = crossing_point(res.grid);
  res.censored = !res.crossingM.has_value();
  return res;
}

namespace {

ScalingPoint scaling_point(int n, double q, const ScalingOptions& opts) {
  SweepConfig c;
  c.nQubits = n;
  c.q = q;
  c.base = opts.base;
  c.base.nQubits = n;
  c.repetitions = opts.repetitions;
  c.baseSeed = opts.baseSeed;
  c.workers = opts.workers;
  c.fit = opts.fit;
  c.progress = opts.progress;
  ScalingPoint pt;
  pt.nQubits = n;
  pt.q = q;
  pt.sweep = auto_sweep(c, opts.widening);
  pt.crossingM = pt.sweep.crossingM;
  pt.censored = pt.sweep.censored;
  if (opts.log) {
    std::ostringstream msg;
    msg << "N=" << n << " q=" << q << " crossingM=";
    if (pt.crossingM) msg << *pt.crossingM; else msg << "censored";
    opts.log(msg.str());
  }
  return pt;
}

}  // namespace

std::vector<ScalingPoint> scaling_in_n(double q, std::span<const int> nList,
                                       const ScalingOptions& opts) {
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("scaling_in_n: q must lie in (0, 1]");
  std::vector<ScalingPoint> out;
  for (int n : nList) out.push_back(scaling_point(n, q, opts));
  return out;
}

std::vector<ScalingPoint> scaling_in_q(int nQubits, std::span<const double> qList,
                                       const ScalingOptions& opts) {
  std::vector<ScalingPoint> out;
  for (double q : qList) {
    if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("scaling_in_q: every q must lie in (0, 1]");
    out.push_back(scaling_point(nQubits, q, opts));
  }
  return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("linear_fit: need two or more paired points");
  }
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace aicsel
