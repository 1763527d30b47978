#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aicsel/errors.hpp"
#include "aicsel/oracle.hpp"
#include "aicsel/seeds.hpp"
#include "aicsel/selection.hpp"
#include "aicsel/serialization.hpp"
#include "aicsel/version.hpp"

namespace aicsel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void check_qubits(int n, int lo = 2, int hi = 30) {
  check(n >= lo && n <= hi, "qubits must lie in [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "], got " + std::to_string(n));
}

void check_q(double q) { check(q >= 0.0 && q <= 1.0, "q must lie in [0, 1]"); }

ThreeParamState base_state(const Config& c, int n) {
  ThreeParamState s{n, c.real("epsilon"), c.real("phi"), c.real("delta")};
  check(s.epsilon >= -1.0 && s.epsilon <= 1.0, "epsilon must lie in [-1, 1]");
  check(s.delta >= 0.0 && s.delta <= 1.0, "delta must lie in [0, 1]");
  return s;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream ss;
  ss << std::put_time(&utc, "%Y%m%dT%H%M%SZ");
  return ss.str();
}

std::string hex(std::uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << v;
  return ss.str();
}

// Per-invocation output directory plus the metadata every file carries.
class RunOutput {
 public:
  explicit RunOutput(const Config& c) : config_(c), created_(timestamp()) {
    const fs::path root = c.str("out");
    const std::string stem = created_ + "-" + hex(c.hash()).substr(0, 12);
    dir_ = root / stem;
    for (int i = 1; fs::exists(dir_); ++i) dir_ = root / (stem + "-" + std::to_string(i));
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  const fs::path& dir() const { return dir_; }

  json metadata(const json& seeds) const {
    json cfg = json::object();
    for (const auto& [k, v] : config_.values()) cfg[k] = v;
    return {{"tool", "aicsel"},
            {"version", kVersion},
            {"command", config_.command()},
            {"created", created_},
            {"configHash", hex(config_.hash())},
            {"config", std::move(cfg)},
            {"seeds", seeds}};
  }

  // Comment preamble for CSV files; stripped of "# " it is a valid config file.
  std::string preamble(const json& seeds) const {
    std::string p = "aicsel " + std::string(kVersion) + " " + config_.command() + "\nseeds " +
                    seeds.dump() + "\n";
    for (const auto& [k, v] : config_.values()) {
      if (!Config::is_execution_key(k)) p += k + "=" + v + "\n";
    }
    p.pop_back();
    return p;
  }

  std::ofstream open(const std::string& name) const {
    const fs::path path = dir_ / name;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    return f;
  }

  void write_json(const std::string& name, const json& j) const {
    auto f = open(name);
    f << j.dump(2) << '\n';
    if (!f) throw std::runtime_error("write failed for '" + (dir_ / name).string() + "'");
  }

 private:
  const Config& config_;
  std::string created_;
  fs::path dir_;
};

std::function<void(std::size_t, std::size_t)> progress_printer(std::ostream& log) {
  return [&log](std::size_t done, std::size_t total) {
    log << "progress " << done << "/" << total << '\n' << std::flush;
  };
}

json sweep_json(const SweepResult& r) {
  json j = json::parse(sweep_summary_json(r, "{}"));
  j.erase("config");  // the enclosing metadata already carries it
  return j;
}

int cmd_simulate(const Config& c, std::ostream& out) {
  const int n = c.integer("qubits");
  check_qubits(n);
  const double q = c.real("q");
  check_q(q);
  const std::uint64_t shots = c.unsigned64("shots");
  const auto d = static_cast<std::uint64_t>(setting_count(n));
  check(shots >= d, "shots must be at least D_N = " + std::to_string(d));

  SweepConfig sc;
  sc.nQubits = n;
  sc.q = q;
  sc.base = base_state(c, n);
  sc.baseSeed = c.unsigned64("seed");
  const PIState truth = true_state(sc, 0);
  const std::uint64_t samplingSeed = derive_seed(sc.baseSeed, 0, shots, StreamTag::kSampling);
  const CountsDataset data = sample_dataset(truth, generate_plan(n), shots, samplingSeed);

  const json seeds{{"base", sc.baseSeed},
                   {"perturbation", derive_seed(sc.baseSeed, 0, 0, StreamTag::kPerturbation)},
                   {"sampling", samplingSeed}};
  RunOutput run(c);
  {
    auto f = run.open("counts.csv");
    write_counts_csv(f, data, run.preamble(seeds));
  }
  json meta = run.metadata(seeds);
  meta["settings"] = data.perSetting.size();
  meta["totalShots"] = data.total_shots();
  meta["trueState"] = json::parse(to_json(truth));
  run.write_json("metadata.json", meta);
  out << "output " << run.dir().string() << '\n';
  return kExitOk;
}

// N from --qubits, else from a "qubits=" line in the CSV preamble.
int dataset_qubits(const Config& c, const std::string& path) {
  int n = c.integer("qubits");
  if (n == 0) {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line) && !line.empty() && line.front() == '#') {
      if (line.rfind("# qubits=", 0) == 0) n = std::atoi(line.c_str() + 9);
    }
    check(n != 0, "dataset has no qubits= preamble line; pass --qubits");
  }
  check_qubits(n, 1, 30);
  return n;
}

int cmd_fit(const Config& c, std::ostream& out) {
  const std::string path = c.str("dataset");
  check(!path.empty(), "fit needs a dataset path");
  const std::string model = c.str("model");
  check(model == "3p" || model == "pi", "model must be 3p or pi, got '" + model + "'");
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset '" + path + "'");
  if (fs::file_size(path) == 0) throw ParseError(path + ": line 1: empty file, expected header");
  const int n = dataset_qubits(c, path);
  CountsDataset data;
  try {
    data = read_counts_csv(in, n);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }

  const FitResult fit = model == "3p" ? fit_three_param(data) : fit_pi(data);
  const int k = model == "3p" ? kThreeParamCount : pi_param_count(n);
  RunOutput run(c);
  json meta = run.metadata(json::object());
  meta["result"] = json::parse(to_json(fit));
  run.write_json("fit-" + model + ".json", meta);
  out << std::setprecision(12) << "logLikelihood " << fit.logLikelihood << '\n'
      << "paramCount " << k << '\n'
      << "output " << run.dir().string() << '\n';
  return kExitOk;
}

void fill_batch(const Config& c, ScalingOptions& o) {
  o.repetitions = c.integer("reps");
  check(o.repetitions >= 1, "reps must be >= 1");
  o.workers = c.integer("workers");
  check(o.workers >= 1 && o.workers <= 1024, "workers must lie in [1, 1024]");
  o.baseSeed = c.unsigned64("seed");
  o.widening.startM = c.unsigned64("m_start");
  o.widening.ceiling = c.unsigned64("m_ceiling");
  check(o.widening.ceiling >= 1, "m_ceiling must be positive");
}

void write_sweep_outputs(const RunOutput& run, const SweepResult& r, const std::string& stem,
                         const json& seeds) {
  auto f = run.open(stem + ".csv");
  write_sweep_csv(f, r, run.preamble(seeds));
}

int cmd_sweep(const Config& c, std::ostream& out, std::ostream& log) {
  SweepConfig sc;
  sc.nQubits = c.integer("qubits");
  check_qubits(sc.nQubits);
  sc.q = c.real("q");
  check_q(sc.q);
  sc.base = base_state(c, sc.nQubits);
  ScalingOptions o;
  fill_batch(c, o);
  sc.repetitions = o.repetitions;
  sc.workers = o.workers;
  sc.baseSeed = o.baseSeed;
  sc.pinPerturbation = c.flag("pin_perturbation");
  sc.progress = progress_printer(log);
  if (!c.str("m_grid").empty()) sc.mGrid = c.unsigned64s("m_grid");

  const SweepResult r = sc.mGrid.empty() ? auto_sweep(sc, o.widening) : sweep(sc);
  const json seeds{{"base", sc.baseSeed},
                   {"derivation", "derive_seed(base, rep, M, tag), SplitMix64 chain"}};
  RunOutput run(c);
  write_sweep_outputs(run, r, "sweep", seeds);
  json meta = run.metadata(seeds);
  meta["result"] = sweep_json(r);
  run.write_json("summary.json", meta);
  out << "crossingM ";
  if (r.crossingM) out << *r.crossingM; else out << "none";
  out << (r.censored ? " (censored)" : "") << '\n' << "output " << run.dir().string() << '\n';
  return kExitOk;
}

int cmd_scaling(const Config& c, bool overN, std::ostream& out, std::ostream& log) {
  ScalingOptions o;
  fill_batch(c, o);
  o.progress = progress_printer(log);
  o.log = [&log](const std::string& m) { log << m << '\n' << std::flush; };
  std::vector<ScalingPoint> pts;
  if (overN) {
    const double q = c.real("q");
    check(q > 0.0 && q <= 1.0, "q must lie in (0, 1]");
    const auto ns = c.integers("n_list");
    check(!ns.empty(), "n_list is empty");
    for (int n : ns) check_qubits(n);
    o.base = base_state(c, 0);
    pts = scaling_in_n(q, ns, o);
  } else {
    const int n = c.integer("qubits");
    check_qubits(n);
    const auto qs = c.reals("q_list");
    check(!qs.empty(), "q_list is empty");
    for (double q : qs) check(q > 0.0 && q <= 1.0, "every q in q_list must lie in (0, 1]");
    o.base = base_state(c, n);
    pts = scaling_in_q(n, qs, o);
  }

  const json seeds{{"base", o.baseSeed},
                   {"derivation", "derive_seed(base, rep, M, tag), SplitMix64 chain"}};
  RunOutput run(c);
  json points = json::array();
  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    std::ostringstream stem;
    stem << "sweep-N" << p.nQubits << "-q" << p.q;
    write_sweep_outputs(run, p.sweep, stem.str(), seeds);
    points.push_back({{"N", p.nQubits},
                      {"q", p.q},
                      {"crossingM", p.crossingM ? json(*p.crossingM) : json(nullptr)},
                      {"censored", p.censored},
                      {"sweep", sweep_json(p.sweep)}});
    if (p.crossingM) {
      xs.push_back(overN ? double(p.nQubits) : std::log(1.0 / p.q));
      ys.push_back(overN ? *p.crossingM : std::log(*p.crossingM));
    }
    out << "N=" << p.nQubits << " q=" << p.q << " crossingM=";
    if (p.crossingM) out << *p.crossingM; else out << "censored";
    out << '\n';
  }
  json meta = run.metadata(seeds);
  meta["points"] = std::move(points);
  if (xs.size() >= 2) {
    const LinearFit f = linear_fit(xs, ys);
    meta["fit"] = {{"x", overN ? "N" : "ln(1/q)"},
                   {"y", overN ? "crossingM" : "ln(crossingM)"},
                   {"intercept", f.intercept},
                   {"slope", f.slope},
                   {"r2", f.r2}};
    out << "fit slope=" << f.slope << " intercept=" << f.intercept << " r2=" << f.r2 << '\n';
  }
  run.write_json("summary.json", meta);
  out << "output " << run.dir().string() << '\n';
  return kExitOk;
}

int cmd_oracle_check(const Config& c, std::ostream& out) {
  const int n = c.integer("qubits");
  check_qubits(n, 1, oracle::kMaxQubits);
  const int samples = c.integer("samples");
  const int settings = c.integer("settings");
  check(samples >= 1 && settings >= 1, "samples and settings must be positive");
  const std::uint64_t seed = c.unsigned64("seed");

  std::function<void(std::vector<double>&)> tamper;
  const char* fault = std::getenv(kOracleFaultEnv);
  const bool faulty = fault != nullptr && std::string(fault) != "" && std::string(fault) != "0";
  if (faulty) tamper = [](std::vector<double>& p) { p.front() += 1e-6; p.back() -= 1e-6; };

  const auto report = oracle::check_equivalence(n, samples, settings, seed, tamper);
  const double tolerance = 1e-9;
  const bool pass = report.maxDeviation < tolerance;

  RunOutput run(c);
  json meta = run.metadata({{"base", seed}});
  meta["comparisons"] = report.comparisons;
  meta["maxDeviation"] = report.maxDeviation;
  meta["tolerance"] = tolerance;
  meta["pass"] = pass;
  meta["faultInjected"] = faulty;
  run.write_json("oracle.json", meta);
  out << std::scientific << std::setprecision(3) << "N=" << n << " comparisons="
      << report.comparisons << " maxDeviation=" << report.maxDeviation << " "
      << (pass ? "PASS" : "FAIL") << '\n'
      << "output " << run.dir().string() << '\n';
  return pass ? kExitOk : kExitFailure;
}

}  // namespace

int run_command(const Config& config, std::ostream& out, std::ostream& log) {
  const std::string& cmd = config.command();
  if (cmd == "simulate") return cmd_simulate(config, out);
  if (cmd == "fit") return cmd_fit(config, out);
  if (cmd == "sweep") return cmd_sweep(config, out, log);
  if (cmd == "scaling-n") return cmd_scaling(config, true, out, log);
  if (cmd == "scaling-q") return cmd_scaling(config, false, out, log);
  if (cmd == "oracle-check") return cmd_oracle_check(config, out);
  throw ValidationError("unknown command '" + cmd + "'");
}

}  // namespace aicsel::cli
