#include "aicsel/serialization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string_view>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aicsel/errors.hpp"

namespace aicsel {

using nlohmann::json;

namespace {

json state_json(const PIState& state) {
  json blocks = json::array();
  for (const auto& b : state.blocks()) {
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < b.rho.rows(); ++r) {
      json rr = json::array(), ir = json::array();
      for (Eigen::Index c = 0; c < b.rho.cols(); ++c) {
        rr.push_back(b.rho(r, c).real());
        ir.push_back(b.rho(r, c).imag());
      }
      re.push_back(std::move(rr));
      im.push_back(std::move(ir));
    }
    blocks.push_back({{"twoJ", b.spin.twoJ()},
                      {"weight", b.weight},
                      {"rho_real", std::move(re)},
                      {"rho_imag", std::move(im)}});
  }
  return {{"nQubits", state.n_qubits()}, {"blocks", std::move(blocks)}};
}

// JSON has no infinity; -inf log-likelihoods are written as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& field, std::size_t lineNo, const char* name) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("line " + std::to_string(lineNo) + ": bad " + name + " '" + field + "'");
  }
  return value;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void write_preamble(std::ostream& out, std::string_view preamble) {
  std::size_t pos = 0;
  while (pos < preamble.size()) {
    const auto end = std::min(preamble.find('\n', pos), preamble.size());
    out << "# " << preamble.substr(pos, end - pos) << '\n';
    pos = end + 1;
  }
}

// First line that is neither blank nor a '#' comment.
bool next_header(std::istream& in, std::string& line, std::size_t& lineNo) {
  while (std::getline(in, line)) {
    ++lineNo;
    line = strip_cr(line);
    if (!line.empty() && line.front() != '#') return true;
  }
  return false;
}

}  // namespace

std::string to_json(const PIState& state, int indent) { return state_json(state).dump(indent); }

PIState pi_state_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    const int n = j.at("nQubits").get<int>();
    const auto spins = spins_for(n);
    const auto& blocks = j.at("blocks");
    if (blocks.size() != spins.size()) throw ParseError("PIState JSON: wrong number of blocks");
    std::vector<PIBlock> out;
    for (std::size_t i = 0; i < spins.size(); ++i) {
      const auto& b = blocks[i];
      const SpinLabel s(b.at("twoJ").get<int>());
      const int d = s.dim();
      BlockMatrix rho(d, d);
      const auto& re = b.at("rho_real");
      const auto& im = b.at("rho_imag");
      if (re.size() != std::size_t(d) || im.size() != std::size_t(d)) {
        throw ParseError("PIState JSON: block " + std::to_string(i) + " has wrong row count");
      }
      for (int r = 0; r < d; ++r) {
        if (re[r].size() != std::size_t(d) || im[r].size() != std::size_t(d)) {
          throw ParseError("PIState JSON: block " + std::to_string(i) + " has a ragged row");
        }
        for (int c = 0; c < d; ++c) rho(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
      }
      out.push_back(PIBlock{s, b.at("weight").get<double>(), std::move(rho)});
    }
    return PIState(n, std::move(out));
  } catch (const json::exception& e) {
    throw ParseError(std::string("PIState JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("PIState JSON: ") + e.what());
  }
}

std::string to_json(const FitResult& fit, int indent) {
  json j;
  j["model"] = fit.model == Model::kThreeParam ? "3p" : "pi";
  j["logLikelihood"] = finite_or_null(fit.logLikelihood);
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["paramCount"] = fit.model == Model::kThreeParam ? kThreeParamCount
                                                    : pi_param_count(fit.state.n_qubits());
  if (fit.params) {
    j["params"] = {{"epsilon", fit.params->epsilon},
                   {"phi", fit.params->phi},
                   {"delta", fit.params->delta}};
  }
  j["state"] = state_json(fit.state);
  return j.dump(indent);
}

std::string to_json(const AicReport& r, int indent) {
  json j{{"convention", "deltaAic = AIC_3P - AIC_PI; negative favours the 3-parameter model"},
         {"logLikelihood3p", finite_or_null(r.logLikelihood3p)},
         {"logLikelihoodPI", finite_or_null(r.logLikelihoodPI)},
         {"aic3p", finite_or_null(r.aic3p)},
         {"aicPI", finite_or_null(r.aicPI)},
         {"deltaAic", finite_or_null(r.deltaAic)},
         {"k3p", r.k3p},
         {"kPI", r.kPI},
         {"M", r.M},
         {"piIterations", r.piIterations},
         {"piConverged", r.piConverged}};
  return j.dump(indent);
}

void write_counts_csv(std::ostream& out, const CountsDataset& data, std::string_view preamble) {
  write_preamble(out, preamble);
  out << kCountsCsvHeader << '\n';
  for (std::size_t s = 0; s < data.perSetting.size(); ++s) {
    const auto& sc = data.perSetting[s];
    for (std::size_t k = 0; k < sc.histogram.size(); ++k) {
      if (sc.histogram[k] == 0) continue;
      out << s << ',' << shortest(sc.setting.theta) << ',' << shortest(sc.setting.phi) << ','
          << k << ',' << sc.histogram[k] << '\n';
    }
  }
}

CountsDataset read_counts_csv(std::istream& in, int nQubits) {
  if (nQubits < 1) throw InvalidArgument("read_counts_csv: qubit count must be positive");
  std::string line;
  std::size_t lineNo = 0;
  if (!next_header(in, line, lineNo)) {
    throw ParseError("line " + std::to_string(lineNo + 1) + ": empty file, expected header");
  }
  if (line != kCountsCsvHeader) {
    throw ParseError("line " + std::to_string(lineNo) + ": expected header '" +
                     std::string(kCountsCsvHeader) + "'");
  }
  std::map<std::size_t, SettingCounts> bySetting;
  while (std::getline(in, line)) {
    ++lineNo;
    line = strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    const auto f = split(line, ',');
    if (f.size() != 5) {
      throw ParseError("line " + std::to_string(lineNo) + ": expected 5 fields, got " +
                       std::to_string(f.size()));
    }
    const auto idx = parse_number<std::size_t>(f[0], lineNo, "setting_index");
    const auto theta = parse_number<double>(f[1], lineNo, "theta");
    const auto phi = parse_number<double>(f[2], lineNo, "phi");
    const auto k = parse_number<int>(f[3], lineNo, "k");
    const auto count = parse_number<std::uint64_t>(f[4], lineNo, "count");
    if (k < 0 || k > nQubits) {
      throw ParseError("line " + std::to_string(lineNo) + ": k=" + std::to_string(k) +
                       " outside 0.." + std::to_string(nQubits));
    }
    auto [it, inserted] = bySetting.try_emplace(idx);
    if (inserted) {
      it->second.setting = Setting::from_angles(theta, phi);
      it->second.histogram.assign(nQubits + 1, 0);
    } else if (it->second.setting.theta != theta || it->second.setting.phi != phi) {
      throw ParseError("line " + std::to_string(lineNo) + ": setting " + std::to_string(idx) +
                       " changes its angles");
    }
    it->second.histogram[k] += count;
  }
  if (bySetting.empty()) throw ParseError("line " + std::to_string(lineNo) + ": no data rows");
  CountsDataset data;
  data.nQubits = nQubits;
  for (auto& [idx, sc] : bySetting) data.perSetting.push_back(std::move(sc));
  return data;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, std::string_view preamble) {
  write_preamble(out, preamble);
  out << kSweepCsvHeader << '\n';
  for (const auto& r : result.records) {
    out << result.nQubits << ',' << shortest(result.q) << ',' << r.M << ',' << r.repetition << ','
        << shortest(r.report.deltaAic) << ',' << r.seed << '\n';
  }
}

std::vector<RepetitionRecord> read_sweep_csv(std::istream& in, std::vector<std::uint64_t>& mGrid) {
  std::string line;
  std::size_t lineNo = 0;
  if (!next_header(in, line, lineNo) || line != kSweepCsvHeader) {
    throw ParseError("line " + std::to_string(std::max<std::size_t>(lineNo, 1)) +
                     ": expected header '" + std::string(kSweepCsvHeader) + "'");
  }
  std::vector<RepetitionRecord> records;
  std::set<std::uint64_t> ms;
  while (std::getline(in, line)) {
    ++lineNo;
    line = strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw ParseError("line " + std::to_string(lineNo) + ": expected 6 fields");
    RepetitionRecord r;
    r.M = parse_number<std::uint64_t>(f[2], lineNo, "M");
    r.repetition = parse_number<int>(f[3], lineNo, "rep");
    r.report.deltaAic = parse_number<double>(f[4], lineNo, "delta_aic");
    r.seed = parse_number<std::uint64_t>(f[5], lineNo, "seed");
    r.report.M = r.M;
    ms.insert(r.M);
    records.push_back(r);
  }
  mGrid.assign(ms.begin(), ms.end());
  for (auto& r : records) {
    r.mIndex = static_cast<std::size_t>(std::lower_bound(mGrid.begin(), mGrid.end(), r.M) - mGrid.begin());
  }
  return records;
}

std::string sweep_summary_json(const SweepResult& result, const std::string& configJson) {
  json grid = json::array();
  for (const auto& g : result.grid) {
    grid.push_back({{"M", g.M},
                    {"meanDeltaAic", g.meanDeltaAic},
                    {"stdDeltaAic", g.stdDeltaAic},
                    {"repetitions", g.repetitions}});
  }
  json j{{"N", result.nQubits},
         {"q", result.q},
         {"convention", "deltaAic = AIC_3P - AIC_PI; negative favours the 3-parameter model"},
         {"grid", std::move(grid)},
         {"crossingM", result.crossingM ? json(*result.crossingM) : json(nullptr)},
         {"censored", result.censored},
         {"config", configJson.empty() ? json::object() : json::parse(configJson)}};
  return j.dump(2);
}

}  // namespace aicsel
