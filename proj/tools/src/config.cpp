#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace aicsel::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T v{};
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ValidationError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_value<T>(key, trim(item)));
  return out;
}

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& origin) {
  KeyValues kv;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(origin + ":" + std::to_string(lineNo) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ValidationError(origin + ":" + std::to_string(lineNo) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  return parse_key_values(in, path);
}

const std::map<std::string, KeyValues>& command_defaults() {
  static const std::map<std::string, KeyValues> table = [] {
    const KeyValues base{{"epsilon", "0"}, {"phi", "0"}, {"delta", "1"}};
    const KeyValues run{{"seed", "1"}, {"out", "runs"}};
    const KeyValues batch{{"reps", "50"}, {"workers", "1"}, {"m_start", "0"},
                          {"m_ceiling", "4194304"}};
    auto join = [](std::initializer_list<KeyValues> parts) {
      KeyValues all;
      for (const auto& p : parts) all.insert(p.begin(), p.end());
      return all;
    };
    std::map<std::string, KeyValues> t;
    t["simulate"] = join({base, run, {{"qubits", "5"}, {"q", "0"}, {"shots", "2100"}}});
    t["fit"] = {{"dataset", ""}, {"model", "3p"}, {"qubits", "0"}, {"out", "runs"}};
    t["sweep"] = join({base, run, batch,
                       {{"qubits", "5"}, {"q", "0.02"}, {"m_grid", ""}, {"pin_perturbation", "false"}}});
    t["sweep"]["reps"] = "100";
    t["scaling-n"] = join({base, run, batch, {{"q", "0.02"}, {"n_list", "4,5,6,7,8,9,10"}}});
    t["scaling-q"] = join({base, run, batch, {{"qubits", "5"}, {"q_list", "0.01,0.02,0.04,0.08"}}});
    t["oracle-check"] = join({run, {{"qubits", "4"}, {"samples", "50"}, {"settings", "10"}}});
    return t;
  }();
  return table;
}

Config::Config(std::string command) : command_(std::move(command)) {
  const auto& table = command_defaults();
  const auto it = table.find(command_);
  if (it == table.end()) throw ValidationError("unknown command '" + command_ + "'");
  values_ = it->second;
}

void Config::merge(const KeyValues& values, const std::string& origin) {
  for (const auto& [key, value] : values) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
      throw ValidationError(origin + ": unknown key '" + key + "' for command '" + command_ + "'");
    }
    it->second = value;
  }
}

std::string Config::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw std::logic_error("config key '" + key + "' not declared");
  return it->second;
}

int Config::integer(const std::string& key) const { return parse_value<int>(key, str(key)); }

std::uint64_t Config::unsigned64(const std::string& key) const {
  return parse_value<std::uint64_t>(key, str(key));
}

double Config::real(const std::string& key) const { return parse_value<double>(key, str(key)); }

bool Config::flag(const std::string& key) const {
  const std::string v = str(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<int> Config::integers(const std::string& key) const {
  return parse_list<int>(key, str(key));
}

std::vector<std::uint64_t> Config::unsigned64s(const std::string& key) const {
  return parse_list<std::uint64_t>(key, str(key));
}

std::vector<double> Config::reals(const std::string& key) const {
  return parse_list<double>(key, str(key));
}

std::string Config::canonical() const {
  std::string out = "command=" + command_ + "\n";
  for (const auto& [k, v] : values_) {
    if (!is_execution_key(k)) out += k + "=" + v + "\n";
  }
  return out;
}

std::uint64_t Config::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace aicsel::cli
