#pragma once

// Flat key=value run configuration. Each command has a fixed key set with
// defaults; config files and command-line overrides may only set known keys.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace aicsel::cli {

/// Bad user input: unknown key, malformed value, out-of-range setting.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

/// '#' starts a comment; blank lines are ignored. `origin` prefixes errors.
KeyValues parse_key_values(std::istream& in, const std::string& origin);
KeyValues read_config_file(const std::string& path);

/// Commands and their keys with default values.
const std::map<std::string, KeyValues>& command_defaults();

class Config {
 public:
  explicit Config(std::string command);

  /// Later merges win. Unknown keys raise ValidationError naming `origin`.
  void merge(const KeyValues& values, const std::string& origin);

  const std::string& command() const { return command_; }
  const KeyValues& values() const { return values_; }

  std::string str(const std::string& key) const;
  int integer(const std::string& key) const;
  std::uint64_t unsigned64(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;
  std::vector<std::uint64_t> unsigned64s(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;

  /// Keys that change where or how fast a run happens, never its numbers.
  static bool is_execution_key(const std::string& key) { return key == "out" || key == "workers"; }

  /// "command=<cmd>" followed by sorted key=value lines, execution keys
  /// excluded.
  std::string canonical() const;
  /// FNV-1a over canonical().
  std::uint64_t hash() const;

 private:
  std::string command_;
  KeyValues values_;
};

}  // namespace aicsel::cli
