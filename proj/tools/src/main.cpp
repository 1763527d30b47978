#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aicsel/errors.hpp"
#include "aicsel/version.hpp"
#include "commands.hpp"
#include "config.hpp"

using namespace aicsel::cli;

namespace {

struct Overrides {
  std::string configPath;
  std::vector<std::string> sets;
  std::map<std::string, std::optional<std::string>> flags;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help,
                      Overrides& o, const std::vector<std::pair<std::string, std::string>>& flags) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", o.configPath, "key=value config file");
  sub->add_option("--set", o.sets, "override any config key (key=value), repeatable");
  for (const auto& [flag, key] : flags) {
    auto& slot = o.flags[key];
    sub->add_option_function<std::string>(
        "--" + flag, [&slot](const std::string& v) { slot = v; }, "sets config key '" + key + "'");
  }
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AIC model selection between a noisy-GHZ model and the permutationally invariant model"};
  app.set_version_flag("--version", std::string(aicsel::kVersion));
  app.require_subcommand(1);

  Overrides o;
  std::string datasetPath;
  const std::vector<std::pair<std::string, std::string>> common{
      {"qubits", "qubits"}, {"q", "q"},           {"seed", "seed"},
      {"out", "out"},       {"workers", "workers"}, {"reps", "reps"}};
  auto with = [&](std::vector<std::pair<std::string, std::string>> extra, bool batch) {
    auto all = common;
    if (!batch) std::erase_if(all, [](const auto& f) { return f.first == "workers" || f.first == "reps"; });
    all.insert(all.end(), extra.begin(), extra.end());
    return all;
  };

  add_command(app, "simulate", "sample a counts dataset", o, with({{"shots", "shots"}}, false));
  auto* fit = add_command(app, "fit", "fit the 3p or pi model to a counts CSV", o,
                          {{"qubits", "qubits"}, {"out", "out"}, {"model", "model"}});
  fit->add_option("dataset", datasetPath, "counts CSV written by simulate");
  add_command(app, "sweep", "mean delta-AIC over an M grid (auto-widened when m_grid is empty)", o,
              with({{"m-grid", "m_grid"}}, true));
  add_command(app, "scaling-n", "crossing point against the number of qubits", o,
              with({{"n-list", "n_list"}}, true));
  add_command(app, "scaling-q", "crossing point against the perturbation strength", o,
              with({{"q-list", "q_list"}}, true));
  add_command(app, "oracle-check", "block engine against the dense 2^N reference", o,
              with({{"samples", "samples"}}, false));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    Config config(command);
    if (!o.configPath.empty()) config.merge(read_config_file(o.configPath), o.configPath);
    KeyValues cli;
    for (const auto& s : o.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + s + "'");
      cli[s.substr(0, eq)] = s.substr(eq + 1);
    }
    for (const auto& [key, value] : o.flags) {
      if (value) cli[key] = *value;
    }
    if (!datasetPath.empty()) cli["dataset"] = datasetPath;
    config.merge(cli, "command line");
    return run_command(config, std::cout, std::cerr);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const aicsel::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const aicsel::Unsupported& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const aicsel::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitFailure;
  }
}
