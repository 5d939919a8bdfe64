#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cli.hpp"

namespace {

using cliffop::Json;
using cliffop::cli::ConfigError;

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

void print_claims() {
  for (const auto& c : cliffop::cli::commands()) {
    std::cout << c.name;
    if (!c.alias.empty()) std::cout << " (alias " << c.alias << ")";
    std::cout << "\n    " << c.claim << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for Clifford-valued Riccati and Schrodinger operators", "cliffop"};
  std::string command;
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool list_claims = false;
  app.add_option("command", command, "Command to run (see --list-claims)");
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "Seed for randomized checks (overrides the config)");
  app.add_option("--tol", tol, "Scaled tolerance applied to every report")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
  app.add_flag("--list-claims", list_claims, "List the commands and the statement each one checks");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list_claims) {
    print_claims();
    return 0;
  }
  if (command.empty()) {
    std::cerr << "error: no command given\n" << app.help();
    return 2;
  }

  try {
    Json raw = config_path.empty() ? Json::object() : load_config(config_path);
    if (seed) raw["seed"] = *seed;
    if (tol) raw["tolerance"]["override"] = *tol;
    const auto config = cliffop::cli::RunConfig::from_json(raw);
    const auto outcome = cliffop::cli::run(command, config);
    const std::string text = outcome.report.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) throw ConfigError("cannot write '" + out_path + "'");
      out << text;
    }
    return outcome.exit_code;
  } catch (const cliffop::ParseError& e) {
    std::cerr << "parse error at offset " << e.offset() << ": " << e.detail() << "\n";
    return 2;
  } catch (const cliffop::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
