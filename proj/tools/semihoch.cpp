#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "semihoch/cli.hpp"

namespace cli = semihoch::cli;

int main(int argc, char** argv) {
  CLI::App app{"Hochschild homology of semilattice-graded algebras"};
  app.require_subcommand(1);

  std::string input, out;
  cli::RunConfig cfg;
  std::vector<std::string> suites, suite_flags;
  bool no_cache = false;
  if (const char* env = std::getenv("SEMIHOCH_CACHE_DIR")) cfg.cache_dir = env;

  auto common = [&](CLI::App* sub) {
    sub->add_option("instance", input, "instance JSON file, - for stdin")->required();
    sub->add_option("--max-degree", cfg.max_degree, "highest chain degree")->capture_default_str();
    sub->add_option("--out", out, "write the JSON report here (- for stdout)");
    sub->add_option("--cache", cfg.cache_dir, "result cache directory");
    sub->add_flag("--no-cache", no_cache, "ignore the result cache");
    sub->add_option("--resource-limit", cfg.resource_limit, "largest chain dimension built")
        ->capture_default_str();
    sub->add_option("--sigma-budget", cfg.sigma_budget, "largest free-case boundary (columns) the sigma suite factors")
        ->capture_default_str();
    sub->add_flag("--direct-solve", cfg.direct_solve, "compute sigma by direct solves");
  };
  const std::map<std::string, std::string> about{
      {"validate", "check that an instance is well formed"},
      {"homology", "Betti numbers with regular coefficients"},
      {"cohomology", "Betti numbers with dual coefficients"},
      {"decompose", "strong semilattice decomposition of a semigroup"},
      {"diagonal", "diagonals of the shape algebra and the fibres"},
      {"verify", "run verification suites"}};
  for (const auto& name : cli::command_names()) {
    auto* sub = app.add_subcommand(name, about.count(name) ? about.at(name) : "");
    common(sub);
    if (name == "verify") {
      auto names = cli::suite_names();
      names.push_back("all");
      sub->add_option("suites", suites, "suites to run, or all")->check(CLI::IsMember(names));
      sub->add_option("--suite", suite_flags, "suite to run (repeatable)")->check(CLI::IsMember(names));
    }
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  if (no_cache) cfg.cache_dir.clear();
  suites.insert(suites.end(), suite_flags.begin(), suite_flags.end());
  cfg.suites = suites.empty() ? std::vector<std::string>{"all"} : suites;

  std::string text;
  if (input == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(input);
    if (!in) {
      std::cerr << "error: cannot read " << input << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  try {
    auto inst = cli::parse_instance(text);
    if (inst.name.empty() && input != "-") inst.name = input;
    auto result = cli::run(command, inst, cfg);
    if (out == "-") {
      std::cout << result.report.dump(2) << "\n";
    } else {
      std::cout << cli::render_table(result.report);
      if (!out.empty()) {
        std::ofstream f(out);
        f << result.report.dump(2) << "\n";
      }
    }
    return result.exit_code;
  } catch (const cli::SchemaError& e) {
    std::cerr << "schema error at " << e.what() << "\n";
    return 2;
  } catch (const semihoch::ValidationError& e) {
    std::cerr << "invalid instance: " << e.what() << "\n";
    return 2;
  } catch (const semihoch::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
