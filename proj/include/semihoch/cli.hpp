#pragma once

// Instance files, verification suites and reports behind the command line
// tool. Reports are JSON objects with sorted keys; everything outside the
// "timing" block is a deterministic function of the instance and config.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "semihoch/diagram.hpp"
#include "semihoch/error.hpp"
#include "semihoch/homology.hpp"

namespace semihoch::cli {

using json = nlohmann::json;

class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path(std::move(path)) {}
  std::string path;
};

struct Instance {
  std::string kind;  // semigroup, band, semilattice-diagram, clifford
  std::string name;
  std::string source;
  json canonical;  // the parsed document, used for hashing
  std::optional<FiniteSemigroup> semigroup;
  std::optional<DecompositionData> decomposition;
  SemilatticeDiagram diagram;
};

Instance parse_instance(std::string_view text);

struct RunConfig {
  unsigned max_degree = 2;
  std::vector<std::string> suites;  // for verify; "all" expands
  std::string cache_dir;            // empty: no cache
  std::size_t resource_limit = kDefaultResourceLimit;
  bool direct_solve = false;
  // Largest free-context boundary (in columns) the sigma suite will factor;
  // degrees beyond it are reported as SKIP.
  std::size_t sigma_budget = 100'000;
};

struct RunResult {
  json report;
  int exit_code = 0;
};

const std::vector<std::string>& command_names();
const std::vector<std::string>& suite_names();

// Throws SchemaError for unknown commands or suites.
RunResult run(const std::string& command, const Instance& instance, const RunConfig& config);

std::uint64_t fnv1a(std::string_view bytes);
// The report without its timing block, as stored in the cache.
std::string stable_text(const json& report);
std::string render_table(const json& report);

}  // namespace semihoch::cli
