#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "semihoch/cli.hpp"

using namespace semihoch;
using cli::json;

namespace {

const std::filesystem::path kFixtures = SEMIHOCH_FIXTURES;

std::string fixture(const std::string& name) {
  std::ifstream in(kFixtures / (name + ".json"));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cli::RunResult run(const std::string& cmd, const std::string& text,
                   std::vector<std::string> suites = {}) {
  cli::RunConfig cfg;
  cfg.suites = std::move(suites);
  return cli::run(cmd, cli::parse_instance(text), cfg);
}

const char* kChain2Q = R"({"kind":"semilattice-diagram","semilattice":{"chain":2},
  "algebras":{"c0":{"dim":1,"structure_constants":[[0,0,0,"1"]]},
              "c1":{"dim":1,"structure_constants":[[0,0,0,"1"]]}},
  "transitions":{"c1<c0":[["1"]]}})";

std::string schema_path(const std::string& text) {
  try {
    cli::parse_instance(text);
  } catch (const cli::SchemaError& e) {
    return e.path;
  }
  return "<none>";
}

}  // namespace

TEST_CASE("minimal semigroup instance") {
  auto inst = cli::parse_instance(R"({"kind":"semigroup","elements":["e"],"table":[[0]]})");
  CHECK(inst.semigroup->size() == 1);
  CHECK(inst.diagram.shape.size() == 1);
  auto r = cli::run("verify", inst, cli::RunConfig{.suites = {"all"}});
  CHECK(r.exit_code == 0);
}

TEST_CASE("schema errors carry a path") {
  CHECK(schema_path("not json") == "$");
  CHECK(schema_path(R"({"elements":[]})") == "$");
  CHECK(schema_path(R"({"kind":"monoid"})") == "$.kind");
  CHECK(schema_path(R"({"kind":"semigroup","elements":["e"],"table":[["x"]]})") == "$.table[0][0]");
  std::string bad_key = kChain2Q;
  bad_key.replace(bad_key.find("c1<c0"), 5, "c1c0");
  CHECK(schema_path(bad_key) == "$.transitions.c1c0");
  std::string bad_rational = kChain2Q;
  bad_rational.replace(bad_rational.find(R"([["1"]])"), 7, R"([["1/0"]])");
  CHECK(schema_path(bad_rational) == "$.transitions.c1<c0[0][0]");
  CHECK(schema_path(R"({"kind":"semilattice-diagram","semilattice":{"chain":2},"algebras":{"c0":{"dim":1,"structure_constants":[]}}})") ==
        "$.algebras");
}

TEST_CASE("invariant failures are validation errors") {
  // not associative
  CHECK_THROWS_AS(cli::parse_instance(R"({"kind":"semigroup","elements":["a","b"],"table":[[1,0],[0,0]]})"),
                  ValidationError);
  CHECK_THROWS_AS(cli::parse_instance(R"({"kind":"band","elements":["a","b"],"table":[[1,0],[0,1]]})"),
                  ValidationError);
  // transition between incomparable elements of free(2)
  CHECK_THROWS_AS(cli::parse_instance(R"({"kind":"semilattice-diagram","semilattice":{"free":2},
    "algebras":{"{1}":{"dim":1,"structure_constants":[[0,0,0,"1"]]},
                "{2}":{"dim":1,"structure_constants":[[0,0,0,"1"]]},
                "{1,2}":{"dim":1,"structure_constants":[[0,0,0,"1"]]}},
    "transitions":{"{1}<{2}":[["1"]]}})"),
                  ValidationError);
  // non-multiplicative transition
  std::string twice = kChain2Q;
  twice.replace(twice.find(R"([["1"]])"), 7, R"([["2"]])");
  CHECK_THROWS_AS(cli::parse_instance(twice), ValidationError);
  // a clifford component that is not a group
  CHECK_THROWS_AS(cli::parse_instance(R"({"kind":"clifford","semilattice":{"chain":1},
    "groups":{"c0":[[0,0],[0,1]]}})"),
                  ValidationError);
}

TEST_CASE("the 2-chain Z2 Clifford fixture assembles to four elements") {
  auto inst = cli::parse_instance(fixture("cliff-chain2-Z2"));
  REQUIRE(inst.semigroup);
  CHECK(inst.semigroup->size() == 4);
  CHECK(inst.semigroup->is_commutative());
  REQUIRE(inst.decomposition);
  CHECK(assemble_strong_semilattice(*inst.decomposition) == *inst.semigroup);
}

TEST_CASE("missing clifford homomorphisms are composed") {
  auto inst = cli::parse_instance(R"({"kind":"clifford","semilattice":{"chain":3},
    "groups":{"c0":[[0,1],[1,0]],"c1":[[0,1],[1,0]],"c2":[[0]]},
    "homs":{"c1<c0":[0,1],"c2<c1":[0,0]}})");
  CHECK(inst.decomposition->transition(2, 0) == std::vector<Element>{0, 0});
  CHECK(inst.semigroup->size() == 5);
}

TEST_CASE("homology of the free(2) constant fixture") {
  auto r = run("homology", fixture("free2-Q"));
  CHECK(r.exit_code == 0);
  CHECK(r.report["results"]["homology"]["betti"] == json::array({3, 0, 0}));
}

TEST_CASE("disintegration on the 2-chain Z2 Clifford fixture") {
  auto r = run("verify", fixture("cliff-chain2-Z2"), {"disintegration"});
  CHECK(r.exit_code == 0);
  CHECK(r.report["results"]["disintegration"]["full"] == json::array({4, 0, 0}));
  CHECK(r.report["results"]["disintegration"]["diagonal"] == json::array({4, 0, 0}));
  auto table = cli::render_table(r.report);
  CHECK(table.find("[4,0,0]") != std::string::npos);
}

TEST_CASE("decompose reports components and transitions") {
  auto r = run("decompose", fixture("normal-band6"));
  CHECK(r.exit_code == 0);
  const auto& d = r.report["results"]["decompose"];
  CHECK(d["decomposes"] == true);
  CHECK(d["components"].size() == 2);
  CHECK(d["transitions"].size() == 1);
}

TEST_CASE("a fibre without a diagonal is reported, not failed") {
  // Dual numbers are not separable.
  auto r = run("verify", R"({"kind":"semilattice-diagram","semilattice":{"chain":1},
    "algebras":{"c0":{"dim":2,"basis":["1","x"],"structure_constants":[[0,0,0,"1"],[0,1,1,"1"],[1,0,1,"1"]]}}})",
               {"diagonal"});
  CHECK(r.exit_code == 0);
  CHECK(r.report["results"]["fibre_diagonals"][0]["contractible"] == false);
}

TEST_CASE("library errors inside a suite are FAIL checks") {
  cli::RunConfig cfg;
  cfg.suites = {"engine"};
  cfg.resource_limit = 10;
  auto r = cli::run("verify", cli::parse_instance(fixture("free2-Q")), cfg);
  CHECK(r.exit_code == 1);
  CHECK(resource_limit() == kDefaultResourceLimit);
}

TEST_CASE("sigma degrees over budget are skipped, not passed") {
  cli::RunConfig cfg;
  cfg.suites = {"sigma"};
  cfg.sigma_budget = 1;
  auto r = cli::run("verify", cli::parse_instance(fixture("free2-Q")), cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.report["summary"]["skipped"] == 2);
  cfg.direct_solve = true;
  r = cli::run("verify", cli::parse_instance(fixture("free2-Q")), cfg);
  CHECK(r.report["summary"]["skipped"] == 0);
  CHECK(r.report["results"]["sigma"]["mode"] == "direct");
}

TEST_CASE("unknown commands and suites") {
  auto inst = cli::parse_instance(fixture("free1-Q"));
  CHECK_THROWS_AS(cli::run("frobnicate", inst, {}), cli::SchemaError);
  CHECK_THROWS_AS(cli::run("verify", inst, cli::RunConfig{.suites = {"nope"}}), cli::SchemaError);
  CHECK_THROWS_AS(cli::run("verify", inst, cli::RunConfig{}), cli::SchemaError);
}

TEST_CASE("reports are deterministic and the cache is transparent") {
  auto dir = std::filesystem::temp_directory_path() / "semihoch-test-cache";
  std::filesystem::remove_all(dir);
  auto inst = cli::parse_instance(fixture("diamond-Q"));
  cli::RunConfig cfg;
  cfg.suites = {"engine", "sigma", "transfer"};
  auto a = cli::run("verify", inst, cfg);
  auto b = cli::run("verify", inst, cfg);
  CHECK(cli::stable_text(a.report) == cli::stable_text(b.report));
  cfg.cache_dir = dir.string();
  auto cold = cli::run("verify", inst, cfg);
  auto warm = cli::run("verify", inst, cfg);
  CHECK(cold.report["timing"]["cache"] == "miss");
  CHECK(warm.report["timing"]["cache"] == "hit");
  CHECK(cli::stable_text(cold.report) == cli::stable_text(a.report));
  CHECK(cli::stable_text(warm.report) == cli::stable_text(a.report));
  // different degree, different entry
  cfg.max_degree = 1;
  CHECK(cli::run("verify", inst, cfg).report["timing"]["cache"] == "miss");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("fnv1a reference values") {
  CHECK(cli::fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(cli::fnv1a("a") == 0xaf63dc4c8601ec8cull);
}
