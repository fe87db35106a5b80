#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semihoch/algebra.hpp"
#include "semihoch/cli.hpp"
#include "semihoch/homology.hpp"

namespace py = pybind11;
using namespace semihoch;

namespace {

py::object to_python(const cli::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

FiniteSemigroup semigroup_of(const std::vector<std::vector<Element>>& table) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < table.size(); ++i) labels.push_back(std::to_string(i));
  return FiniteSemigroup::validate(labels, table);
}

std::vector<std::string> rationals(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

}  // namespace

PYBIND11_MODULE(_semihoch, m) {
  m.doc() = "Exact Hochschild homology of semilattice-graded algebras";

  auto& base = py::register_exception<Error>(m, "SemihochError", PyExc_ValueError);
  py::register_exception<ResourceBound>(m, "ResourceBound", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<cli::SchemaError>(m, "SchemaError", base.ptr());

  m.def("commands", &cli::command_names);
  m.def("suites", &cli::suite_names);

  m.def(
      "run",
      [](const std::string& command, const std::string& instance, unsigned max_degree,
         std::vector<std::string> suites, bool direct_solve, std::size_t resource_limit,
         std::string cache_dir, std::size_t sigma_budget) {
        cli::RunConfig cfg;
        cfg.max_degree = max_degree;
        cfg.suites = suites.empty() ? std::vector<std::string>{"all"} : std::move(suites);
        cfg.direct_solve = direct_solve;
        cfg.resource_limit = resource_limit;
        cfg.cache_dir = std::move(cache_dir);
        cfg.sigma_budget = sigma_budget;
        auto inst = cli::parse_instance(instance);
        cli::RunResult r;
        {
          py::gil_scoped_release release;
          r = cli::run(command, inst, cfg);
        }
        return py::make_tuple(to_python(r.report), r.exit_code);
      },
      py::arg("command"), py::arg("instance"), py::arg("max_degree") = 2,
      py::arg("suites") = std::vector<std::string>{}, py::arg("direct_solve") = false,
      py::arg("resource_limit") = kDefaultResourceLimit, py::arg("cache_dir") = "",
      py::arg("sigma_budget") = cli::RunConfig{}.sigma_budget,
      "Run a command on an instance given as JSON text; returns (report, exit code).");

  m.def(
      "betti",
      [](const std::string& instance, unsigned max_degree) {
        auto c = build_convolution(cli::parse_instance(instance).diagram);
        return betti(c.algebra, regular_bimodule(c.algebra), max_degree).betti();
      },
      py::arg("instance"), py::arg("max_degree") = 2);

  m.def(
      "semigroup_betti",
      [](const std::vector<std::vector<Element>>& table, unsigned max_degree) {
        auto a = semigroup_algebra(semigroup_of(table));
        return betti(a, regular_bimodule(a), max_degree).betti();
      },
      py::arg("table"), py::arg("max_degree") = 2);

  m.def(
      "band_class", [](const std::vector<std::vector<Element>>& table) {
        return std::string(to_string(band_class(semigroup_of(table))));
      },
      py::arg("table"));

  m.def(
      "free_semilattice",
      [](unsigned k) {
        auto l = free_semilattice(k);
        return py::make_tuple(l.semigroup().labels(), l.semigroup().table());
      },
      py::arg("k"), "(labels, table) of the free semilattice on k generators.");

  m.def(
      "disintegration",
      [](const std::string& instance, unsigned max_degree) {
        auto c = build_convolution(cli::parse_instance(instance).diagram);
        auto v = disintegration_check(c, max_degree);
        return py::make_tuple(v.full, v.diagonal, v.pass);
      },
      py::arg("instance"), py::arg("max_degree") = 2);

  m.def(
      "free_diagonal",
      [](unsigned k) {
        auto delta = find_diagonal(semigroup_algebra(free_semilattice(k).semigroup()));
        if (!delta) throw HypothesisFailure("no diagonal");
        return rationals(delta->to_dense());
      },
      py::arg("k"), "Coefficients of the diagonal of Q[free_semilattice(k)], row-major.");
}
