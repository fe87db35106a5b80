#include "semihoch/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "semihoch/linalg.hpp"

namespace semihoch::cli {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Parsing

namespace {

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path, "missing field \"" + key + "\"");
  return *it;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

Index as_index(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw SchemaError(path, "expected a non-negative integer");
  }
  return j.get<Index>();
}

Rational as_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ValidationError&) {
      throw SchemaError(path, "not a rational: " + j.get<std::string>());
    }
  }
  throw SchemaError(path, "expected a rational as \"num/den\" or an integer");
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

FiniteSemigroup parse_table(const json& j, const std::string& path) {
  std::vector<std::string> labels;
  const json* table = &j;
  if (j.is_object()) {
    const json& elems = as_array(field(j, "elements", path), path + ".elements");
    for (std::size_t i = 0; i < elems.size(); ++i) {
      labels.push_back(as_string(elems[i], path + ".elements[" + std::to_string(i) + "]"));
    }
    table = &field(j, "table", path);
  }
  const std::string tpath = j.is_object() ? path + ".table" : path;
  as_array(*table, tpath);
  if (labels.empty()) {
    for (std::size_t i = 0; i < table->size(); ++i) labels.push_back(std::to_string(i));
  }
  std::vector<std::vector<Element>> rows;
  for (std::size_t i = 0; i < table->size(); ++i) {
    const std::string rpath = tpath + "[" + std::to_string(i) + "]";
    const json& row = as_array((*table)[i], rpath);
    std::vector<Element> r;
    for (std::size_t k = 0; k < row.size(); ++k) {
      r.push_back(static_cast<Element>(as_index(row[k], rpath + "[" + std::to_string(k) + "]")));
    }
    rows.push_back(std::move(r));
  }
  try {
    return FiniteSemigroup::validate(labels, rows);
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

FiniteSemilattice parse_semilattice(const json& j, const std::string& path) {
  if (j.is_object() && j.contains("free")) {
    Index k = as_index(j["free"], path + ".free");
    try {
      return free_semilattice(static_cast<unsigned>(k));
    } catch (const Error& e) {
      throw ValidationError(path + ": " + e.what());
    }
  }
  if (j.is_object() && j.contains("chain")) {
    Index k = as_index(j["chain"], path + ".chain");
    if (k == 0) throw ValidationError(path + ": a chain needs at least one element");
    return chain_semilattice(static_cast<unsigned>(k));
  }
  auto check = as_semilattice(parse_table(j, path));
  if (!check.value) {
    auto [x, y] = *check.violation;
    throw ValidationError(path + ": not a semilattice at (" + std::to_string(x) + ", " +
                          std::to_string(y) + ")");
  }
  return *check.value;
}

Element shape_element(const FiniteSemilattice& l, const std::string& label, const std::string& path) {
  auto e = l.semigroup().find(label);
  if (!e) throw SchemaError(path, "unknown semilattice element \"" + label + "\"");
  return *e;
}

// "f<e" -> (f, e), checking f <= e.
std::pair<Element, Element> parse_pair(const FiniteSemilattice& l, const std::string& key,
                                       const std::string& path) {
  auto pos = key.find('<');
  if (pos == std::string::npos || key.find('<', pos + 1) != std::string::npos || pos == 0 ||
      pos + 1 == key.size()) {
    throw SchemaError(path, "transition key must look like \"f<e\", got \"" + key + "\"");
  }
  Element f = shape_element(l, key.substr(0, pos), path);
  Element e = shape_element(l, key.substr(pos + 1), path);
  if (!l.leq(f, e)) {
    throw ValidationError(path + ": " + key.substr(0, pos) + " is not below " + key.substr(pos + 1));
  }
  return {f, e};
}

AlgebraPresentation parse_algebra(const json& j, const std::string& path) {
  Index dim = as_index(field(j, "dim", path), path + ".dim");
  std::vector<std::string> basis;
  if (j.contains("basis")) {
    const json& b = as_array(j["basis"], path + ".basis");
    for (std::size_t i = 0; i < b.size(); ++i) {
      basis.push_back(as_string(b[i], path + ".basis[" + std::to_string(i) + "]"));
    }
    if (basis.size() != dim) throw SchemaError(path + ".basis", "length differs from dim");
  } else {
    for (Index i = 0; i < dim; ++i) basis.push_back("b" + std::to_string(i));
  }
  std::vector<std::vector<Entry>> entries(dim * dim);
  const json& sc = as_array(field(j, "structure_constants", path), path + ".structure_constants");
  for (std::size_t t = 0; t < sc.size(); ++t) {
    const std::string tpath = path + ".structure_constants[" + std::to_string(t) + "]";
    const json& row = as_array(sc[t], tpath);
    if (row.size() != 4) throw SchemaError(tpath, "expected [i, j, k, value]");
    Index i = as_index(row[0], tpath + "[0]");
    Index jj = as_index(row[1], tpath + "[1]");
    Index k = as_index(row[2], tpath + "[2]");
    if (i >= dim || jj >= dim || k >= dim) throw SchemaError(tpath, "basis index out of range");
    entries[i * dim + jj].push_back({k, as_rational(row[3], tpath + "[3]")});
  }
  std::vector<SparseVector> products;
  for (auto& e : entries) products.push_back(SparseVector::from_entries(dim, std::move(e)));
  std::optional<SparseVector> unit;
  if (j.contains("unit") && !j["unit"].is_null()) {
    const json& u = as_array(j["unit"], path + ".unit");
    if (u.size() != dim) throw SchemaError(path + ".unit", "length differs from dim");
    std::vector<Rational> vals;
    for (std::size_t i = 0; i < u.size(); ++i) {
      vals.push_back(as_rational(u[i], path + ".unit[" + std::to_string(i) + "]"));
    }
    unit = SparseVector::from_dense(vals);
  }
  try {
    return AlgebraPresentation::make(basis, std::move(products), unit);
  } catch (const Error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

SparseMatrix parse_matrix(const json& j, Index rows, Index cols, const std::string& path) {
  as_array(j, path);
  if (j.size() != rows) {
    throw SchemaError(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  }
  std::vector<std::vector<Rational>> dense;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rpath = path + "[" + std::to_string(r) + "]";
    const json& row = as_array(j[r], rpath);
    if (row.size() != cols) {
      throw SchemaError(rpath, "expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
    }
    std::vector<Rational> vals;
    for (std::size_t c = 0; c < cols; ++c) vals.push_back(as_rational(row[c], rpath + "[" + std::to_string(c) + "]"));
    dense.push_back(std::move(vals));
  }
  if (rows == 0) return SparseMatrix(0, cols);
  return SparseMatrix::from_dense(dense);
}

// Diagram of semigroup algebras over a decomposition. Group components go
// through clifford_algebra_diagram.
SemilatticeDiagram diagram_of(const DecompositionData& d) {
  bool groups = std::all_of(d.components.begin(), d.components.end(),
                            [](const FiniteSemigroup& g) { return g.is_group(); });
  if (groups) return clifford_algebra_diagram(d);
  std::vector<AlgebraPresentation> algs;
  for (const auto& c : d.components) algs.push_back(semigroup_algebra(c));
  std::map<std::pair<Element, Element>, SparseMatrix> given;
  const Element n = static_cast<Element>(d.shape.size());
  for (Element f = 0; f < n; ++f)
    for (Element e = 0; e < n; ++e) {
      if (f == e || !d.shape.leq(f, e)) continue;
      given[{f, e}] = induced_hom(d.components[e], d.components[f], d.transition(f, e)).matrix;
    }
  return make_diagram(d.shape, std::move(algs), given);
}

SemilatticeDiagram diagram_of(const FiniteSemigroup& s, std::optional<DecompositionData>& dec) {
  dec = decompose_strong_semilattice(s);
  if (dec) return diagram_of(*dec);
  return constant_diagram(chain_semilattice(1), semigroup_algebra(s));
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  Instance inst;
  inst.canonical = doc;
  inst.kind = as_string(field(doc, "kind", "$"), "$.kind");
  if (doc.contains("name")) inst.name = as_string(doc["name"], "$.name");
  if (doc.contains("source")) inst.source = as_string(doc["source"], "$.source");
  const json& payload = doc.contains("payload") ? doc["payload"] : doc;
  const std::string p = doc.contains("payload") ? "$.payload" : "$";

  if (inst.kind == "semigroup" || inst.kind == "band") {
    inst.semigroup = parse_table(payload, p);
    if (inst.kind == "band" && band_class(*inst.semigroup) == BandClass::NotBand) {
      throw ValidationError(p + ": not a band (some element is not idempotent)");
    }
    inst.diagram = diagram_of(*inst.semigroup, inst.decomposition);
  } else if (inst.kind == "semilattice-diagram") {
    FiniteSemilattice l = parse_semilattice(field(payload, "semilattice", p), p + ".semilattice");
    const json& algs = field(payload, "algebras", p);
    if (!algs.is_object()) throw SchemaError(p + ".algebras", "expected an object keyed by element");
    std::vector<std::optional<AlgebraPresentation>> slots(l.size());
    for (const auto& [key, value] : algs.items()) {
      Element e = shape_element(l, key, p + ".algebras");
      slots[e] = parse_algebra(value, p + ".algebras." + key);
    }
    std::vector<AlgebraPresentation> fibres;
    for (Element e = 0; e < l.size(); ++e) {
      if (!slots[e]) throw SchemaError(p + ".algebras", "no algebra for element \"" + l.label(e) + "\"");
      fibres.push_back(*slots[e]);
    }
    std::map<std::pair<Element, Element>, SparseMatrix> given;
    if (payload.contains("transitions")) {
      const json& tr = payload["transitions"];
      if (!tr.is_object()) throw SchemaError(p + ".transitions", "expected an object");
      for (const auto& [key, value] : tr.items()) {
        const std::string kp = p + ".transitions." + key;
        auto [f, e] = parse_pair(l, key, kp);
        given[{f, e}] = parse_matrix(value, fibres[f].dim(), fibres[e].dim(), kp);
      }
    }
    try {
      inst.diagram = make_diagram(l, std::move(fibres), given);
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError(p + ": " + e.what());
    }
  } else if (inst.kind == "clifford") {
    FiniteSemilattice l = parse_semilattice(field(payload, "semilattice", p), p + ".semilattice");
    const json& groups = field(payload, "groups", p);
    if (!groups.is_object()) throw SchemaError(p + ".groups", "expected an object keyed by element");
    DecompositionData d;
    d.shape = l;
    std::vector<std::optional<FiniteSemigroup>> slots(l.size());
    for (const auto& [key, value] : groups.items()) {
      Element e = shape_element(l, key, p + ".groups");
      slots[e] = parse_table(value, p + ".groups." + key);
      if (!slots[e]->is_group()) throw ValidationError(p + ".groups." + key + ": not a group");
    }
    for (Element e = 0; e < l.size(); ++e) {
      if (!slots[e]) throw SchemaError(p + ".groups", "no group for element \"" + l.label(e) + "\"");
      d.components.push_back(*slots[e]);
    }
    const Element n = static_cast<Element>(l.size());
    d.transitions.assign(n * n, {});
    std::vector<char> known(n * n, 0);
    for (Element e = 0; e < n; ++e) {
      for (Element x = 0; x < d.components[e].size(); ++x) d.transitions[e * n + e].push_back(x);
      known[e * n + e] = 1;
    }
    if (payload.contains("homs")) {
      const json& homs = payload["homs"];
      if (!homs.is_object()) throw SchemaError(p + ".homs", "expected an object");
      for (const auto& [key, value] : homs.items()) {
        const std::string kp = p + ".homs." + key;
        auto [f, e] = parse_pair(l, key, kp);
        as_array(value, kp);
        if (value.size() != d.components[e].size()) {
          throw SchemaError(kp, "expected one image per element of the larger group");
        }
        std::vector<Element> m;
        for (std::size_t i = 0; i < value.size(); ++i) {
          Index y = as_index(value[i], kp + "[" + std::to_string(i) + "]");
          if (y >= d.components[f].size()) throw SchemaError(kp, "image out of range");
          m.push_back(static_cast<Element>(y));
        }
        d.transitions[f * n + e] = m;
        known[f * n + e] = 1;
      }
    }
    // Fill the remaining comparable pairs by composing through an
    // intermediate element.
    for (bool changed = true; changed;) {
      changed = false;
      for (Element f = 0; f < n; ++f)
        for (Element e = 0; e < n; ++e) {
          if (known[f * n + e] || !l.leq(f, e)) continue;
          for (Element g = 0; g < n; ++g) {
            if (g == f || g == e || !known[f * n + g] || !known[g * n + e]) continue;
            const auto& inner = d.transitions[g * n + e];
            const auto& outer = d.transitions[f * n + g];
            std::vector<Element> m;
            for (Element x : inner) m.push_back(outer[x]);
            d.transitions[f * n + e] = m;
            known[f * n + e] = 1;
            changed = true;
            break;
          }
        }
    }
    for (Element f = 0; f < n; ++f)
      for (Element e = 0; e < n; ++e)
        if (l.leq(f, e) && !known[f * n + e]) {
          throw ValidationError(p + ".homs: no homomorphism for " + l.label(f) + "<" + l.label(e));
        }
    try {
      validate_decomposition(d);
      inst.semigroup = assemble_strong_semilattice(d);
      inst.diagram = clifford_algebra_diagram(d);
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError(p + ": " + e.what());
    }
    inst.decomposition = d;
  } else {
    throw SchemaError("$.kind", "unknown kind \"" + inst.kind +
                                    "\" (expected semigroup, band, semilattice-diagram or clifford)");
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

json q(const Rational& r) { return to_string(r); }

json vec_json(const std::vector<Index>& v) {
  json out = json::array();
  for (Index x : v) out.push_back(x);
  return out;
}

json betti_json(const HomologyReport& r) {
  json degrees = json::array();
  for (std::size_t n = 0; n < r.degrees.size(); ++n) {
    const auto& d = r.degrees[n];
    degrees.push_back({{"degree", n}, {"dim", d.dim}, {"rank_prev", d.rank_prev},
                       {"rank_next", d.rank_next}, {"betti", d.betti}});
  }
  return {{"betti", vec_json(r.betti())}, {"degrees", degrees}};
}

struct Context {
  const Instance& inst;
  const RunConfig& cfg;
  json checks = json::array();
  json results = json::object();
  ConvolutionAlgebra conv;
  Bimodule reg;
  std::map<unsigned, SparseMatrix> boundary_cache;
  std::map<unsigned, SparseMatrix> mu_cache;

  Context(const Instance& i, const RunConfig& c) : inst(i), cfg(c) {
    conv = build_convolution(inst.diagram);
    reg = regular_bimodule(conv.algebra);
  }

  const SparseMatrix& d(unsigned n) {
    auto it = boundary_cache.find(n);
    if (it == boundary_cache.end()) it = boundary_cache.emplace(n, boundary(conv.algebra, reg, n)).first;
    return it->second;
  }
  const SparseMatrix& mu(unsigned n) {
    auto it = mu_cache.find(n);
    if (it == mu_cache.end()) it = mu_cache.emplace(n, mu_projection(conv, n)).first;
    return it->second;
  }
  SparseMatrix pi(unsigned n) { return SparseMatrix::identity(mu(n).rows()) - mu(n); }

  void check(const std::string& suite, const std::string& name, bool pass, json detail = nullptr) {
    json c = {{"suite", suite}, {"name", name}, {"verdict", pass ? "PASS" : "FAIL"}};
    if (!detail.is_null()) c["detail"] = std::move(detail);
    checks.push_back(std::move(c));
  }
  void skip(const std::string& suite, const std::string& name, const std::string& why) {
    checks.push_back({{"suite", suite}, {"name", name}, {"verdict", "SKIP"}, {"detail", why}});
  }
  bool semigroup_based() const { return inst.kind != "semilattice-diagram"; }
};

// Semilattice homomorphisms used to exercise transfer: the identity, then
// maps out of the 2-chain and evaluations out of free(2), deduplicated.
std::vector<SemilatticeHom> probe_homs(const FiniteSemilattice& l, std::size_t limit) {
  std::vector<SemilatticeHom> out{identity_hom(l)};
  std::set<std::pair<Index, std::vector<Element>>> seen{{l.size(), out[0].map}};
  auto add = [&](SemilatticeHom h) {
    if (out.size() >= limit) return;
    if (seen.insert({h.source.size(), h.map}).second) out.push_back(std::move(h));
  };
  const Element n = static_cast<Element>(l.size());
  Element bottom = l.bottom();
  auto two = chain_semilattice(2);
  add(make_semilattice_hom(two, l, {bottom, bottom}));
  for (Element e = 0; e < n; ++e)
    for (Element f = 0; f < n; ++f)
      if (f != e && l.leq(f, e)) add(make_semilattice_hom(two, l, {e, f}));
  for (Element x = 0; x < n; ++x)
    for (Element y = x + 1; y < n; ++y) add(evaluation_hom(l, {x, y}));
  return out;
}

using Suite = std::function<void(Context&)>;

void suite_engine(Context& c) {
  const std::string s = "engine";
  const unsigned max = c.cfg.max_degree;
  for (unsigned n = 1; n <= max; ++n) {
    c.check(s, "d_" + std::to_string(n - 1) + " d_" + std::to_string(n) + " = 0", (c.d(n - 1) * c.d(n)).is_zero());
  }
  auto report = betti(c.conv.algebra, c.reg, max);
  bool consistent = true;
  for (const auto& deg : report.degrees) {
    consistent = consistent && deg.rank_prev + deg.rank_next + deg.betti == deg.dim;
  }
  c.check(s, "betti = dim - rank - rank >= 0", consistent, vec_json(report.betti()));
  // rank-nullity on the low boundaries
  for (unsigned n = 0; n <= std::min(max, 1u); ++n) {
    const auto& dn = c.d(n);
    auto ker = kernel_basis(dn);
    bool ok = ker.dim() + rank(dn) == dn.cols();
    for (const auto& v : ker.vectors()) ok = ok && dn.apply(v).is_zero();
    c.check(s, "rank-nullity d_" + std::to_string(n), ok,
            json{{"kernel", ker.dim()}, {"cols", dn.cols()}});
  }
  // A consistent system is solved; its solution reproduces the right side.
  if (c.d(0).cols() > 0) {
    SparseVector b = c.d(0).column(c.d(0).cols() - 1);
    auto x = solve_particular(c.d(0), b);
    c.check(s, "solve d_0 x = d_0 e_last", x && c.d(0).apply(*x) == b);
  }
  json norms = json::array();
  bool contractive = true;
  for (unsigned n = 0; n <= std::min(max, 1u); ++n)
    for (unsigned i = 0; i <= n + 1; ++i) {
      Rational nm = l1_operator_norm(face_map(c.conv.algebra, c.reg, n, i));
      norms.push_back(q(nm));
      contractive = contractive && nm <= 1;
    }
  if (c.semigroup_based()) {
    c.check(s, "face maps contractive", contractive, norms);
  } else {
    c.results["face_map_norms"] = norms;
  }
}

void suite_mu(Context& c) {
  const std::string s = "mu-chain-map";
  const unsigned max = c.cfg.max_degree;
  for (unsigned n = 0; n <= max; ++n) {
    const std::string tag = std::to_string(n);
    c.check(s, "mu_" + tag + " d_" + tag + " = d_" + tag + " mu_" + std::to_string(n + 1),
            c.mu(n) * c.d(n) == c.d(n) * c.mu(n + 1));
    c.check(s, "mu_" + tag + "^2 = mu_" + tag, c.mu(n) * c.mu(n) == c.mu(n));
    Index diag = 0;
    for (Element e = 0; e < c.conv.diagram.shape.size(); ++e) {
      Index k = 1;
      for (unsigned j = 0; j <= n; ++j) k *= c.conv.block_dim(e);
      diag += k;
    }
    c.check(s, "rank mu_" + tag + " = diagonal dimension", rank(c.mu(n)) == diag,
            json{{"diagonal_dim", diag}});
  }
  bool faces = true;
  for (unsigned n = 0; n <= std::min(max, 1u); ++n)
    for (unsigned i = 0; i <= n + 1; ++i) {
      auto f = face_map(c.conv.algebra, c.reg, n, i);
      faces = faces && c.mu(n) * f == f * c.mu(n + 1);
    }
  c.check(s, "mu commutes with every face map", faces);
  bool base = (c.d(0) * c.pi(1)).is_zero();
  c.check(s, "d_0 pi_1 = 0", base);
}

void suite_disintegration(Context& c) {
  const std::string s = "disintegration";
  auto v = disintegration_check(c.conv, c.cfg.max_degree);
  c.results["disintegration"] = {{"full", vec_json(v.full)}, {"diagonal", vec_json(v.diagonal)}};
  c.check(s, "betti(full) = betti(diagonal)", v.pass,
          json{{"full", vec_json(v.full)}, {"diagonal", vec_json(v.diagonal)}});
}

// Columns of the largest boundary the free-case solves factor in degree n:
// D^(n+2) with D the dimension of the biggest free context.
double sigma_cost(const ConvolutionAlgebra& conv, unsigned n) {
  const auto& l = conv.diagram.shape;
  const Element size = static_cast<Element>(l.size());
  std::vector<Element> tuple(n + 1, 0);
  Index widest = 0;
  for (;;) {
    Index dim = 0;
    for (unsigned mask = 1; mask < (1u << (n + 1)); ++mask) {
      std::optional<Element> m;
      for (unsigned j = 0; j <= n; ++j)
        if (mask >> j & 1) m = m ? l.meet(*m, tuple[j]) : tuple[j];
      dim += conv.block_dim(*m);
    }
    widest = std::max(widest, dim);
    unsigned j = 0;
    while (j <= n && ++tuple[j] == size) tuple[j++] = 0;
    if (j > n) break;
  }
  return std::pow(static_cast<double>(widest), n + 2);
}

void suite_sigma(Context& c) {
  const std::string s = "sigma";
  unsigned max = std::min(c.cfg.max_degree, 2u);
  if (!c.cfg.direct_solve) {
    unsigned reach = 0;
    while (reach < max && sigma_cost(c.conv, reach + 1) <= static_cast<double>(c.cfg.sigma_budget)) ++reach;
    for (unsigned n = reach + 1; n <= max; ++n) {
      c.skip(s, "sigma_" + std::to_string(n), "free-case boundary has " +
                                                  std::to_string(static_cast<long long>(sigma_cost(c.conv, n))) +
                                                  " columns, over the sigma budget");
    }
    max = reach;
  }
  std::vector<SparseMatrix> sigma;
  if (c.cfg.direct_solve) {
    sigma = sigma_direct(c.conv, max).maps;
  } else {
    sigma = sigma_family(c.conv, max).maps;
  }
  c.check(s, "sigma_0 = 0", sigma[0].is_zero());
  json norms = json::array();
  for (unsigned n = 1; n <= max; ++n) {
    const std::string tag = std::to_string(n);
    SparseMatrix pin = c.pi(n), pinext = c.pi(n + 1);
    c.check(s, "d_" + tag + " sigma_" + tag + " + sigma_" + std::to_string(n - 1) + " d_" +
                   std::to_string(n - 1) + " = pi_" + tag,
            c.d(n) * sigma[n] + sigma[n - 1] * c.d(n - 1) == pin);
    c.check(s, "(R) pi sigma_" + tag + " = sigma_" + tag, pinext * sigma[n] == sigma[n]);
    c.check(s, "(S) d sigma_" + tag + " d = d pi", c.d(n) * sigma[n] * c.d(n) == c.d(n) * pinext);
  }
  for (unsigned n = 0; n <= max; ++n) norms.push_back(q(l1_operator_norm(sigma[n])));
  c.results["sigma"] = {{"mode", c.cfg.direct_solve ? "direct" : "free-case"},
                        {"max_degree", max}, {"norms", norms}};
  if (c.cfg.direct_solve || max < 1) return;
  // (T) on a few pulled-back diagrams, degree 1.
  auto homs = probe_homs(c.conv.diagram.shape, 4);
  SigmaEngine big(c.conv);
  SparseMatrix s1 = big.sigma(1);
  for (std::size_t k = 1; k < homs.size(); ++k) {
    const auto& alpha = homs[k];
    auto h = build_convolution(pullback(alpha, c.conv.diagram));
    SigmaEngine small(h);
    bool ok = transfer_chain(alpha, h, c.conv, 2) * small.sigma(1) == s1 * transfer_chain(alpha, h, c.conv, 1);
    json map = json::array();
    for (Element x : alpha.map) map.push_back(c.conv.diagram.shape.label(x));
    c.check(s, "(T) Tran sigma_1 = sigma_1 Tran", ok, json{{"alpha", map}});
  }
}

void suite_rect_band(Context& c) {
  const std::string s = "rect-band";
  if (!c.inst.semigroup) {
    c.skip(s, "rectangular band homotopy", "instance is not given by a semigroup");
    return;
  }
  const FiniteSemigroup& sg = *c.inst.semigroup;
  BandClass cls = band_class(sg);
  if (cls == BandClass::NotBand || cls == BandClass::Band) {
    c.skip(s, "rectangular band homotopy", std::string("band class is ") + to_string(cls));
    return;
  }
  std::vector<std::pair<std::string, FiniteSemigroup>> rects;
  if (cls == BandClass::RectangularBand || sg.size() == 1) {
    rects.emplace_back("whole", sg);
  } else if (c.inst.decomposition) {
    for (Element e = 0; e < c.inst.decomposition->components.size(); ++e) {
      rects.emplace_back(c.inst.decomposition->shape.label(e), c.inst.decomposition->components[e]);
    }
  }
  const unsigned top = std::min(c.cfg.max_degree + 1, 3u);
  for (const auto& [where, r] : rects) {
    auto a = semigroup_algebra(r);
    auto m = regular_bimodule(a);
    std::vector<SparseMatrix> d, h;
    for (unsigned n = 0; n <= top; ++n) {
      d.push_back(boundary(a, m, n));
      h.push_back(rect_band_homotopy(r, 0, n));
    }
    bool ok = true;
    json norms = json::array();
    for (unsigned n = 1; n <= top; ++n) {
      ok = ok && d[n] * h[n] + h[n - 1] * d[n - 1] == SparseMatrix::identity(d[n].rows());
      norms.push_back(q(l1_operator_norm(h[n])));
    }
    c.check(s, "d s + s d = id in degrees 1.." + std::to_string(top) + " (" + where + ")", ok,
            json{{"norms", norms}});
    // Degree 0 gives id minus the constant map onto z instead of id.
    std::vector<SparseVector> cols(r.size(), SparseVector::unit(r.size(), 0));
    auto constant = SparseMatrix::from_columns(r.size(), cols);
    bool deg0 = d[0] * h[0] == SparseMatrix::identity(r.size()) - constant;
    c.check(s, "degree 0: d_0 s_0 = id - const_z (" + where + ")", deg0);
  }
  if (cls != BandClass::RectangularBand) {
    auto a = semigroup_algebra(sg);
    auto b = betti(a, regular_bimodule(a), c.cfg.max_degree).betti();
    bool zero = std::all_of(b.begin() + 1, b.end(), [](Index x) { return x == 0; });
    c.check(s, "normal band: betti_n = 0 for n >= 1", zero, vec_json(b));
  }
}

void suite_unit(Context& c) {
  const std::string s = "unit";
  auto u = unit_check(c.conv);
  json lambda = json::array();
  for (const auto& x : u.lambda) lambda.push_back(q(x));
  if (!u.shape_unital) {
    c.skip(s, "shape algebra unit", "the shape algebra has no unit");
    return;
  }
  c.check(s, "coefficient identity", u.coefficient_identity, lambda);
  c.check(s, "u x = x = x u on every block element", u.passed, u.detail.empty() ? json(nullptr) : json(u.detail));
  // e . x is central for every e (basis level).
  bool central = true;
  const Index dim = c.conv.dim();
  for (Element e = 0; e < c.conv.diagram.shape.size() && central; ++e)
    for (Index x = 0; x < dim && central; ++x)
      for (Index y = 0; y < dim && central; ++y) {
        SparseVector bx = SparseVector::unit(dim, x), by = SparseVector::unit(dim, y);
        SparseVector xy = c.conv.algebra.multiply(bx, by);
        central = c.conv.algebra.multiply(l1L_action(c.conv, e, bx), by) == l1L_action(c.conv, e, xy) &&
                  c.conv.algebra.multiply(bx, l1L_action(c.conv, e, by)) == l1L_action(c.conv, e, xy);
      }
  c.check(s, "(e.x)y = e.(xy) = x(e.y)", central);
}

void suite_relative(Context& c) {
  const std::string s = "relative";
  auto shape_alg = semigroup_algebra(c.conv.diagram.shape.semigroup());
  auto delta = find_diagonal(shape_alg);
  auto k = shape_action(c.conv);
  auto rel = relative_betti(c.conv.algebra, c.reg, k, c.cfg.max_degree);
  auto full = betti(c.conv.algebra, c.reg, c.cfg.max_degree);
  c.results["relative"] = {{"relative", vec_json(rel.betti())}, {"betti", vec_json(full.betti())},
                           {"shape_contractible", delta.has_value()}};
  if (!delta) {
    c.skip(s, "relative betti = betti", "no diagonal for the shape algebra");
    return;
  }
  c.check(s, "relative betti = betti", rel.betti() == full.betti(),
          json{{"relative", vec_json(rel.betti())}, {"betti", vec_json(full.betti())}});
}

void suite_normalised(Context& c) {
  const std::string s = "normalised";
  auto k = shape_action(c.conv);
  std::vector<SubspaceBasis> nn;
  for (unsigned n = 0; n <= c.cfg.max_degree; ++n) nn.push_back(normalized_subspace(c.conv.algebra, c.reg, k, n));
  json dims = json::array();
  for (const auto& b : nn) dims.push_back(b.dim());
  c.results["normalised_dims"] = dims;
  for (unsigned n = 0; n <= c.cfg.max_degree; ++n) {
    SparseMatrix p = c.pi(n);
    bool in = true;
    for (Index j = 0; j < p.cols() && in; ++j) in = nn[n].contains(p.column(j));
    c.check(s, "(id - mu_" + std::to_string(n) + ")(basis) in N_" + std::to_string(n), in);
    if (n > 0) {
      bool sub = true;
      for (const auto& v : nn[n].vectors()) sub = sub && nn[n - 1].contains(c.d(n - 1).apply(v));
      c.check(s, "d(N_" + std::to_string(n) + ") in N_" + std::to_string(n - 1), sub);
    }
  }
}

void suite_transfer(Context& c) {
  const std::string s = "transfer";
  const auto& l = c.conv.diagram.shape;
  auto homs = probe_homs(l, 5);
  const unsigned max = c.cfg.max_degree;
  for (const auto& alpha : homs) {
    json map = json::array();
    for (Element x : alpha.map) map.push_back(l.label(x));
    const std::string tag = map.dump();
    auto pulled = pullback(alpha, c.conv.diagram);
    auto h = build_convolution(pulled);
    auto rh = regular_bimodule(h.algebra);
    auto th = transfer_hom(alpha, c.conv.diagram);
    auto v = validate_hom(th);
    c.check(s, "tau multiplicative, norm 1 " + tag, v.multiplicative && v.norm == 1, q(v.norm));
    c.check(s, "tau matches transfer_matrix " + tag, th.matrix == transfer_matrix(alpha, h, c.conv));
    bool chain = true, natural = true;
    std::vector<SparseMatrix> tr;
    for (unsigned n = 0; n <= max; ++n) tr.push_back(transfer_chain(alpha, h, c.conv, n));
    for (unsigned n = 0; n < max; ++n) {
      chain = chain && tr[n] * boundary(h.algebra, rh, n) == c.d(n) * tr[n + 1];
    }
    for (unsigned n = 0; n <= max; ++n) natural = natural && tr[n] * mu_projection(h, n) == c.mu(n) * tr[n];
    c.check(s, "Tran is a chain map " + tag, chain);
    c.check(s, "Tran mu = mu Tran " + tag, natural);
    // Functoriality with beta: 2-chain -> H picking a top-ish element and the bottom.
    const auto& hs = alpha.source;
    auto beta = make_semilattice_hom(chain_semilattice(2), hs, {0, hs.meet(0, hs.bottom())});
    auto hb = build_convolution(pullback(beta, pulled));
    auto ab = compose(alpha, beta);
    bool functorial = true;
    for (unsigned n = 0; n <= std::min(max, 2u); ++n) {
      functorial = functorial && transfer_chain(ab, hb, c.conv, n) ==
                                     transfer_chain(alpha, h, c.conv, n) * transfer_chain(beta, hb, h, n);
    }
    c.check(s, "Tran^(alpha beta) = Tran^alpha Tran^beta " + tag, functorial);
    // Re-basing of block inclusions at n = 1.
    bool rebase = true;
    ChainSpace src{h.dim(), h.dim(), 1}, tgt{c.conv.dim(), c.conv.dim(), 1};
    for (Element e0 = 0; e0 < hs.size(); ++e0)
      for (Element e1 = 0; e1 < hs.size(); ++e1) {
        if (h.block_dim(e0) == 0 || h.block_dim(e1) == 0) continue;
        Index from = src.encode({h.global(e0, 0), h.global(e1, 0)});
        Index to = tgt.encode({c.conv.global(alpha(e0), 0), c.conv.global(alpha(e1), 0)});
        rebase = rebase && tr.size() > 1 && tr[1].column(from) == SparseVector::unit(tgt.dim(), to);
      }
    if (max >= 1) c.check(s, "Tran re-bases block inclusions " + tag, rebase);
  }
  c.results["transfer_homs"] = homs.size();
}

void suite_diagonal(Context& c) {
  const std::string s = "diagonal";
  auto shape_alg = semigroup_algebra(c.conv.diagram.shape.semigroup());
  auto delta = find_diagonal(shape_alg);
  if (!delta) {
    c.check(s, "shape algebra has a diagonal", false);
  } else {
    auto v = check_diagonal(shape_alg, *delta);
    json coeffs = json::array();
    for (const auto& e : delta->entries()) coeffs.push_back({e.index, q(e.value)});
    c.check(s, "shape diagonal central", v.central, coeffs);
    c.check(s, "shape diagonal pi(Delta) is an identity", v.identity);
  }
  json fibres = json::array();
  for (Element e = 0; e < c.conv.diagram.algebras.size(); ++e) {
    auto fd = find_diagonal(c.conv.diagram.algebras[e]);
    fibres.push_back({{"element", c.conv.diagram.shape.label(e)}, {"contractible", fd.has_value()}});
    if (fd) {
      auto v = check_diagonal(c.conv.diagram.algebras[e], *fd);
      c.check(s, "fibre diagonal verifies (" + c.conv.diagram.shape.label(e) + ")", v.central && v.identity);
    }
  }
  c.results["fibre_diagonals"] = fibres;
}

void suite_homotopy(Context& c) {
  const std::string s = "homotopy";
  const unsigned max = std::min(c.cfg.max_degree, 2u);
  std::vector<SparseMatrix> d;
  GradedLinearMap pi, mu;
  for (unsigned n = 0; n <= max + 1; ++n) {
    d.push_back(c.d(n));
    pi.maps.push_back(c.pi(n));
    mu.maps.push_back(c.mu(n));
  }
  auto t = solve_homotopy_family(d, pi, max);
  c.check(s, "pi is null-homotopic (solved)", t.has_value());
  if (!t) return;
  try {
    auto sfam = combine_homotopy(mu, mu, *t, d, max);
    bool bound = true;
    json norms = json::array();
    for (unsigned n = 0; n <= max; ++n) {
      Rational ns = l1_operator_norm(sfam[n]);
      bound = bound && ns <= (1 + l1_operator_norm(mu[n + 1])) * l1_operator_norm((*t)[n]);
      norms.push_back(q(ns));
    }
    c.check(s, "combined homotopy for lambda = alpha = mu", true);
    c.check(s, "norm bound (1 + |lambda|)|t|", bound, norms);
  } catch (const HypothesisFailure& e) {
    c.check(s, "combined homotopy for lambda = alpha = mu", false, e.what());
  }
}

void suite_cohomology(Context& c) {
  const std::string s = "cohomology";
  const unsigned max = c.cfg.max_degree;
  const auto& a = c.conv.algebra;
  auto dual = cohomology_betti(a, dual_bimodule(c.reg), max);
  auto hom = betti(a, c.reg, max);
  c.check(s, "H^n(A, A') = H_n(A, A)", dual.betti() == hom.betti(), vec_json(dual.betti()));
  json out = {{"dual", betti_json(dual)}};
  if (a.is_commutative() && symmetric_bimodule_check(c.reg) && c.inst.decomposition &&
      std::all_of(c.inst.decomposition->components.begin(), c.inst.decomposition->components.end(),
                  [](const FiniteSemigroup& g) { return g.is_group(); })) {
    auto reg = cohomology_betti(a, c.reg, max);
    std::vector<Rational> chi(a.dim(), 1);
    auto x = character_bimodule(chi);
    bool module_ok = bimodule_axiom_failure(a, x).empty() && symmetric_bimodule_check(x);
    auto rank1 = cohomology_betti(a, x, max);
    auto vanish = [](const HomologyReport& r) {
      auto b = r.betti();
      return std::all_of(b.begin() + 1, b.end(), [](Index v) { return v == 0; });
    };
    c.check(s, "H^n(A, A) = 0 for n >= 1 (symmetric, commutative Clifford)", vanish(reg), vec_json(reg.betti()));
    c.check(s, "augmentation module is a symmetric bimodule", module_ok);
    c.check(s, "H^n(A, Q_aug) = 0 for n >= 1", vanish(rank1), vec_json(rank1.betti()));
    out["regular"] = betti_json(reg);
    out["augmentation"] = betti_json(rank1);
  }
  c.results["cohomology"] = out;
}

void suite_semigroups(Context& c) {
  const std::string s = "semigroups";
  const auto& l = c.conv.diagram.shape;
  auto back = as_semilattice(l.semigroup());
  c.check(s, "shape is a semilattice", back.value.has_value());
  bool order = true;
  for (Element x = 0; x < l.size(); ++x)
    for (Element y = 0; y < l.size(); ++y) {
      Element m = l.meet(x, y);
      order = order && l.leq(m, x) && l.leq(m, y);
      for (Element z = 0; z < l.size(); ++z) {
        if (l.leq(z, x) && l.leq(z, y)) order = order && l.leq(z, m);
      }
    }
  c.check(s, "meet is the greatest lower bound", order);
  c.check(s, "shape band class is Semilattice", band_class(l.semigroup()) == BandClass::Semilattice);
  // Evaluation maps out of a free semilattice land in the shape.
  auto f = free_semilattice(2);
  auto ev = evaluation_hom(l, {0, l.bottom()});
  c.check(s, "evaluation hom from free(2)", ev.source.size() == f.size());
  if (c.inst.semigroup) {
    std::string why;
    auto dec = decompose_strong_semilattice(*c.inst.semigroup, &why);
    c.results["band_class"] = to_string(band_class(*c.inst.semigroup));
    if (dec) {
      auto again = assemble_strong_semilattice(*dec);
      c.check(s, "decomposition reassembles", again.table() == c.inst.semigroup->table());
    } else {
      c.skip(s, "decomposition reassembles", why);
    }
  }
}

void suite_algebras(Context& c) {
  const std::string s = "algebras";
  const auto& dg = c.conv.diagram;
  const auto& l = dg.shape;
  bool mult = true;
  json norms = json::object();
  for (Element f = 0; f < l.size(); ++f)
    for (Element e = 0; e < l.size(); ++e) {
      if (f == e || !l.leq(f, e)) continue;
      AlgebraHom h{dg.algebras[e], dg.algebras[f], dg.transition(f, e)};
      auto v = validate_hom(h);
      mult = mult && v.multiplicative;
      norms[l.label(f) + "<" + l.label(e)] = q(v.norm);
    }
  c.check(s, "transitions multiplicative", mult, norms);
  c.check(s, "regular bimodule axioms", bimodule_axiom_failure(c.conv.algebra, c.reg).empty());
  auto dual = dual_bimodule(c.reg);
  c.check(s, "dual bimodule axioms", bimodule_axiom_failure(c.conv.algebra, dual).empty());
  c.check(s, "dual of dual is the original", dual_bimodule(dual) == c.reg);
  c.results["symmetric_regular"] = symmetric_bimodule_check(c.reg);
  c.results["commutative"] = c.conv.algebra.is_commutative();
  if (c.inst.semigroup) {
    auto flat = semigroup_algebra(*c.inst.semigroup);
    c.check(s, "dimension of the semigroup algebra", flat.dim() == c.conv.dim());
  }
}

const std::vector<std::pair<std::string, Suite>>& suites() {
  static const std::vector<std::pair<std::string, Suite>> all{
      {"engine", suite_engine},         {"mu-chain-map", suite_mu},
      {"disintegration", suite_disintegration}, {"sigma", suite_sigma},
      {"rect-band", suite_rect_band},   {"unit", suite_unit},
      {"relative", suite_relative},     {"transfer", suite_transfer},
      {"normalised", suite_normalised}, {"diagonal", suite_diagonal},
      {"homotopy", suite_homotopy},     {"cohomology", suite_cohomology},
      {"semigroups", suite_semigroups}, {"algebras", suite_algebras},
  };
  return all;
}

void command_validate(Context& c) {
  const auto& l = c.conv.diagram.shape;
  json info = {{"shape_size", l.size()}, {"dim", c.conv.dim()}};
  if (c.inst.semigroup) {
    info["semigroup_size"] = c.inst.semigroup->size();
    info["band_class"] = to_string(band_class(*c.inst.semigroup));
    info["decomposes"] = c.inst.decomposition.has_value();
  }
  json contractive = json::object();
  bool ok = true;
  for (Element f = 0; f < l.size(); ++f)
    for (Element e = 0; e < l.size(); ++e) {
      if (f == e || !l.leq(f, e)) continue;
      auto v = validate_hom(AlgebraHom{c.conv.diagram.algebras[e], c.conv.diagram.algebras[f],
                                       c.conv.diagram.transition(f, e)});
      ok = ok && v.multiplicative;
      contractive[l.label(f) + "<" + l.label(e)] = v.contractive;
    }
  info["contractive"] = contractive;
  info["unit"] = c.conv.algebra.find_unit().has_value();
  c.results["validate"] = info;
  c.check("validate", "instance is well formed", ok);
}

void command_homology(Context& c) {
  auto r = betti(c.conv.algebra, c.reg, c.cfg.max_degree);
  c.results["homology"] = betti_json(r);
  bool consistent = true;
  for (const auto& d : r.degrees) consistent = consistent && d.rank_prev + d.rank_next + d.betti == d.dim;
  c.check("homology", "betti numbers consistent", consistent, vec_json(r.betti()));
}

void command_cohomology(Context& c) {
  auto dual = cohomology_betti(c.conv.algebra, dual_bimodule(c.reg), c.cfg.max_degree);
  auto reg = cohomology_betti(c.conv.algebra, c.reg, c.cfg.max_degree);
  c.results["cohomology"] = {{"dual", betti_json(dual)}, {"regular", betti_json(reg)}};
  c.check("cohomology", "computed", true);
}

void command_decompose(Context& c) {
  if (!c.inst.semigroup) {
    c.skip("decompose", "decomposition", "instance is already a diagram");
    return;
  }
  std::string why;
  auto dec = decompose_strong_semilattice(*c.inst.semigroup, &why);
  if (!dec) {
    c.results["decompose"] = {{"decomposes", false}, {"reason", why}};
    c.check("decompose", "decomposition", false, why);
    return;
  }
  json comps = json::object();
  for (Element e = 0; e < dec->shape.size(); ++e) {
    json elems = json::array();
    for (const auto& x : dec->components[e].labels()) elems.push_back(x);
    comps[dec->shape.label(e)] = {{"elements", elems}, {"table", dec->components[e].table()}};
  }
  json trans = json::object();
  for (Element f = 0; f < dec->shape.size(); ++f)
    for (Element e = 0; e < dec->shape.size(); ++e)
      if (f != e && dec->shape.leq(f, e)) trans[dec->shape.label(f) + "<" + dec->shape.label(e)] = dec->transition(f, e);
  json shape_elems = json::array();
  for (const auto& x : dec->shape.semigroup().labels()) shape_elems.push_back(x);
  c.results["decompose"] = {
      {"decomposes", true},
      {"shape", {{"elements", shape_elems}, {"table", dec->shape.semigroup().table()}}},
      {"components", comps},
      {"transitions", trans}};
  auto again = assemble_strong_semilattice(*dec);
  c.check("decompose", "reassembled table equals the input", again.table() == c.inst.semigroup->table());
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate", "homology", "cohomology",
                                              "decompose", "diagonal", "verify"};
  return names;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [n, _] : suites()) out.push_back(n);
    return out;
  }();
  return names;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string stable_text(const json& report) {
  json copy = report;
  copy.erase("timing");
  return copy.dump(2);
}

RunResult run(const std::string& command, const Instance& instance, const RunConfig& config) {
  if (std::find(command_names().begin(), command_names().end(), command) == command_names().end()) {
    throw SchemaError("command", "unknown command \"" + command + "\"");
  }
  std::vector<std::string> chosen;
  if (command == "verify") {
    for (const auto& s : config.suites) {
      if (s == "all") {
        chosen = suite_names();
        break;
      }
      if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
        throw SchemaError("suite", "unknown suite \"" + s + "\"");
      }
      if (std::find(chosen.begin(), chosen.end(), s) == chosen.end()) chosen.push_back(s);
    }
    if (chosen.empty()) throw SchemaError("suite", "verify needs at least one suite");
  }

  auto start = std::chrono::steady_clock::now();
  std::ostringstream keytext;
  keytext << instance.canonical.dump() << '\n' << command << '\n' << config.max_degree << '\n'
          << config.resource_limit << '\n' << config.direct_solve << '\n' << config.sigma_budget << '\n';
  for (const auto& s : chosen) keytext << s << ',';
  const std::uint64_t key = fnv1a(keytext.str());
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(key));

  RunResult result;
  fs::path cache_file;
  if (!config.cache_dir.empty()) {
    cache_file = fs::path(config.cache_dir) / (std::string(hex) + ".json");
    std::ifstream in(cache_file);
    if (in) {
      try {
        result.report = json::parse(in);
        result.exit_code = result.report.value("verdict", "FAIL") == "PASS" ? 0 : 1;
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.report["timing"] = {{"cache", "hit"}, {"seconds", secs}};
        return result;
      } catch (const json::exception&) {
        // Unreadable cache entries are recomputed.
      }
    }
  }

  std::size_t old_limit = resource_limit();
  set_resource_limit(config.resource_limit);
  Context ctx(instance, config);
  std::vector<std::string> errors;
  auto guarded = [&](const std::string& name, const std::function<void(Context&)>& fn) {
    try {
      fn(ctx);
    } catch (const Error& e) {
      ctx.checks.push_back({{"suite", name}, {"name", "run"}, {"verdict", "FAIL"}, {"detail", e.what()}});
    }
  };
  if (command == "validate") guarded("validate", command_validate);
  if (command == "homology") guarded("homology", command_homology);
  if (command == "cohomology") guarded("cohomology", command_cohomology);
  if (command == "decompose") guarded("decompose", command_decompose);
  if (command == "diagonal") guarded("diagonal", suite_diagonal);
  for (const auto& name : chosen) {
    for (const auto& [n, fn] : suites())
      if (n == name) guarded(name, fn);
  }
  set_resource_limit(old_limit);

  bool pass = true;
  std::size_t passed = 0, failed = 0, skipped = 0;
  for (const auto& c : ctx.checks) {
    const std::string v = c["verdict"];
    if (v == "PASS") ++passed;
    if (v == "FAIL") ++failed, pass = false;
    if (v == "SKIP") ++skipped;
  }
  json report;
  report["command"] = command;
  report["instance"] = {{"kind", instance.kind}, {"name", instance.name}, {"hash", hex}};
  report["config"] = {{"max_degree", config.max_degree},
                      {"direct_solve", config.direct_solve},
                      {"resource_limit", config.resource_limit},
                      {"sigma_budget", config.sigma_budget},
                      {"suites", chosen}};
  report["checks"] = ctx.checks;
  report["results"] = ctx.results;
  report["summary"] = {{"passed", passed}, {"failed", failed}, {"skipped", skipped}};
  report["verdict"] = pass ? "PASS" : "FAIL";
  result.exit_code = pass ? 0 : 1;

  if (!cache_file.empty()) {
    std::error_code ec;
    fs::create_directories(cache_file.parent_path(), ec);
    std::ofstream out(cache_file);
    if (out) out << stable_text(report);
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report["timing"] = {{"cache", cache_file.empty() ? "off" : "miss"}, {"seconds", secs}};
  result.report = std::move(report);
  return result;
}

std::string render_table(const json& report) {
  std::ostringstream out;
  const json& inst = report["instance"];
  out << report["command"].get<std::string>() << "  " << inst["kind"].get<std::string>();
  if (!inst["name"].get<std::string>().empty()) out << "  " << inst["name"].get<std::string>();
  out << '\n';
  std::size_t width = 0;
  for (const auto& c : report["checks"]) {
    width = std::max(width, c["suite"].get<std::string>().size() + c["name"].get<std::string>().size() + 2);
  }
  for (const auto& c : report["checks"]) {
    std::string label = c["suite"].get<std::string>() + ": " + c["name"].get<std::string>();
    out << "  " << c["verdict"].get<std::string>() << "  " << label;
    if (c.contains("detail")) {
      out << std::string(width + 2 - label.size(), ' ');
      out << (c["detail"].is_string() ? c["detail"].get<std::string>() : c["detail"].dump());
    }
    out << '\n';
  }
  if (report["results"].contains("homology")) {
    out << "  betti " << report["results"]["homology"]["betti"].dump() << '\n';
  }
  const json& s = report["summary"];
  out << report["verdict"].get<std::string>() << "  (" << s["passed"].get<int>() << " passed, "
      << s["failed"].get<int>() << " failed, " << s["skipped"].get<int>() << " skipped)\n";
  return out.str();
}

}  // namespace semihoch::cli
