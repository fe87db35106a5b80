#include "semihoch/diagram.hpp"

#include <set>

#include "semihoch/error.hpp"
#include "semihoch/trace.hpp"
#include "semihoch/linalg.hpp"

namespace semihoch {

namespace {

std::string pair_name(const FiniteSemilattice& l, Element f, Element e) {
  return l.label(f) + "<" + l.label(e);
}

}  // namespace

void validate_diagram(const SemilatticeDiagram& d) {
  const Element n = static_cast<Element>(d.shape.size());
  if (d.algebras.size() != n) {
    throw ValidationError("diagram has " + std::to_string(d.algebras.size()) +
                          " algebras for a shape of size " + std::to_string(n));
  }
  if (d.transitions.size() != std::size_t{n} * n) {
    throw ValidationError("transition table has the wrong size");
  }
  for (Element e = 0; e < n; ++e) {
    for (Element f = 0; f < n; ++f) {
      if (!d.shape.leq(f, e)) continue;
      const auto& phi = d.transition(f, e);
      if (phi.rows() != d.algebras[f].dim() || phi.cols() != d.algebras[e].dim()) {
        throw ValidationError("transition " + pair_name(d.shape, f, e) + " has shape " +
                              std::to_string(phi.rows()) + "x" + std::to_string(phi.cols()));
      }
      if (e == f && phi != SparseMatrix::identity(d.algebras[e].dim())) {
        throw ValidationError("transition " + pair_name(d.shape, e, e) + " is not the identity");
      }
      auto verdict = validate_hom({d.algebras[e], d.algebras[f], phi});
      if (!verdict.multiplicative) {
        throw ValidationError("transition " + pair_name(d.shape, f, e) + " is not multiplicative");
      }
    }
  }
  for (Element e = 0; e < n; ++e) {
    for (Element f = 0; f < n; ++f) {
      if (!d.shape.leq(f, e)) continue;
      for (Element g = 0; g < n; ++g) {
        if (!d.shape.leq(g, f)) continue;
        if (d.transition(g, f) * d.transition(f, e) != d.transition(g, e)) {
          throw ValidationError("transitions " + pair_name(d.shape, g, f) + " o " +
                                pair_name(d.shape, f, e) + " and " +
                                pair_name(d.shape, g, e) + " disagree");
        }
      }
    }
  }
}

SemilatticeDiagram make_diagram(FiniteSemilattice shape, std::vector<AlgebraPresentation> algebras,
                                const std::map<std::pair<Element, Element>, SparseMatrix>& given) {
  const Element n = static_cast<Element>(shape.size());
  if (algebras.size() != n) {
    throw ValidationError("diagram has " + std::to_string(algebras.size()) +
                          " algebras for a shape of size " + std::to_string(n));
  }
  SemilatticeDiagram d;
  d.transitions.assign(std::size_t{n} * n, SparseMatrix());
  std::vector<char> known(std::size_t{n} * n, 0);
  for (const auto& [key, m] : given) {
    auto [f, e] = key;
    if (f >= n || e >= n) throw ValidationError("transition refers to an unknown element");
    if (!shape.leq(f, e)) {
      throw ValidationError("transition given for " + pair_name(shape, f, e) +
                            " but the pair is not ordered");
    }
    d.transitions[f * n + e] = m;
    known[f * n + e] = 1;
  }
  for (Element e = 0; e < n; ++e) {
    if (!known[e * n + e]) {
      d.transitions[e * n + e] = SparseMatrix::identity(algebras[e].dim());
      known[e * n + e] = 1;
    }
  }
  for (bool progress = true; progress;) {
    progress = false;
    for (Element e = 0; e < n; ++e) {
      for (Element f = 0; f < n; ++f) {
        if (!shape.leq(f, e) || known[f * n + e]) continue;
        for (Element g = 0; g < n; ++g) {
          if (g == e || g == f || !shape.leq(f, g) || !shape.leq(g, e)) continue;
          if (known[f * n + g] && known[g * n + e]) {
            d.transitions[f * n + e] = d.transitions[f * n + g] * d.transitions[g * n + e];
            known[f * n + e] = 1;
            progress = true;
            break;
          }
        }
      }
    }
  }
  for (Element e = 0; e < n; ++e) {
    for (Element f = 0; f < n; ++f) {
      if (shape.leq(f, e) && !known[f * n + e]) {
        throw ValidationError("missing transition " + pair_name(shape, f, e));
      }
    }
  }
  d.shape = std::move(shape);
  d.algebras = std::move(algebras);
  validate_diagram(d);
  return d;
}

SemilatticeDiagram constant_diagram(const FiniteSemilattice& shape, const AlgebraPresentation& a) {
  std::map<std::pair<Element, Element>, SparseMatrix> given;
  for (Element e = 0; e < shape.size(); ++e) {
    for (Element f = 0; f < shape.size(); ++f) {
      if (shape.leq(f, e)) given[{f, e}] = SparseMatrix::identity(a.dim());
    }
  }
  return make_diagram(shape, std::vector<AlgebraPresentation>(shape.size(), a), given);
}

// ---------------------------------------------------------------------------

SparseMatrix ConvolutionAlgebra::inclusion(Element e) const {
  SparseMatrix m(dim(), block_dim(e));
  for (Index i = 0; i < block_dim(e); ++i) m.set_column(i, SparseVector::unit(dim(), global(e, i)));
  return m;
}

ConvolutionAlgebra build_convolution(const SemilatticeDiagram& d) {
  note_op("build_convolution");
  validate_diagram(d);
  const Element n = static_cast<Element>(d.shape.size());
  ConvolutionAlgebra c;
  c.diagram = d;
  c.offset.assign(n + 1, 0);
  for (Element e = 0; e < n; ++e) c.offset[e + 1] = c.offset[e] + d.algebras[e].dim();
  const Index dim = c.offset[n];
  for (Element e = 0; e < n; ++e) {
    for (Index i = 0; i < d.algebras[e].dim(); ++i) c.block_of.push_back(e);
  }
  std::set<std::string> seen;
  bool distinct = true;
  for (const auto& a : d.algebras) {
    for (const auto& l : a.labels()) distinct = seen.insert(l).second && distinct;
  }
  std::vector<std::string> labels;
  for (Element e = 0; e < n; ++e) {
    for (const auto& l : d.algebras[e].labels()) {
      labels.push_back(distinct ? l : d.shape.label(e) + "/" + l);
    }
  }
  std::vector<SparseVector> products(dim * dim);
  for (Index x = 0; x < dim; ++x) {
    Element e = c.block_of[x];
    for (Index y = 0; y < dim; ++y) {
      Element f = c.block_of[y];
      Element g = d.shape.meet(e, f);
      const auto& ag = d.algebras[g];
      SparseVector p = ag.multiply(d.transition(g, e).column(c.local(x)),
                                   d.transition(g, f).column(c.local(y)));
      std::vector<Entry> entries;
      for (const auto& en : p.entries()) entries.push_back({c.offset[g] + en.index, en.value});
      products[x * dim + y] = SparseVector::from_sorted(dim, std::move(entries));
    }
  }
  auto plain = AlgebraPresentation::make(labels, products);
  c.algebra = AlgebraPresentation::make(std::move(labels), std::move(products), plain.find_unit());
  return c;
}

SemilatticeDiagram clifford_algebra_diagram(const DecompositionData& d) {
  note_op("clifford_algebra_diagram");
  validate_decomposition(d);
  const Element n = static_cast<Element>(d.shape.size());
  std::vector<AlgebraPresentation> algebras;
  for (Element e = 0; e < n; ++e) {
    if (!d.components[e].is_group()) {
      throw NotAGroup("component over " + d.shape.label(e) + " is not a group");
    }
    algebras.push_back(semigroup_algebra(d.components[e]));
  }
  std::map<std::pair<Element, Element>, SparseMatrix> given;
  for (Element e = 0; e < n; ++e) {
    for (Element f = 0; f < n; ++f) {
      if (!d.shape.leq(f, e)) continue;
      given[{f, e}] = induced_hom(d.components[e], d.components[f], d.transition(f, e)).matrix;
    }
  }
  return make_diagram(d.shape, std::move(algebras), given);
}

// ---------------------------------------------------------------------------

SemilatticeHom make_semilattice_hom(FiniteSemilattice source, FiniteSemilattice target,
                                    std::vector<Element> map) {
  if (map.size() != source.size()) throw ValidationError("semilattice map of wrong length");
  for (Element x : map) {
    if (x >= target.size()) throw ValidationError("semilattice map leaves its target");
  }
  for (Element x = 0; x < source.size(); ++x) {
    for (Element y = 0; y < source.size(); ++y) {
      if (map[source.meet(x, y)] != target.meet(map[x], map[y])) {
        throw ValidationError("map is not a homomorphism at (" + source.label(x) + ", " +
                              source.label(y) + ")");
      }
    }
  }
  return {std::move(source), std::move(target), std::move(map)};
}

SemilatticeHom compose(const SemilatticeHom& a, const SemilatticeHom& b) {
  if (!(b.target == a.source)) throw ValidationError("homomorphisms are not composable");
  std::vector<Element> map;
  for (Element x : b.map) map.push_back(a.map[x]);
  return {b.source, a.target, std::move(map)};
}

SemilatticeHom identity_hom(const FiniteSemilattice& l) {
  std::vector<Element> map(l.size());
  for (Element x = 0; x < l.size(); ++x) map[x] = x;
  return {l, l, std::move(map)};
}

SparseVector l1L_action(const ConvolutionAlgebra& c, Element e, const SparseVector& v) {
  note_op("l1L_action");
  if (v.dim() != c.dim()) throw DimensionMismatch("vector of wrong length");
  DenseAccumulator acc(c.dim());
  const auto& d = c.diagram;
  for (const auto& en : v.entries()) {
    Element i = c.block_of[en.index];
    Element g = d.shape.meet(i, e);
    for (const auto& t : d.transition(g, i).column(c.local(en.index)).entries()) {
      mpq_class w = en.value * t.value;
      acc.add(c.global(g, t.index), w);
    }
  }
  return acc.take();
}

SparseMatrix l1L_action_matrix(const ConvolutionAlgebra& c, Element e) {
  SparseMatrix m(c.dim(), c.dim());
  for (Index x = 0; x < c.dim(); ++x) {
    m.set_column(x, l1L_action(c, e, SparseVector::unit(c.dim(), x)));
  }
  return m;
}

UnitCheck unit_check(const ConvolutionAlgebra& c) {
  note_op("unit_check");
  UnitCheck out;
  const auto& l = c.diagram.shape;
  const Element n = static_cast<Element>(l.size());
  auto u = semigroup_algebra(l.semigroup()).find_unit();
  if (!u) {
    out.detail = "the semilattice algebra of the shape has no unit";
    return out;
  }
  out.shape_unital = true;
  out.lambda = u->to_dense();
  out.coefficient_identity = true;
  for (Element f = 0; f < n && out.coefficient_identity; ++f) {
    for (Element h = 0; h < n; ++h) {
      Rational sum = 0;
      for (Element e = 0; e < n; ++e) {
        if (l.meet(e, f) == h) sum += out.lambda[e];
      }
      if (sum != (h == f ? 1 : 0)) {
        out.coefficient_identity = false;
        out.detail = "coefficient identity fails at f=" + l.label(f) + ", h=" + l.label(h);
        break;
      }
    }
  }
  // u . x = sum_e lambda_e (e . x); left and right actions agree.
  SparseMatrix act(c.dim(), c.dim());
  for (Element e = 0; e < n; ++e) {
    if (out.lambda[e] != 0) act = act + out.lambda[e] * l1L_action_matrix(c, e);
  }
  out.passed = act == SparseMatrix::identity(c.dim());
  if (!out.passed && out.detail.empty()) out.detail = "u . x != x for some block element";
  return out;
}

// ---------------------------------------------------------------------------

SemilatticeDiagram pullback(const SemilatticeHom& alpha, const SemilatticeDiagram& d) {
  note_op("pullback");
  if (!(alpha.target == d.shape)) throw ValidationError("pullback along a map into another shape");
  const Element n = static_cast<Element>(alpha.source.size());
  const Element m = static_cast<Element>(d.shape.size());
  SemilatticeDiagram out;
  out.shape = alpha.source;
  for (Element h = 0; h < n; ++h) out.algebras.push_back(d.algebras[alpha(h)]);
  out.transitions.assign(std::size_t{n} * n, SparseMatrix());
  for (Element e = 0; e < n; ++e) {
    for (Element f = 0; f < n; ++f) {
      if (out.shape.leq(f, e)) out.transitions[f * n + e] = d.transitions[alpha(f) * m + alpha(e)];
    }
  }
  validate_diagram(out);
  return out;
}

SparseMatrix transfer_matrix(const SemilatticeHom& alpha, const ConvolutionAlgebra& source,
                             const ConvolutionAlgebra& target) {
  SparseMatrix t(target.dim(), source.dim());
  for (Index x = 0; x < source.dim(); ++x) {
    Element h = source.block_of[x];
    t.set_column(x, SparseVector::unit(target.dim(), target.global(alpha(h), source.local(x))));
  }
  return t;
}

AlgebraHom transfer_hom(const SemilatticeHom& alpha, const SemilatticeDiagram& d) {
  note_op("transfer_hom");
  auto source = build_convolution(pullback(alpha, d));
  auto target = build_convolution(d);
  SparseMatrix t = transfer_matrix(alpha, source, target);
  return {source.algebra, target.algebra, std::move(t)};
}

SemilatticeHom evaluation_hom(const FiniteSemilattice& target, const std::vector<Element>& targets) {
  note_op("evaluation_hom");
  if (targets.empty()) throw ValidationError("evaluation needs at least one target");
  auto f = free_semilattice(static_cast<unsigned>(targets.size()));
  std::vector<Element> map;
  for (Element x = 0; x < f.size(); ++x) {
    std::uint32_t mask = free_semilattice_mask(x);
    std::optional<Element> value;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if (!(mask & (1u << j))) continue;
      value = value ? target.meet(*value, targets[j]) : targets[j];
    }
    map.push_back(*value);
  }
  return make_semilattice_hom(std::move(f), target, std::move(map));
}

}  // namespace semihoch
