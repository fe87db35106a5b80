#pragma once

// Semilattice diagrams of algebras, their convolution algebras, and the
// maps induced by semilattice homomorphisms.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semihoch/algebra.hpp"
#include "semihoch/semigroup.hpp"

namespace semihoch {

struct SemilatticeDiagram {
  FiniteSemilattice shape;
  std::vector<AlgebraPresentation> algebras;  // indexed by shape element
  // transitions[f * |shape| + e] for f <= e, a dim(A_f) x dim(A_e) matrix;
  // empty (0 x 0) for incomparable pairs.
  std::vector<SparseMatrix> transitions;

  const SparseMatrix& transition(Element f, Element e) const {
    return transitions.at(f * shape.size() + e);
  }
};

// Builds a diagram from the transitions that are given (keyed (f, e)),
// supplying identities on the diagonal and composites for missing pairs,
// then validates it. Throws ValidationError naming the failed invariant.
SemilatticeDiagram make_diagram(FiniteSemilattice shape,
                                std::vector<AlgebraPresentation> algebras,
                                const std::map<std::pair<Element, Element>, SparseMatrix>& given);

void validate_diagram(const SemilatticeDiagram& d);

// Diagram with the same algebra over every element and identity transitions.
SemilatticeDiagram constant_diagram(const FiniteSemilattice& shape,
                                    const AlgebraPresentation& a);

struct ConvolutionAlgebra {
  SemilatticeDiagram diagram;
  AlgebraPresentation algebra;
  std::vector<Index> offset;      // block start per shape element, plus end
  std::vector<Element> block_of;  // global basis index -> shape element

  Index dim() const { return algebra.dim(); }
  Index local(Index g) const { return g - offset[block_of[g]]; }
  Index global(Element e, Index i) const { return offset[e] + i; }
  Index block_dim(Element e) const { return offset[e + 1] - offset[e]; }
  // The inclusion of A_e into the convolution algebra.
  SparseMatrix inclusion(Element e) const;
};

// Global basis: blocks in shape order, local bases in presentation order.
// Labels are the fibre labels when globally distinct, "shape/label"
// otherwise. The declared unit is whatever two-sided identity exists.
ConvolutionAlgebra build_convolution(const SemilatticeDiagram& d);

// Group algebras over the shape with the induced transition matrices.
// Throws NotAGroup naming the first component that is not a group.
SemilatticeDiagram clifford_algebra_diagram(const DecompositionData& d);

struct SemilatticeHom {
  FiniteSemilattice source;
  FiniteSemilattice target;
  std::vector<Element> map;

  Element operator()(Element x) const { return map[x]; }
};

// Throws ValidationError if `map` is not a homomorphism.
SemilatticeHom make_semilattice_hom(FiniteSemilattice source, FiniteSemilattice target,
                                    std::vector<Element> map);
// (a o b)(x) = a(b(x))
SemilatticeHom compose(const SemilatticeHom& a, const SemilatticeHom& b);
SemilatticeHom identity_hom(const FiniteSemilattice& l);

// e . v for v in the convolution algebra: block i goes to block ie via
// phi_{ie,i}. The right action is the same map.
SparseVector l1L_action(const ConvolutionAlgebra& c, Element e, const SparseVector& v);
SparseMatrix l1L_action_matrix(const ConvolutionAlgebra& c, Element e);

struct UnitCheck {
  bool shape_unital = false;
  std::vector<Rational> lambda;  // unit of Q[shape], when it exists
  bool coefficient_identity = false;
  bool passed = false;  // every block element fixed by u on both sides
  std::string detail;
};

UnitCheck unit_check(const ConvolutionAlgebra& c);

// (A alpha)_e = A_{alpha e}, transitions phi_{alpha f, alpha e}.
SemilatticeDiagram pullback(const SemilatticeHom& alpha, const SemilatticeDiagram& d);

// tau_alpha: block h of the pullback algebra onto block alpha(h) of the
// target, identity on coefficients.
SparseMatrix transfer_matrix(const SemilatticeHom& alpha, const ConvolutionAlgebra& source,
                             const ConvolutionAlgebra& target);
AlgebraHom transfer_hom(const SemilatticeHom& alpha, const SemilatticeDiagram& d);

// The homomorphism free_semilattice(n + 1) -> L sending generator j to
// targets[j].
SemilatticeHom evaluation_hom(const FiniteSemilattice& target,
                              const std::vector<Element>& targets);

}  // namespace semihoch
