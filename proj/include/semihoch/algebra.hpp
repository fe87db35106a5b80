#pragma once

// Finite-dimensional associative algebras over Q given by structure
// constants in a distinguished basis, homomorphisms between them, and
// bimodules given by action matrices.

#include <optional>
#include <string>
#include <vector>

#include "semihoch/semigroup.hpp"
#include "semihoch/sparse.hpp"

namespace semihoch {

class AlgebraPresentation {
 public:
  AlgebraPresentation() = default;

  // products[i * dim + j] is b_i b_j. Checks lengths, associativity on all
  // basis triples and, if given, that `unit` is a two-sided identity.
  static AlgebraPresentation make(std::vector<std::string> labels,
                                  std::vector<SparseVector> products,
                                  std::optional<SparseVector> unit = std::nullopt);

  Index dim() const { return labels_.size(); }
  const std::string& label(Index i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  const SparseVector& product(Index i, Index j) const { return products_[i * dim() + j]; }
  SparseVector multiply(const SparseVector& a, const SparseVector& b) const;
  const std::optional<SparseVector>& unit() const { return unit_; }

  // Left / right multiplication by b_i as dim x dim matrices.
  SparseMatrix left_matrix(Index i) const;
  SparseMatrix right_matrix(Index i) const;

  // Two-sided identity found by linear solve, whether or not one was
  // declared.
  std::optional<SparseVector> find_unit() const;
  bool is_commutative() const;

  friend bool operator==(const AlgebraPresentation&,
                         const AlgebraPresentation&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<SparseVector> products_;
  std::optional<SparseVector> unit_;
};

// Basis = S in table order, e_x e_y = e_{xy}; the declared unit is e_1 when S
// is a monoid.
AlgebraPresentation semigroup_algebra(const FiniteSemigroup& s);

// Q as a 1-dimensional unital algebra with basis {"1"}.
AlgebraPresentation scalar_algebra();

struct AlgebraHom {
  AlgebraPresentation source;
  AlgebraPresentation target;
  SparseMatrix matrix;  // target.dim x source.dim
};

struct HomVerdict {
  bool multiplicative = false;
  std::optional<bool> unital;  // set only when both algebras declare a unit
  Rational norm;
  bool contractive = false;
  std::optional<std::pair<Index, Index>> failing_pair;
};

// Throws DimensionMismatch when the matrix does not fit the algebras.
HomVerdict validate_hom(const AlgebraHom& h);

// Linear extension of a map of semigroups.
AlgebraHom induced_hom(const FiniteSemigroup& source, const FiniteSemigroup& target,
                       const std::vector<Element>& map);

class Bimodule {
 public:
  Bimodule() = default;
  // left[i], right[i]: action of basis element b_i on M (dim x dim).
  Bimodule(Index dim, std::vector<SparseMatrix> left, std::vector<SparseMatrix> right);

  Index dim() const { return dim_; }
  Index algebra_dim() const { return left_.size(); }
  const SparseMatrix& left(Index i) const { return left_[i]; }
  const SparseMatrix& right(Index i) const { return right_[i]; }

  friend bool operator==(const Bimodule&, const Bimodule&) = default;

 private:
  Index dim_ = 0;
  std::vector<SparseMatrix> left_;
  std::vector<SparseMatrix> right_;
};

// Empty string when M is an A-bimodule; otherwise the first failed axiom.
std::string bimodule_axiom_failure(const AlgebraPresentation& a, const Bimodule& m);

Bimodule regular_bimodule(const AlgebraPresentation& a);
// (a.phi)(m) = phi(m.a), (phi.a)(m) = phi(a.m).
Bimodule dual_bimodule(const Bimodule& m);
bool symmetric_bimodule_check(const Bimodule& m);
// Q with both actions through chi(b_i) (chi must be multiplicative).
Bimodule character_bimodule(const std::vector<Rational>& chi);

}  // namespace semihoch
