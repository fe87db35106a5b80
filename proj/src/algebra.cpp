#include "semihoch/algebra.hpp"

#include "semihoch/error.hpp"
#include "semihoch/trace.hpp"
#include "semihoch/linalg.hpp"

namespace semihoch {

namespace {

// sum_m v_m * (b_m b_k)  or  sum_m v_m * (b_k b_m)
SparseVector times_basis(const AlgebraPresentation& a, const SparseVector& v,
                         Index k, bool v_on_left, DenseAccumulator& acc) {
  for (const auto& e : v.entries()) {
    acc.add_scaled(v_on_left ? a.product(e.index, k) : a.product(k, e.index), e.value);
  }
  return acc.take();
}

}  // namespace

AlgebraPresentation AlgebraPresentation::make(std::vector<std::string> labels,
                                              std::vector<SparseVector> products,
                                              std::optional<SparseVector> unit) {
  const Index d = labels.size();
  if (products.size() != d * d) {
    throw DimensionMismatch("expected " + std::to_string(d * d) +
                            " structure-constant vectors, got " +
                            std::to_string(products.size()));
  }
  for (const auto& p : products) {
    if (p.dim() != d) throw DimensionMismatch("structure-constant vector of wrong length");
  }
  if (unit && unit->dim() != d) throw DimensionMismatch("unit vector of wrong length");
  AlgebraPresentation a;
  a.labels_ = std::move(labels);
  a.products_ = std::move(products);
  a.unit_ = std::move(unit);
  DenseAccumulator acc(d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const SparseVector& ij = a.product(i, j);
      for (Index k = 0; k < d; ++k) {
        SparseVector lhs = times_basis(a, ij, k, true, acc);
        SparseVector rhs = times_basis(a, a.product(j, k), i, false, acc);
        if (lhs != rhs) {
          throw ValidationError("structure constants are not associative at (" +
                                a.labels_[i] + ", " + a.labels_[j] + ", " +
                                a.labels_[k] + ")");
        }
      }
    }
  }
  if (a.unit_) {
    for (Index j = 0; j < d; ++j) {
      SparseVector bj = SparseVector::unit(d, j);
      if (times_basis(a, *a.unit_, j, true, acc) != bj ||
          times_basis(a, *a.unit_, j, false, acc) != bj) {
        throw ValidationError("declared unit does not act as identity on " + a.labels_[j]);
      }
    }
  }
  return a;
}

SparseVector AlgebraPresentation::multiply(const SparseVector& x,
                                           const SparseVector& y) const {
  if (x.dim() != dim() || y.dim() != dim()) {
    throw DimensionMismatch("algebra element of wrong length");
  }
  DenseAccumulator acc(dim());
  Rational c;
  for (const auto& a : x.entries()) {
    for (const auto& b : y.entries()) {
      c = a.value * b.value;
      acc.add_scaled(product(a.index, b.index), c);
    }
  }
  return acc.take();
}

SparseMatrix AlgebraPresentation::left_matrix(Index i) const {
  std::vector<SparseVector> cols;
  for (Index k = 0; k < dim(); ++k) cols.push_back(product(i, k));
  return SparseMatrix::from_columns(dim(), std::move(cols));
}

SparseMatrix AlgebraPresentation::right_matrix(Index i) const {
  std::vector<SparseVector> cols;
  for (Index k = 0; k < dim(); ++k) cols.push_back(product(k, i));
  return SparseMatrix::from_columns(dim(), std::move(cols));
}

std::optional<SparseVector> AlgebraPresentation::find_unit() const {
  const Index d = dim();
  if (d == 0) return SparseVector(0);
  // Unknown u; rows: (u b_j)_k for all j,k, then (b_j u)_k.
  std::vector<SparseVector> cols;
  for (Index i = 0; i < d; ++i) {
    std::vector<Entry> entries;
    for (Index j = 0; j < d; ++j) {
      for (const auto& e : product(i, j).entries()) entries.push_back({j * d + e.index, e.value});
    }
    for (Index j = 0; j < d; ++j) {
      for (const auto& e : product(j, i).entries()) {
        entries.push_back({d * d + j * d + e.index, e.value});
      }
    }
    cols.push_back(SparseVector::from_entries(2 * d * d, std::move(entries)));
  }
  std::vector<Entry> rhs;
  for (Index j = 0; j < d; ++j) rhs.push_back({j * d + j, 1});
  for (Index j = 0; j < d; ++j) rhs.push_back({d * d + j * d + j, 1});
  auto m = SparseMatrix::from_columns(2 * d * d, std::move(cols));
  return solve_particular(m, SparseVector::from_entries(2 * d * d, std::move(rhs)));
}

bool AlgebraPresentation::is_commutative() const {
  for (Index i = 0; i < dim(); ++i) {
    for (Index j = i + 1; j < dim(); ++j) {
      if (product(i, j) != product(j, i)) return false;
    }
  }
  return true;
}

AlgebraPresentation semigroup_algebra(const FiniteSemigroup& s) {
  note_op("semigroup_algebra");
  const Index n = s.size();
  std::vector<SparseVector> products;
  products.reserve(n * n);
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y) products.push_back(SparseVector::unit(n, s.product(x, y)));
  }
  std::optional<SparseVector> unit;
  if (auto e = s.identity()) unit = SparseVector::unit(n, *e);
  return AlgebraPresentation::make(s.labels(), std::move(products), std::move(unit));
}

AlgebraPresentation scalar_algebra() {
  return AlgebraPresentation::make({"1"}, {SparseVector::unit(1, 0)}, SparseVector::unit(1, 0));
}

// ---------------------------------------------------------------------------

HomVerdict validate_hom(const AlgebraHom& h) {
  note_op("validate_hom");
  if (h.matrix.rows() != h.target.dim() || h.matrix.cols() != h.source.dim()) {
    throw DimensionMismatch("homomorphism matrix is " + std::to_string(h.matrix.rows()) +
                            "x" + std::to_string(h.matrix.cols()) + ", expected " +
                            std::to_string(h.target.dim()) + "x" +
                            std::to_string(h.source.dim()));
  }
  HomVerdict v;
  v.multiplicative = true;
  for (Index i = 0; i < h.source.dim() && v.multiplicative; ++i) {
    for (Index j = 0; j < h.source.dim(); ++j) {
      SparseVector lhs = h.matrix.apply(h.source.product(i, j));
      SparseVector rhs = h.target.multiply(h.matrix.column(i), h.matrix.column(j));
      if (lhs != rhs) {
        v.multiplicative = false;
        v.failing_pair = {i, j};
        break;
      }
    }
  }
  if (h.source.unit() && h.target.unit()) {
    v.unital = h.matrix.apply(*h.source.unit()) == *h.target.unit();
  }
  v.norm = l1_operator_norm(h.matrix);
  v.contractive = v.norm <= 1;
  return v;
}

AlgebraHom induced_hom(const FiniteSemigroup& source, const FiniteSemigroup& target,
                       const std::vector<Element>& map) {
  if (map.size() != source.size()) throw DimensionMismatch("semigroup map of wrong length");
  SparseMatrix m(target.size(), source.size());
  for (Element x = 0; x < source.size(); ++x) {
    if (map[x] >= target.size()) throw IndexOutOfRange("semigroup map leaves its target");
    m.set_column(x, SparseVector::unit(target.size(), map[x]));
  }
  return {semigroup_algebra(source), semigroup_algebra(target), std::move(m)};
}

// ---------------------------------------------------------------------------

Bimodule::Bimodule(Index dim, std::vector<SparseMatrix> left, std::vector<SparseMatrix> right)
    : dim_(dim), left_(std::move(left)), right_(std::move(right)) {
  if (left_.size() != right_.size()) {
    throw DimensionMismatch("left and right actions cover different algebra dimensions");
  }
  for (const auto* side : {&left_, &right_}) {
    for (const auto& m : *side) {
      if (m.rows() != dim_ || m.cols() != dim_) {
        throw DimensionMismatch("action matrix is not " + std::to_string(dim_) + "x" +
                                std::to_string(dim_));
      }
    }
  }
}

namespace {

SparseMatrix combine(const std::vector<SparseMatrix>& mats, const SparseVector& coeffs,
                     Index dim) {
  SparseMatrix out(dim, dim);
  for (const auto& e : coeffs.entries()) out = out + e.value * mats[e.index];
  return out;
}

}  // namespace

std::string bimodule_axiom_failure(const AlgebraPresentation& a, const Bimodule& m) {
  if (m.algebra_dim() != a.dim()) return "action count differs from algebra dimension";
  std::vector<SparseMatrix> left, right;
  for (Index i = 0; i < a.dim(); ++i) {
    left.push_back(m.left(i));
    right.push_back(m.right(i));
  }
  for (Index i = 0; i < a.dim(); ++i) {
    for (Index j = 0; j < a.dim(); ++j) {
      const auto& ij = a.product(i, j);
      if (combine(left, ij, m.dim()) != m.left(i) * m.left(j)) {
        return "left action fails on (" + a.label(i) + ", " + a.label(j) + ")";
      }
      // (x b_i) b_j = x (b_i b_j)
      if (combine(right, ij, m.dim()) != m.right(j) * m.right(i)) {
        return "right action fails on (" + a.label(i) + ", " + a.label(j) + ")";
      }
      if (m.left(i) * m.right(j) != m.right(j) * m.left(i)) {
        return "actions do not commute on (" + a.label(i) + ", " + a.label(j) + ")";
      }
    }
  }
  return {};
}

Bimodule regular_bimodule(const AlgebraPresentation& a) {
  note_op("regular_bimodule");
  std::vector<SparseMatrix> left, right;
  for (Index i = 0; i < a.dim(); ++i) {
    left.push_back(a.left_matrix(i));
    right.push_back(a.right_matrix(i));
  }
  return Bimodule(a.dim(), std::move(left), std::move(right));
}

Bimodule dual_bimodule(const Bimodule& m) {
  note_op("dual_bimodule");
  std::vector<SparseMatrix> left, right;
  for (Index i = 0; i < m.algebra_dim(); ++i) {
    left.push_back(m.right(i).transpose());
    right.push_back(m.left(i).transpose());
  }
  return Bimodule(m.dim(), std::move(left), std::move(right));
}

bool symmetric_bimodule_check(const Bimodule& m) {
  note_op("symmetric_bimodule_check");
  for (Index i = 0; i < m.algebra_dim(); ++i) {
    if (m.left(i) != m.right(i)) return false;
  }
  return true;
}

Bimodule character_bimodule(const std::vector<Rational>& chi) {
  std::vector<SparseMatrix> acts;
  for (const auto& c : chi) acts.push_back(SparseMatrix::from_dense({{c}}));
  return Bimodule(1, acts, acts);
}

}  // namespace semihoch
