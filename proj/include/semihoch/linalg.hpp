#pragma once

// Exact Gaussian elimination over the rationals.
//
// Everything here is built on one primitive: incremental column reduction.
// Columns are inserted one at a time and reduced against the stored basis by
// their leading (smallest) row index, the same scheme used for persistence
// boundary matrices. Inserting the columns of M in order 0, 1, 2, ... keeps
// exactly the lexicographically first maximal independent set of columns, so
// the pivot columns agree with those of the reduced row-echelon form of M no
// matter how the reduction itself is scheduled.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "semihoch/sparse.hpp"

namespace semihoch {

class EchelonReducer {
 public:
  // `track` keeps enough bookkeeping to express vectors in terms of the
  // inserted originals (needed for solving and kernels, not for ranks).
  explicit EchelonReducer(Index ambient_dim, bool track = false);

  Index ambient_dim() const { return ambient_; }
  std::size_t rank() const { return basis_.size(); }

  // Returns true if v was independent of the stored vectors (and stores it,
  // labelled with `source`). On dependence, and when tracking, the
  // expression of v in the stored originals is left in last_expression().
  bool insert(const SparseVector& v, Index source);

  // Coefficients (source label, coefficient) with v = sum coeff * original;
  // std::nullopt if v is outside the span. Requires tracking.
  std::optional<std::vector<std::pair<Index, Rational>>> express(
      const SparseVector& v) const;

  bool contains(const SparseVector& v) const;

  std::vector<std::pair<Index, Rational>> last_expression() const {
    return expand(last_record_);
  }

  // Stored (partially reduced) basis vectors, leading entry normalised to 1.
  std::vector<SparseVector> basis_vectors() const;

 private:
  struct Stored {
    std::vector<Entry> entries;  // leading entry first, equal to 1
    Rational scale;              // leading value before normalisation
    std::vector<std::pair<std::size_t, Rational>> record;  // (slot, coeff)
    Index source = 0;
  };

  struct Workspace {
    explicit Workspace(Index n) : values(n), in_heap(n, 0) {}
    std::vector<Rational> values;
    std::vector<char> in_heap;
    std::vector<Index> heap;  // min-heap of touched indices
    Rational scratch;
  };

  // Reduces the workspace to zero or to a new pivot. Returns the leading
  // index of the remainder, or ambient_ when it vanished.
  Index reduce(Workspace& ws,
               std::vector<std::pair<std::size_t, Rational>>* record) const;
  static void load(Workspace& ws, const SparseVector& v);
  std::vector<std::pair<Index, Rational>> expand(
      const std::vector<std::pair<std::size_t, Rational>>& coeffs) const;

  Index ambient_;
  bool track_;
  std::vector<Stored> basis_;
  std::vector<std::ptrdiff_t> slot_of_row_;
  Workspace ws_;
  std::vector<std::pair<std::size_t, Rational>> last_record_;
};

// Basis of a subspace in reduced row-echelon form, pivots increasing.
class SubspaceBasis {
 public:
  SubspaceBasis() = default;
  explicit SubspaceBasis(Index ambient_dim) : ambient_(ambient_dim) {}

  static SubspaceBasis from_spanning(Index ambient_dim,
                                     const std::vector<SparseVector>& spanning);

  Index ambient_dim() const { return ambient_; }
  std::size_t dim() const { return vectors_.size(); }
  const std::vector<SparseVector>& vectors() const { return vectors_; }
  const std::vector<Index>& pivots() const { return pivots_; }
  bool contains(const SparseVector& v) const;

 private:
  Index ambient_ = 0;
  std::vector<SparseVector> vectors_;
  std::vector<Index> pivots_;
};

std::size_t rank(const SparseMatrix& m);

SubspaceBasis kernel_basis(const SparseMatrix& m);

// Particular solution of M x = b supported on the pivot columns of M, i.e.
// the reduced echelon solution with every free variable set to zero.
std::optional<SparseVector> solve_particular(const SparseMatrix& m,
                                             const SparseVector& b);
std::optional<std::vector<Rational>> solve_particular(
    const SparseMatrix& m, const std::vector<Rational>& b);

// Factor once, solve many right-hand sides with the same convention as
// solve_particular.
class EchelonSolver {
 public:
  explicit EchelonSolver(const SparseMatrix& m);

  std::size_t rank() const { return reducer_.rank(); }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::optional<SparseVector> solve(const SparseVector& b) const;

 private:
  Index rows_;
  Index cols_;
  EchelonReducer reducer_;
};

// Same convention as EchelonSolver, but columns are produced on demand and
// inserted only until the right-hand side lies in their span. The pivots of
// a prefix are a prefix of the pivots of the whole matrix, and pivot columns
// are independent, so the answer does not depend on where insertion stopped.
class LazyEchelonSolver {
 public:
  using ColumnFn = std::function<SparseVector(Index)>;
  LazyEchelonSolver(Index rows, Index cols, ColumnFn column);

  Index inserted() const { return next_; }
  std::optional<SparseVector> solve(const SparseVector& b);

 private:
  Index rows_;
  Index cols_;
  ColumnFn column_;
  EchelonReducer reducer_;
  Index next_ = 0;
};

}  // namespace semihoch
