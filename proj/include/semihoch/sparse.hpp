#pragma once

// Exact rational scalars, sparse vectors and column-major sparse matrices.

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semihoch {

using Rational = mpq_class;
using Index = std::size_t;

// Always "num/den", also for integers.
std::string to_string(const Rational& q);
// Accepts "p", "p/q" and "-p/q"; throws ValidationError otherwise.
Rational parse_rational(std::string_view text);

struct Entry {
  Index index;
  Rational value;
  friend bool operator==(const Entry&, const Entry&) = default;
};

class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(Index dim) : dim_(dim) {}

  // Sorts, merges duplicate indices and drops zeros.
  static SparseVector from_entries(Index dim, std::vector<Entry> entries);
  // Caller guarantees entries are sorted, unique and nonzero.
  static SparseVector from_sorted(Index dim, std::vector<Entry> entries);
  static SparseVector unit(Index dim, Index i, const Rational& value = 1);
  static SparseVector from_dense(const std::vector<Rational>& values);

  Index dim() const { return dim_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }

  Rational coefficient(Index i) const;
  Rational l1_norm() const;
  std::vector<Rational> to_dense() const;

  // this += c * other
  SparseVector& add_scaled(const SparseVector& other, const Rational& c);
  SparseVector& operator*=(const Rational& c);

  friend SparseVector operator+(SparseVector a, const SparseVector& b) {
    return a.add_scaled(b, 1);
  }
  friend SparseVector operator-(SparseVector a, const SparseVector& b) {
    return a.add_scaled(b, -1);
  }
  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  Index dim_ = 0;
  std::vector<Entry> entries_;
};

// Scatter/gather buffer for summing many sparse contributions of one length.
class DenseAccumulator {
 public:
  explicit DenseAccumulator(Index dim);

  Index dim() const { return values_.size(); }
  void add(Index i, const Rational& v);
  void add_scaled(const SparseVector& v, const Rational& c);
  // Returns the accumulated vector and resets the buffer.
  SparseVector take();

 private:
  std::vector<Rational> values_;
  std::vector<char> touched_mark_;
  std::vector<Index> touched_;
  Rational scratch_;
};

class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols);

  static SparseMatrix identity(Index n);
  static SparseMatrix from_columns(Index rows, std::vector<SparseVector> cols);
  static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& rows);
  struct Triplet {
    Index row, col;
    Rational value;
  };
  static SparseMatrix from_triplets(Index rows, Index cols,
                                    const std::vector<Triplet>& triplets);

  Index rows() const { return rows_; }
  Index cols() const { return cols_.size(); }
  const SparseVector& column(Index j) const { return cols_.at(j); }
  void set_column(Index j, SparseVector v);
  Rational at(Index r, Index c) const;
  std::size_t nnz() const;
  bool is_zero() const;

  SparseMatrix transpose() const;
  SparseVector apply(const SparseVector& v) const;
  std::vector<std::vector<Rational>> to_dense() const;

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator*(const Rational& c, const SparseMatrix& a);
  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  Index rows_ = 0;
  std::vector<SparseVector> cols_;
};

// Largest column l1-norm: the operator norm for the l1 norm in the
// distinguished bases of source and target.
Rational l1_operator_norm(const SparseMatrix& m);

// Kronecker product of column vectors (lexicographic index order).
SparseVector tensor(const SparseVector& a, const SparseVector& b);

}  // namespace semihoch
