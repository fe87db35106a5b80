#include "semihoch/sparse.hpp"

#include <algorithm>

#include "semihoch/error.hpp"
#include "semihoch/trace.hpp"

namespace semihoch {

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t start = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (start == t.size()) return false;
    return std::all_of(t.begin() + static_cast<long>(start), t.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
    throw ValidationError("not a rational number: '" + s + "'");
  }
  mpz_class d(den);
  if (d == 0) throw ValidationError("zero denominator in '" + s + "'");
  Rational q(mpz_class(num), d);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// SparseVector

SparseVector SparseVector::from_entries(Index dim, std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  std::vector<Entry> out;
  out.reserve(entries.size());
  for (auto& e : entries) {
    if (e.index >= dim) {
      throw IndexOutOfRange("vector index " + std::to_string(e.index) +
                            " out of range " + std::to_string(dim));
    }
    if (!out.empty() && out.back().index == e.index) {
      out.back().value += e.value;
    } else {
      out.push_back(std::move(e));
    }
  }
  std::erase_if(out, [](const Entry& e) { return e.value == 0; });
  return from_sorted(dim, std::move(out));
}

SparseVector SparseVector::from_sorted(Index dim, std::vector<Entry> entries) {
  SparseVector v(dim);
  v.entries_ = std::move(entries);
  return v;
}

SparseVector SparseVector::unit(Index dim, Index i, const Rational& value) {
  if (i >= dim) throw IndexOutOfRange("unit vector index out of range");
  SparseVector v(dim);
  if (value != 0) v.entries_.push_back({i, value});
  return v;
}

SparseVector SparseVector::from_dense(const std::vector<Rational>& values) {
  SparseVector v(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    if (values[i] != 0) v.entries_.push_back({i, values[i]});
  }
  return v;
}

Rational SparseVector::coefficient(Index i) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), i,
      [](const Entry& e, Index idx) { return e.index < idx; });
  if (it != entries_.end() && it->index == i) return it->value;
  return 0;
}

Rational SparseVector::l1_norm() const {
  Rational total = 0;
  for (const auto& e : entries_) total += abs(e.value);
  return total;
}

std::vector<Rational> SparseVector::to_dense() const {
  std::vector<Rational> out(dim_);
  for (const auto& e : entries_) out[e.index] = e.value;
  return out;
}

SparseVector& SparseVector::add_scaled(const SparseVector& other,
                                       const Rational& c) {
  if (other.dim_ != dim_) {
    throw DimensionMismatch("vector lengths " + std::to_string(dim_) + " and " +
                            std::to_string(other.dim_));
  }
  if (c == 0 || other.entries_.empty()) return *this;
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() ||
        (a != entries_.end() && a->index < b->index)) {
      merged.push_back(std::move(*a++));
    } else if (a == entries_.end() || b->index < a->index) {
      merged.push_back({b->index, c * b->value});
      ++b;
    } else {
      Rational v = a->value + c * b->value;
      if (v != 0) merged.push_back({a->index, std::move(v)});
      ++a;
      ++b;
    }
  }
  entries_ = std::move(merged);
  return *this;
}

SparseVector& SparseVector::operator*=(const Rational& c) {
  if (c == 0) {
    entries_.clear();
  } else {
    for (auto& e : entries_) e.value *= c;
  }
  return *this;
}

SparseVector tensor(const SparseVector& a, const SparseVector& b) {
  std::vector<Entry> out;
  out.reserve(a.nnz() * b.nnz());
  for (const auto& x : a.entries()) {
    for (const auto& y : b.entries()) {
      out.push_back({x.index * b.dim() + y.index, x.value * y.value});
    }
  }
  return SparseVector::from_sorted(a.dim() * b.dim(), std::move(out));
}

// ---------------------------------------------------------------------------
// DenseAccumulator

DenseAccumulator::DenseAccumulator(Index dim)
    : values_(dim), touched_mark_(dim, 0) {}

void DenseAccumulator::add(Index i, const Rational& v) {
  if (!touched_mark_[i]) {
    touched_mark_[i] = 1;
    touched_.push_back(i);
  }
  values_[i] += v;
}

void DenseAccumulator::add_scaled(const SparseVector& v, const Rational& c) {
  for (const auto& e : v.entries()) {
    mpq_mul(scratch_.get_mpq_t(), e.value.get_mpq_t(), c.get_mpq_t());
    add(e.index, scratch_);
  }
}

SparseVector DenseAccumulator::take() {
  std::sort(touched_.begin(), touched_.end());
  std::vector<Entry> out;
  out.reserve(touched_.size());
  for (Index i : touched_) {
    if (values_[i] != 0) {
      out.push_back({i, values_[i]});
      values_[i] = 0;
    }
    touched_mark_[i] = 0;
  }
  touched_.clear();
  return SparseVector::from_sorted(values_.size(), std::move(out));
}

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols, SparseVector(rows)) {}

SparseMatrix SparseMatrix::identity(Index n) {
  SparseMatrix m(n, n);
  for (Index i = 0; i < n; ++i) m.cols_[i] = SparseVector::unit(n, i);
  return m;
}

SparseMatrix SparseMatrix::from_columns(Index rows,
                                        std::vector<SparseVector> cols) {
  SparseMatrix m;
  m.rows_ = rows;
  for (const auto& c : cols) {
    if (c.dim() != rows) throw DimensionMismatch("column length mismatch");
  }
  m.cols_ = std::move(cols);
  return m;
}

SparseMatrix SparseMatrix::from_dense(
    const std::vector<std::vector<Rational>>& rows) {
  Index r = rows.size();
  Index c = r == 0 ? 0 : rows[0].size();
  SparseMatrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw DimensionMismatch("ragged dense matrix");
  }
  for (Index j = 0; j < c; ++j) {
    std::vector<Entry> entries;
    for (Index i = 0; i < r; ++i) {
      if (rows[i][j] != 0) entries.push_back({i, rows[i][j]});
    }
    m.cols_[j] = SparseVector::from_sorted(r, std::move(entries));
  }
  return m;
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols,
                                         const std::vector<Triplet>& triplets) {
  std::vector<std::vector<Entry>> by_col(cols);
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw IndexOutOfRange("triplet outside matrix bounds");
    }
    by_col[t.col].push_back({t.row, t.value});
  }
  SparseMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    m.cols_[j] = SparseVector::from_entries(rows, std::move(by_col[j]));
  }
  return m;
}

void SparseMatrix::set_column(Index j, SparseVector v) {
  if (v.dim() != rows_) throw DimensionMismatch("column length mismatch");
  cols_.at(j) = std::move(v);
}

Rational SparseMatrix::at(Index r, Index c) const {
  if (r >= rows_ || c >= cols_.size()) {
    throw IndexOutOfRange("matrix entry out of range");
  }
  return cols_[c].coefficient(r);
}

std::size_t SparseMatrix::nnz() const {
  std::size_t total = 0;
  for (const auto& c : cols_) total += c.nnz();
  return total;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(cols_.begin(), cols_.end(),
                     [](const SparseVector& c) { return c.is_zero(); });
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::vector<Entry>> rows(rows_);
  for (Index j = 0; j < cols_.size(); ++j) {
    for (const auto& e : cols_[j].entries()) rows[e.index].push_back({j, e.value});
  }
  SparseMatrix t(cols_.size(), rows_);
  for (Index i = 0; i < rows_; ++i) {
    t.cols_[i] = SparseVector::from_sorted(cols_.size(), std::move(rows[i]));
  }
  return t;
}

SparseVector SparseMatrix::apply(const SparseVector& v) const {
  if (v.dim() != cols_.size()) {
    throw DimensionMismatch("matrix has " + std::to_string(cols_.size()) +
                            " columns, vector has length " +
                            std::to_string(v.dim()));
  }
  DenseAccumulator acc(rows_);
  for (const auto& e : v.entries()) acc.add_scaled(cols_[e.index], e.value);
  return acc.take();
}

std::vector<std::vector<Rational>> SparseMatrix::to_dense() const {
  std::vector<std::vector<Rational>> out(rows_,
                                         std::vector<Rational>(cols_.size()));
  for (Index j = 0; j < cols_.size(); ++j) {
    for (const auto& e : cols_[j].entries()) out[e.index][j] = e.value;
  }
  return out;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("cannot multiply " + std::to_string(a.rows()) +
                            "x" + std::to_string(a.cols()) + " by " +
                            std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
  SparseMatrix out(a.rows(), b.cols());
  DenseAccumulator acc(a.rows());
  for (Index j = 0; j < b.cols(); ++j) {
    for (const auto& e : b.cols_[j].entries()) {
      acc.add_scaled(a.cols_[e.index], e.value);
    }
    out.cols_[j] = acc.take();
  }
  return out;
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("matrix sum of different shapes");
  }
  SparseMatrix out = a;
  for (Index j = 0; j < a.cols(); ++j) out.cols_[j].add_scaled(b.cols_[j], 1);
  return out;
}

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("matrix difference of different shapes");
  }
  SparseMatrix out = a;
  for (Index j = 0; j < a.cols(); ++j) out.cols_[j].add_scaled(b.cols_[j], -1);
  return out;
}

SparseMatrix operator*(const Rational& c, const SparseMatrix& a) {
  SparseMatrix out = a;
  for (auto& col : out.cols_) col *= c;
  return out;
}

Rational l1_operator_norm(const SparseMatrix& m) {
  note_op("l1_operator_norm");
  Rational best = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    Rational n = m.column(j).l1_norm();
    if (n > best) best = n;
  }
  return best;
}

}  // namespace semihoch
