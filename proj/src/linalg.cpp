#include "semihoch/linalg.hpp"

#include <algorithm>
#include <functional>

#include "semihoch/error.hpp"
#include "semihoch/trace.hpp"

namespace semihoch {

namespace {

void heap_push(std::vector<Index>& heap, Index i) {
  heap.push_back(i);
  std::push_heap(heap.begin(), heap.end(), std::greater<>());
}

Index heap_pop(std::vector<Index>& heap) {
  std::pop_heap(heap.begin(), heap.end(), std::greater<>());
  Index i = heap.back();
  heap.pop_back();
  return i;
}

}  // namespace

EchelonReducer::EchelonReducer(Index ambient_dim, bool track)
    : ambient_(ambient_dim),
      track_(track),
      slot_of_row_(ambient_dim, -1),
      ws_(ambient_dim) {}

void EchelonReducer::load(Workspace& ws, const SparseVector& v) {
  for (const auto& e : v.entries()) {
    ws.values[e.index] = e.value;
    ws.in_heap[e.index] = 1;
    ws.heap.push_back(e.index);
  }
  std::make_heap(ws.heap.begin(), ws.heap.end(), std::greater<>());
}

Index EchelonReducer::reduce(
    Workspace& ws,
    std::vector<std::pair<std::size_t, Rational>>* record) const {
  while (!ws.heap.empty()) {
    Index i = heap_pop(ws.heap);
    ws.in_heap[i] = 0;
    if (ws.values[i] == 0) continue;
    std::ptrdiff_t slot = slot_of_row_[i];
    if (slot < 0) return i;
    const Stored& s = basis_[static_cast<std::size_t>(slot)];
    Rational c = ws.values[i];
    if (record != nullptr) record->emplace_back(static_cast<std::size_t>(slot), c);
    for (std::size_t k = 1; k < s.entries.size(); ++k) {
      const Entry& e = s.entries[k];
      mpq_mul(ws.scratch.get_mpq_t(), c.get_mpq_t(), e.value.get_mpq_t());
      mpq_sub(ws.values[e.index].get_mpq_t(), ws.values[e.index].get_mpq_t(),
              ws.scratch.get_mpq_t());
      if (!ws.in_heap[e.index]) {
        ws.in_heap[e.index] = 1;
        heap_push(ws.heap, e.index);
      }
    }
    ws.values[i] = 0;
  }
  return ambient_;
}

bool EchelonReducer::insert(const SparseVector& v, Index source) {
  if (v.dim() != ambient_) {
    throw DimensionMismatch("inserted vector has length " +
                            std::to_string(v.dim()) + ", expected " +
                            std::to_string(ambient_));
  }
  std::vector<std::pair<std::size_t, Rational>> record;
  load(ws_, v);
  Index lead = reduce(ws_, track_ ? &record : nullptr);
  if (lead == ambient_) {
    if (track_) last_record_ = std::move(record);
    return false;
  }
  // Gather the remainder: the lead plus whatever is still queued.
  std::vector<Index> idx{lead};
  for (Index i : ws_.heap) {
    ws_.in_heap[i] = 0;
    if (ws_.values[i] != 0) idx.push_back(i);
  }
  ws_.heap.clear();
  std::sort(idx.begin(), idx.end());
  Stored s;
  s.scale = ws_.values[lead];
  s.entries.reserve(idx.size());
  for (Index i : idx) {
    s.entries.push_back({i, ws_.values[i] / s.scale});
    ws_.values[i] = 0;
  }
  s.record = std::move(record);
  s.source = source;
  slot_of_row_[lead] = static_cast<std::ptrdiff_t>(basis_.size());
  basis_.push_back(std::move(s));
  return true;
}

std::vector<std::pair<Index, Rational>> EchelonReducer::expand(
    const std::vector<std::pair<std::size_t, Rational>>& coeffs) const {
  std::vector<Rational> beta(basis_.size());
  for (const auto& [slot, c] : coeffs) beta[slot] += c;
  std::vector<std::pair<Index, Rational>> out;
  Rational x;
  for (std::size_t k = basis_.size(); k-- > 0;) {
    if (beta[k] == 0) continue;
    const Stored& s = basis_[k];
    x = beta[k] / s.scale;
    for (const auto& [slot, c] : s.record) beta[slot] -= x * c;
    out.emplace_back(s.source, x);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::optional<std::vector<std::pair<Index, Rational>>> EchelonReducer::express(
    const SparseVector& v) const {
  if (!track_) throw Error("express() needs a tracking reducer");
  if (v.dim() != ambient_) throw DimensionMismatch("vector length mismatch");
  Workspace ws(ambient_);
  load(ws, v);
  std::vector<std::pair<std::size_t, Rational>> record;
  if (reduce(ws, &record) != ambient_) return std::nullopt;
  return expand(record);
}

bool EchelonReducer::contains(const SparseVector& v) const {
  if (v.dim() != ambient_) throw DimensionMismatch("vector length mismatch");
  Workspace ws(ambient_);
  load(ws, v);
  return reduce(ws, nullptr) == ambient_;
}

std::vector<SparseVector> EchelonReducer::basis_vectors() const {
  std::vector<SparseVector> out;
  out.reserve(basis_.size());
  for (const auto& s : basis_) {
    out.push_back(SparseVector::from_sorted(ambient_, s.entries));
  }
  return out;
}

// ---------------------------------------------------------------------------

SubspaceBasis SubspaceBasis::from_spanning(
    Index ambient_dim, const std::vector<SparseVector>& spanning) {
  EchelonReducer reducer(ambient_dim);
  for (Index i = 0; i < spanning.size(); ++i) {
    reducer.insert(spanning[i], i);
    if (reducer.rank() == ambient_dim) break;
  }
  std::vector<SparseVector> vecs = reducer.basis_vectors();
  std::sort(vecs.begin(), vecs.end(),
            [](const SparseVector& a, const SparseVector& b) {
              return a.entries().front().index < b.entries().front().index;
            });
  // Back substitution: clear every pivot column above its pivot.
  for (std::size_t k = vecs.size(); k-- > 0;) {
    Index pivot = vecs[k].entries().front().index;
    for (std::size_t j = 0; j < k; ++j) {
      Rational c = vecs[j].coefficient(pivot);
      if (c != 0) vecs[j].add_scaled(vecs[k], -c);
    }
  }
  SubspaceBasis basis(ambient_dim);
  for (auto& v : vecs) basis.pivots_.push_back(v.entries().front().index);
  basis.vectors_ = std::move(vecs);
  return basis;
}

bool SubspaceBasis::contains(const SparseVector& v) const {
  if (v.dim() != ambient_) throw DimensionMismatch("vector length mismatch");
  SparseVector rest = v;
  for (std::size_t k = 0; k < vectors_.size(); ++k) {
    Rational c = rest.coefficient(pivots_[k]);
    if (c != 0) rest.add_scaled(vectors_[k], -c);
  }
  return rest.is_zero();
}

// ---------------------------------------------------------------------------

std::size_t rank(const SparseMatrix& m) {
  note_op("rank");
  EchelonReducer reducer(m.rows());
  for (Index j = 0; j < m.cols() && reducer.rank() < m.rows(); ++j) {
    reducer.insert(m.column(j), j);
  }
  return reducer.rank();
}

SubspaceBasis kernel_basis(const SparseMatrix& m) {
  note_op("kernel_basis");
  EchelonReducer reducer(m.rows(), /*track=*/true);
  std::vector<SparseVector> kernel;
  for (Index j = 0; j < m.cols(); ++j) {
    if (reducer.insert(m.column(j), j)) continue;
    std::vector<Entry> entries;
    for (const auto& [src, c] : reducer.last_expression()) {
      entries.push_back({src, -c});
    }
    entries.push_back({j, 1});
    kernel.push_back(SparseVector::from_entries(m.cols(), std::move(entries)));
  }
  return SubspaceBasis::from_spanning(m.cols(), kernel);
}

EchelonSolver::EchelonSolver(const SparseMatrix& m)
    : rows_(m.rows()), cols_(m.cols()), reducer_(m.rows(), /*track=*/true) {
  for (Index j = 0; j < m.cols() && reducer_.rank() < m.rows(); ++j) {
    reducer_.insert(m.column(j), j);
  }
}

std::optional<SparseVector> EchelonSolver::solve(const SparseVector& b) const {
  if (b.dim() != rows_) {
    throw DimensionMismatch("right-hand side has length " +
                            std::to_string(b.dim()) + ", expected " +
                            std::to_string(rows_));
  }
  auto expr = reducer_.express(b);
  if (!expr) return std::nullopt;
  std::vector<Entry> entries;
  entries.reserve(expr->size());
  for (auto& [src, c] : *expr) entries.push_back({src, std::move(c)});
  return SparseVector::from_sorted(cols_, std::move(entries));
}

LazyEchelonSolver::LazyEchelonSolver(Index rows, Index cols, ColumnFn column)
    : rows_(rows), cols_(cols), column_(std::move(column)), reducer_(rows, /*track=*/true) {}

std::optional<SparseVector> LazyEchelonSolver::solve(const SparseVector& b) {
  if (b.dim() != rows_) {
    throw DimensionMismatch("right-hand side has length " + std::to_string(b.dim()) +
                            ", expected " + std::to_string(rows_));
  }
  for (;;) {
    if (auto expr = reducer_.express(b)) {
      std::vector<Entry> entries;
      entries.reserve(expr->size());
      for (auto& [src, c] : *expr) entries.push_back({src, std::move(c)});
      return SparseVector::from_sorted(cols_, std::move(entries));
    }
    if (next_ == cols_ || reducer_.rank() == rows_) return std::nullopt;
    // Grow geometrically so the membership tests stay a small share.
    Index stop = std::min(cols_, next_ + std::max<Index>(256, next_ / 2));
    for (; next_ < stop && reducer_.rank() < rows_; ++next_) reducer_.insert(column_(next_), next_);
  }
}

std::optional<SparseVector> solve_particular(const SparseMatrix& m,
                                             const SparseVector& b) {
  note_op("solve_particular");
  return EchelonSolver(m).solve(b);
}

std::optional<std::vector<Rational>> solve_particular(
    const SparseMatrix& m, const std::vector<Rational>& b) {
  auto x = solve_particular(m, SparseVector::from_dense(b));
  if (!x) return std::nullopt;
  return x->to_dense();
}

}  // namespace semihoch
