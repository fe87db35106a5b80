#include "semihoch/homology.hpp"

#include <algorithm>
#include <atomic>
#include <list>

#include "semihoch/error.hpp"
#include "semihoch/trace.hpp"

namespace semihoch {

namespace {

std::atomic<std::size_t> g_resource_limit{kDefaultResourceLimit};

// Replace digit `pos` of `digits` by each entry of `v`, emitting encoded
// entries scaled by `scale`.
void emit_replaced(const ChainSpace& space, std::vector<Index>& digits, std::size_t pos,
                   const SparseVector& v, const Rational& scale, std::vector<Entry>& out) {
  Index saved = digits[pos];
  for (const auto& e : v.entries()) {
    digits[pos] = e.index;
    out.push_back({space.encode(digits), scale * e.value});
  }
  digits[pos] = saved;
}

// Terms of face i applied to the source tuple `src` (degree n + 1).
void face_terms(const AlgebraPresentation& a, const Bimodule& m, const ChainSpace& tgt,
                const std::vector<Index>& src, unsigned i, const Rational& sign,
                std::vector<Entry>& out) {
  const unsigned n = tgt.degree;
  std::vector<Index> digits;
  digits.reserve(n + 1);
  if (i == 0) {
    digits.assign(src.begin() + 1, src.end());  // placeholder for x a_1 at 0
    digits[0] = 0;
    emit_replaced(tgt, digits, 0, m.right(src[1]).column(src[0]), sign, out);
  } else if (i == n + 1) {
    digits.assign(src.begin(), src.end() - 1);
    emit_replaced(tgt, digits, 0, m.left(src[n + 1]).column(src[0]), sign, out);
  } else {
    // x, a_1 .. a_{i-1}, a_i a_{i+1}, a_{i+2} .. a_{n+1}
    digits.assign(src.begin(), src.begin() + i);
    digits.push_back(0);
    digits.insert(digits.end(), src.begin() + i + 2, src.end());
    emit_replaced(tgt, digits, i, a.product(src[i], src[i + 1]), sign, out);
  }
}

void check_bimodule_fit(const AlgebraPresentation& a, const Bimodule& m) {
  if (m.algebra_dim() != a.dim()) {
    throw DimensionMismatch("bimodule is over an algebra of dimension " +
                            std::to_string(m.algebra_dim()) + ", not " +
                            std::to_string(a.dim()));
  }
}

}  // namespace

void set_resource_limit(std::size_t basis_tensors) { g_resource_limit = basis_tensors; }
std::size_t resource_limit() { return g_resource_limit; }

Index ChainSpace::dim() const {
  Index d = coeff_dim;
  for (unsigned k = 0; k < degree; ++k) d *= alg_dim;
  return d;
}

std::vector<Index> ChainSpace::decode(Index flat) const {
  std::vector<Index> digits(degree + 1);
  for (unsigned k = degree; k >= 1; --k) {
    digits[k] = flat % alg_dim;
    flat /= alg_dim;
  }
  digits[0] = flat;
  return digits;
}

Index ChainSpace::encode(const std::vector<Index>& digits) const {
  Index flat = digits[0];
  for (unsigned k = 1; k <= degree; ++k) flat = flat * alg_dim + digits[k];
  return flat;
}

ChainSpace chain_space(Index coeff_dim, Index alg_dim, unsigned degree) {
  // Overflow-safe size check.
  long double size = static_cast<long double>(coeff_dim);
  for (unsigned k = 0; k < degree; ++k) size *= static_cast<long double>(alg_dim);
  if (size > static_cast<long double>(resource_limit())) {
    throw ResourceBound("chain space of degree " + std::to_string(degree) + " has " +
                        std::to_string(static_cast<unsigned long long>(size)) +
                        " basis tensors, above the limit of " +
                        std::to_string(resource_limit()));
  }
  return {coeff_dim, alg_dim, degree};
}

SparseMatrix face_map(const AlgebraPresentation& a, const Bimodule& m, unsigned n, unsigned i) {
  note_op("face_map");
  check_bimodule_fit(a, m);
  if (i > n + 1) {
    throw IndexOutOfRange("face " + std::to_string(i) + " does not exist in degree " +
                          std::to_string(n));
  }
  ChainSpace src = chain_space(m.dim(), a.dim(), n + 1);
  ChainSpace tgt = chain_space(m.dim(), a.dim(), n);
  std::vector<SparseVector> cols;
  cols.reserve(src.dim());
  std::vector<Entry> out;
  for (Index j = 0; j < src.dim(); ++j) {
    out.clear();
    face_terms(a, m, tgt, src.decode(j), i, 1, out);
    cols.push_back(SparseVector::from_entries(tgt.dim(), out));
  }
  return SparseMatrix::from_columns(tgt.dim(), std::move(cols));
}

SparseVector boundary_column(const AlgebraPresentation& a, const Bimodule& m, unsigned n,
                             Index col) {
  ChainSpace src{m.dim(), a.dim(), n + 1};
  ChainSpace tgt{m.dim(), a.dim(), n};
  std::vector<Index> digits = src.decode(col);
  std::vector<Entry> out;
  for (unsigned i = 0; i <= n + 1; ++i) {
    face_terms(a, m, tgt, digits, i, i % 2 == 0 ? 1 : -1, out);
  }
  return SparseVector::from_entries(tgt.dim(), std::move(out));
}

SparseMatrix boundary(const AlgebraPresentation& a, const Bimodule& m, unsigned n) {
  note_op("boundary");
  check_bimodule_fit(a, m);
  ChainSpace src = chain_space(m.dim(), a.dim(), n + 1);
  ChainSpace tgt = chain_space(m.dim(), a.dim(), n);
  std::vector<SparseVector> cols;
  cols.reserve(src.dim());
  for (Index j = 0; j < src.dim(); ++j) cols.push_back(boundary_column(a, m, n, j));
  return SparseMatrix::from_columns(tgt.dim(), std::move(cols));
}

std::vector<Index> HomologyReport::betti() const {
  std::vector<Index> out;
  for (const auto& d : degrees) out.push_back(d.betti);
  return out;
}

namespace {

HomologyReport assemble_report(const std::vector<Index>& dims, const std::vector<std::size_t>& ranks) {
  HomologyReport r;
  for (std::size_t n = 0; n < dims.size(); ++n) {
    DegreeData d;
    d.dim = dims[n];
    d.rank_prev = n == 0 ? 0 : ranks[n - 1];
    d.rank_next = ranks[n];
    if (d.rank_prev + d.rank_next > d.dim) throw Error("rank data exceed the chain dimension");
    d.betti = d.dim - d.rank_prev - d.rank_next;
    r.degrees.push_back(d);
  }
  return r;
}

}  // namespace

HomologyReport betti(const AlgebraPresentation& a, const Bimodule& m, unsigned max_degree) {
  note_op("betti");
  check_bimodule_fit(a, m);
  chain_space(m.dim(), a.dim(), max_degree + 1);
  std::vector<Index> dims;
  std::vector<std::size_t> ranks;
  for (unsigned n = 0; n <= max_degree; ++n) {
    dims.push_back(ChainSpace{m.dim(), a.dim(), n}.dim());
    ranks.push_back(rank(boundary(a, m, n)));
  }
  return assemble_report(dims, ranks);
}

HomologyReport cohomology_betti(const AlgebraPresentation& a, const Bimodule& x,
                                unsigned max_degree) {
  note_op("cohomology_betti");
  check_bimodule_fit(a, x);
  chain_space(x.dim(), a.dim(), max_degree + 1);
  Bimodule dual = dual_bimodule(x);
  std::vector<Index> dims;
  std::vector<std::size_t> ranks;
  for (unsigned n = 0; n <= max_degree; ++n) {
    dims.push_back(ChainSpace{x.dim(), a.dim(), n}.dim());
    // delta^n : C^n -> C^{n+1}
    ranks.push_back(rank(boundary(a, dual, n).transpose()));
  }
  return assemble_report(dims, ranks);
}

// ---------------------------------------------------------------------------
// mu and pi

namespace {

void mu_column_into(const ConvolutionAlgebra& c, unsigned n, Index flat, const Rational& scale,
                    std::vector<Entry>& out) {
  const Index d = c.dim();
  ChainSpace space{d, d, n};
  std::vector<Index> digits = space.decode(flat);
  const auto& shape = c.diagram.shape;
  Element p = c.block_of[digits[0]];
  for (unsigned j = 1; j <= n; ++j) p = shape.meet(p, c.block_of[digits[j]]);
  std::vector<std::pair<Index, Rational>> acc{{0, scale}};
  std::vector<std::pair<Index, Rational>> next;
  for (unsigned j = 0; j <= n; ++j) {
    Element e = c.block_of[digits[j]];
    const SparseVector& col = c.diagram.transition(p, e).column(c.local(digits[j]));
    next.clear();
    for (const auto& [idx, val] : acc) {
      for (const auto& t : col.entries()) {
        next.emplace_back(idx * d + c.offset[p] + t.index, val * t.value);
      }
    }
    std::swap(acc, next);
  }
  for (auto& [idx, val] : acc) out.push_back({idx, std::move(val)});
}

}  // namespace

SparseVector mu_apply(const ConvolutionAlgebra& c, unsigned n, const SparseVector& v) {
  ChainSpace space{c.dim(), c.dim(), n};
  if (v.dim() != space.dim()) throw DimensionMismatch("chain of wrong length for mu");
  std::vector<Entry> out;
  for (const auto& e : v.entries()) mu_column_into(c, n, e.index, e.value, out);
  return SparseVector::from_entries(space.dim(), std::move(out));
}

SparseMatrix mu_projection(const ConvolutionAlgebra& c, unsigned n) {
  note_op("mu_projection");
  ChainSpace space = chain_space(c.dim(), c.dim(), n);
  std::vector<SparseVector> cols;
  cols.reserve(space.dim());
  std::vector<Entry> out;
  for (Index j = 0; j < space.dim(); ++j) {
    out.clear();
    mu_column_into(c, n, j, 1, out);
    cols.push_back(SparseVector::from_entries(space.dim(), out));
  }
  return SparseMatrix::from_columns(space.dim(), std::move(cols));
}

SparseMatrix pi_projection(const ConvolutionAlgebra& c, unsigned n) {
  return SparseMatrix::identity(ChainSpace{c.dim(), c.dim(), n}.dim()) - mu_projection(c, n);
}

std::vector<Index> diag_subcomplex_betti(const ConvolutionAlgebra& c, unsigned max_degree) {
  note_op("diag_subcomplex_betti");
  std::vector<Index> total(max_degree + 1, 0);
  for (const auto& a : c.diagram.algebras) {
    auto b = betti(a, regular_bimodule(a), max_degree).betti();
    for (unsigned n = 0; n <= max_degree; ++n) total[n] += b[n];
  }
  return total;
}

DisintegrationVerdict disintegration_check(const ConvolutionAlgebra& c, unsigned max_degree) {
  note_op("disintegration_check");
  DisintegrationVerdict v;
  v.full = betti(c.algebra, regular_bimodule(c.algebra), max_degree).betti();
  v.diagonal = diag_subcomplex_betti(c, max_degree);
  v.pass = v.full == v.diagonal;
  return v;
}

// ---------------------------------------------------------------------------
// Normalised chains

KAction shape_action(const ConvolutionAlgebra& c) {
  KAction k;
  k.k_dim = c.diagram.shape.size();
  for (Element e = 0; e < k.k_dim; ++e) {
    SparseMatrix act = l1L_action_matrix(c, e);
    k.alg_left.push_back(act);
    k.alg_right.push_back(act);
    k.coeff_left.push_back(act);
    k.coeff_right.push_back(act);
  }
  return k;
}

KAction scalar_action(const AlgebraPresentation& a, const Bimodule& m) {
  KAction k;
  k.k_dim = 1;
  k.alg_left = k.alg_right = {SparseMatrix::identity(a.dim())};
  k.coeff_left = k.coeff_right = {SparseMatrix::identity(m.dim())};
  return k;
}

SubspaceBasis normalized_subspace(const AlgebraPresentation& a, const Bimodule& m,
                                  const KAction& k, unsigned n) {
  note_op("normalized_subspace");
  check_bimodule_fit(a, m);
  ChainSpace space = chain_space(m.dim(), a.dim(), n);
  std::vector<SparseVector> gens;
  std::vector<Entry> out;
  auto flush = [&]() {
    SparseVector v = SparseVector::from_entries(space.dim(), out);
    out.clear();
    if (!v.is_zero()) gens.push_back(std::move(v));
  };
  for (Index flat = 0; flat < space.dim(); ++flat) {
    std::vector<Index> digits = space.decode(flat);
    const Index x = digits[0];
    for (Index c = 0; c < k.k_dim; ++c) {
      if (n == 0) {
        // x c - c x
        emit_replaced(space, digits, 0, k.coeff_right[c].column(x), 1, out);
        emit_replaced(space, digits, 0, k.coeff_left[c].column(x), -1, out);
        flush();
        continue;
      }
      // x c (x) a_1 ... - x (x) c a_1 ...
      emit_replaced(space, digits, 0, k.coeff_right[c].column(x), 1, out);
      emit_replaced(space, digits, 1, k.alg_left[c].column(digits[1]), -1, out);
      flush();
      // ... a_j c (x) a_{j+1} ... - ... a_j (x) c a_{j+1} ...
      for (unsigned j = 1; j < n; ++j) {
        emit_replaced(space, digits, j, k.alg_right[c].column(digits[j]), 1, out);
        emit_replaced(space, digits, j + 1, k.alg_left[c].column(digits[j + 1]), -1, out);
        flush();
      }
      // x (x) ... a_n c - c x (x) ...
      emit_replaced(space, digits, n, k.alg_right[c].column(digits[n]), 1, out);
      emit_replaced(space, digits, 0, k.coeff_left[c].column(x), -1, out);
      flush();
    }
  }
  return SubspaceBasis::from_spanning(space.dim(), gens);
}

HomologyReport relative_betti(const AlgebraPresentation& a, const Bimodule& m, const KAction& k,
                              unsigned max_degree) {
  note_op("relative_betti");
  chain_space(m.dim(), a.dim(), max_degree + 1);
  std::vector<Index> dims;
  std::vector<std::size_t> ranks;
  for (unsigned n = 0; n <= max_degree; ++n) {
    SubspaceBasis nn = normalized_subspace(a, m, k, n);
    ChainSpace space{m.dim(), a.dim(), n};
    EchelonReducer red(space.dim());
    for (Index i = 0; i < nn.dim(); ++i) red.insert(nn.vectors()[i], i);
    SparseMatrix d = boundary(a, m, n);
    for (Index j = 0; j < d.cols() && red.rank() < space.dim(); ++j) red.insert(d.column(j), j);
    dims.push_back(space.dim() - nn.dim());
    ranks.push_back(red.rank() - nn.dim());
  }
  return assemble_report(dims, ranks);
}

// ---------------------------------------------------------------------------
// Diagonals

std::optional<SparseVector> find_diagonal(const AlgebraPresentation& k) {
  note_op("find_diagonal");
  const Index d = k.dim();
  const Index d2 = d * d;
  auto unit = k.find_unit();
  // Rows: centrality for every x (d * d2), then the identity conditions.
  const Index central_rows = d * d2;
  const Index rows = central_rows + (unit ? d : 2 * d * d);
  std::vector<SparseVector> cols;
  cols.reserve(d2);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      std::vector<Entry> entries;
      for (Index x = 0; x < d; ++x) {
        for (const auto& e : k.product(x, i).entries()) {
          entries.push_back({x * d2 + e.index * d + j, e.value});
        }
        for (const auto& e : k.product(j, x).entries()) {
          entries.push_back({x * d2 + i * d + e.index, -e.value});
        }
      }
      const SparseVector& bij = k.product(i, j);
      if (unit) {
        for (const auto& e : bij.entries()) entries.push_back({central_rows + e.index, e.value});
      } else {
        for (Index x = 0; x < d; ++x) {
          SparseVector left = k.multiply(SparseVector::unit(d, x), bij);
          SparseVector right = k.multiply(bij, SparseVector::unit(d, x));
          for (const auto& e : left.entries()) {
            entries.push_back({central_rows + x * d + e.index, e.value});
          }
          for (const auto& e : right.entries()) {
            entries.push_back({central_rows + d2 + x * d + e.index, e.value});
          }
        }
      }
      cols.push_back(SparseVector::from_entries(rows, std::move(entries)));
    }
  }
  std::vector<Entry> rhs;
  if (unit) {
    for (const auto& e : unit->entries()) rhs.push_back({central_rows + e.index, e.value});
  } else {
    for (Index x = 0; x < d; ++x) {
      rhs.push_back({central_rows + x * d + x, 1});
      rhs.push_back({central_rows + d2 + x * d + x, 1});
    }
  }
  auto m = SparseMatrix::from_columns(rows, std::move(cols));
  return solve_particular(m, SparseVector::from_entries(rows, std::move(rhs)));
}

DiagonalCheck check_diagonal(const AlgebraPresentation& k, const SparseVector& delta) {
  const Index d = k.dim();
  if (delta.dim() != d * d) throw DimensionMismatch("diagonal of wrong length");
  DiagonalCheck out;
  out.central = true;
  for (Index x = 0; x < d && out.central; ++x) {
    std::vector<Entry> left, right;
    for (const auto& e : delta.entries()) {
      Index i = e.index / d, j = e.index % d;
      for (const auto& t : k.product(x, i).entries()) left.push_back({t.index * d + j, e.value * t.value});
      for (const auto& t : k.product(j, x).entries()) right.push_back({i * d + t.index, e.value * t.value});
    }
    out.central = SparseVector::from_entries(d * d, left) == SparseVector::from_entries(d * d, right);
  }
  std::vector<Entry> p;
  for (const auto& e : delta.entries()) {
    for (const auto& t : k.product(e.index / d, e.index % d).entries()) {
      p.push_back({t.index, e.value * t.value});
    }
  }
  SparseVector pd = SparseVector::from_entries(d, std::move(p));
  out.identity = true;
  for (Index x = 0; x < d; ++x) {
    SparseVector bx = SparseVector::unit(d, x);
    if (k.multiply(bx, pd) != bx || k.multiply(pd, bx) != bx) out.identity = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Homotopies

std::optional<SparseMatrix> solve_homotopy(const SparseMatrix& d_n, const SparseMatrix& target_n,
                                           const SparseMatrix* s_prev,
                                           const SparseMatrix* d_prev) {
  note_op("solve_homotopy");
  if (target_n.rows() != d_n.rows()) throw DimensionMismatch("target does not land in C_n");
  SparseMatrix rhs = target_n;
  if (s_prev != nullptr && d_prev != nullptr) rhs = rhs - (*s_prev) * (*d_prev);
  EchelonSolver solver(d_n);
  SparseMatrix s(d_n.cols(), rhs.cols());
  for (Index j = 0; j < rhs.cols(); ++j) {
    auto x = solver.solve(rhs.column(j));
    if (!x) return std::nullopt;
    s.set_column(j, std::move(*x));
  }
  return s;
}

std::optional<GradedLinearMap> solve_homotopy_family(const std::vector<SparseMatrix>& d,
                                                     const GradedLinearMap& target,
                                                     unsigned max_degree) {
  GradedLinearMap s;
  s.shift = 1;
  for (unsigned n = 0; n <= max_degree; ++n) {
    auto sn = n == 0 ? solve_homotopy(d.at(0), target[0], nullptr, nullptr)
                     : solve_homotopy(d.at(n), target[n], &s.maps[n - 1], &d.at(n - 1));
    if (!sn) return std::nullopt;
    s.maps.push_back(std::move(*sn));
  }
  return s;
}

GradedLinearMap combine_homotopy(const GradedLinearMap& lambda, const GradedLinearMap& alpha,
                                 const GradedLinearMap& t, const std::vector<SparseMatrix>& d,
                                 unsigned max_degree) {
  note_op("combine_homotopy");
  if (lambda.size() < max_degree + 2 || alpha.size() < max_degree + 2 ||
      t.size() < max_degree + 1 || d.size() < max_degree + 1) {
    throw HypothesisFailure("not enough degrees supplied");
  }
  auto identity = [](const SparseMatrix& m) { return SparseMatrix::identity(m.rows()); };
  for (unsigned n = 0; n <= max_degree; ++n) {
    if (lambda[n] * d[n] != d[n] * lambda[n + 1]) {
      throw HypothesisFailure("lambda is not a chain map in degree " + std::to_string(n));
    }
  }
  for (unsigned n = 0; n <= max_degree + 1; ++n) {
    if (lambda[n] * alpha[n] != alpha[n]) {
      throw HypothesisFailure("lambda alpha != alpha in degree " + std::to_string(n));
    }
  }
  for (unsigned n = 0; n <= max_degree; ++n) {
    SparseMatrix lhs = d[n] * t[n];
    if (n > 0) lhs = lhs + t[n - 1] * d[n - 1];
    if (lhs != identity(alpha[n]) - alpha[n]) {
      throw HypothesisFailure("t is not a homotopy from id to alpha in degree " +
                              std::to_string(n));
    }
  }
  GradedLinearMap s;
  s.shift = 1;
  for (unsigned n = 0; n <= max_degree; ++n) {
    s.maps.push_back((identity(lambda[n + 1]) - lambda[n + 1]) * t[n]);
  }
  for (unsigned n = 0; n <= max_degree; ++n) {
    SparseMatrix lhs = d[n] * s[n];
    if (n > 0) lhs = lhs + s[n - 1] * d[n - 1];
    if (lhs != identity(lambda[n]) - lambda[n]) {
      throw HypothesisFailure("combined map fails the homotopy identity in degree " +
                              std::to_string(n));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Transfer

SparseVector transfer_apply(const SemilatticeHom& alpha, const ConvolutionAlgebra& source,
                            const ConvolutionAlgebra& target, unsigned n, const SparseVector& v) {
  ChainSpace src{source.dim(), source.dim(), n};
  ChainSpace tgt{target.dim(), target.dim(), n};
  if (v.dim() != src.dim()) throw DimensionMismatch("chain of wrong length for transfer");
  std::vector<Index> image(source.dim());
  for (Index g = 0; g < source.dim(); ++g) {
    image[g] = target.global(alpha(source.block_of[g]), source.local(g));
  }
  std::vector<Entry> out;
  out.reserve(v.nnz());
  for (const auto& e : v.entries()) {
    std::vector<Index> digits = src.decode(e.index);
    for (auto& g : digits) g = image[g];
    out.push_back({tgt.encode(digits), e.value});
  }
  return SparseVector::from_entries(tgt.dim(), std::move(out));
}

SparseMatrix transfer_chain(const SemilatticeHom& alpha, const ConvolutionAlgebra& source,
                            const ConvolutionAlgebra& target, unsigned n) {
  note_op("transfer_chain");
  ChainSpace src = chain_space(source.dim(), source.dim(), n);
  ChainSpace tgt = chain_space(target.dim(), target.dim(), n);
  std::vector<SparseVector> cols;
  cols.reserve(src.dim());
  for (Index j = 0; j < src.dim(); ++j) {
    cols.push_back(transfer_apply(alpha, source, target, n, SparseVector::unit(src.dim(), j)));
  }
  return SparseMatrix::from_columns(tgt.dim(), std::move(cols));
}

// ---------------------------------------------------------------------------
// Splitting family

struct SigmaEngine::Impl {
  struct Context {
    ConvolutionAlgebra conv;
    Bimodule reg;
    std::vector<Element> to_base;  // shape element -> element of the base L
    std::map<std::pair<unsigned, Index>, SparseVector> sigma_cols;
  };

  ConvolutionAlgebra base;
  Context top;
  // Free contexts keyed by the data of the pulled-back diagram, so that
  // evaluations giving equal diagrams share one context and one psi.
  std::map<std::string, std::unique_ptr<Context>> contexts;
  std::map<std::vector<Element>, Context*> context_of_gamma;
  std::map<std::pair<const Context*, std::vector<Index>>, SparseVector> psi_memo;
  // Recently used d_k solvers; kept small because they can be large.
  std::list<std::pair<std::pair<const Context*, unsigned>, std::unique_ptr<LazyEchelonSolver>>> solvers;
  static constexpr std::size_t kSolverCapacity = 3;
  Stats stats;

  explicit Impl(ConvolutionAlgebra c) : base(std::move(c)) {
    top.conv = base;
    top.reg = regular_bimodule(base.algebra);
    for (Element e = 0; e < base.diagram.shape.size(); ++e) top.to_base.push_back(e);
  }

  static std::string diagram_key(const SemilatticeDiagram& d) {
    std::string key = std::to_string(d.shape.size()) + ";";
    auto put_vec = [&key](const SparseVector& v) {
      for (const auto& e : v.entries()) key += std::to_string(e.index) + ":" + e.value.get_str() + ",";
      key += "|";
    };
    for (const auto& a : d.algebras) {
      key += "A" + std::to_string(a.dim()) + ";";
      for (Index i = 0; i < a.dim(); ++i)
        for (Index j = 0; j < a.dim(); ++j) put_vec(a.product(i, j));
    }
    for (const auto& t : d.transitions) {
      key += "T" + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + ";";
      for (Index j = 0; j < t.cols(); ++j) put_vec(t.column(j));
    }
    return key;
  }

  Context& context(const std::vector<Element>& gamma) {
    auto it = context_of_gamma.find(gamma);
    if (it != context_of_gamma.end()) return *it->second;
    unsigned gens = 0;
    while (((1u << gens) - 1) < gamma.size()) ++gens;
    auto f = free_semilattice(gens);
    auto alpha = make_semilattice_hom(f, base.diagram.shape, gamma);
    SemilatticeDiagram pulled = pullback(alpha, base.diagram);
    std::string key = diagram_key(pulled);
    auto found = contexts.find(key);
    if (found == contexts.end()) {
      auto ctx = std::make_unique<Context>();
      ctx->conv = build_convolution(pulled);
      ctx->reg = regular_bimodule(ctx->conv.algebra);
      ctx->to_base = gamma;
      ++stats.contexts;
      found = contexts.emplace(std::move(key), std::move(ctx)).first;
    }
    context_of_gamma.emplace(gamma, found->second.get());
    return *found->second;
  }

  LazyEchelonSolver& solver(const Context& ctx, unsigned k) {
    auto key = std::make_pair(&ctx, k);
    for (auto it = solvers.begin(); it != solvers.end(); ++it) {
      if (it->first == key) {
        solvers.splice(solvers.begin(), solvers, it);
        return *solvers.front().second;
      }
    }
    ++stats.solves;
    const Index d = ctx.conv.dim();
    ChainSpace src = chain_space(d, d, k + 1);
    auto s = std::make_unique<LazyEchelonSolver>(
        ChainSpace{d, d, k}.dim(), src.dim(),
        [&ctx, k](Index j) { return boundary_column(ctx.conv.algebra, ctx.reg, k, j); });
    solvers.emplace_front(key, std::move(s));
    if (solvers.size() > kSolverCapacity) solvers.pop_back();
    return *solvers.front().second;
  }

  SparseVector pi_apply(const Context& ctx, unsigned k, const SparseVector& v) {
    return v - mu_apply(ctx.conv, k, v);
  }

  SparseVector sigma_apply(Context& ctx, unsigned k, const SparseVector& v) {
    ChainSpace out{ctx.conv.dim(), ctx.conv.dim(), k + 1};
    SparseVector acc(out.dim());
    if (k == 0) return acc;
    for (const auto& e : v.entries()) acc.add_scaled(sigma_column(ctx, k, e.index), e.value);
    return acc;
  }

  // psi on the free context gamma over free(k + 1), applied to the tuple
  // with a_j in the block of generator j.
  const SparseVector& psi(const std::vector<Element>& gamma, const std::vector<Index>& locals) {
    Context& ctx = context(gamma);
    auto key = std::make_pair(static_cast<const Context*>(&ctx), locals);
    auto it = psi_memo.find(key);
    if (it != psi_memo.end()) {
      ++stats.psi_hits;
      return it->second;
    }
    const unsigned k = static_cast<unsigned>(locals.size()) - 1;
    const Index d = ctx.conv.dim();
    ChainSpace space = chain_space(d, d, k);
    std::vector<Index> digits(k + 1);
    for (unsigned j = 0; j <= k; ++j) {
      Element generator = (1u << j) - 1;  // the singleton {j + 1}
      digits[j] = ctx.conv.global(generator, locals[j]);
    }
    Index flat = space.encode(digits);
    SparseVector v = SparseVector::unit(space.dim(), flat);
    SparseVector w = pi_apply(ctx, k, v);
    if (k >= 2) {
      SparseVector dv = boundary_column(ctx.conv.algebra, ctx.reg, k - 1, flat);
      w = w - sigma_apply(ctx, k - 1, dv);
    }
    chain_space(d, d, k + 1);
    if (w.is_zero()) {
      return psi_memo.emplace(std::move(key), SparseVector(ChainSpace{d, d, k + 1}.dim())).first->second;
    }
    auto y = solver(ctx, k).solve(w);
    if (!y) {
      std::string tuple;
      for (Element g : gamma) tuple += (tuple.empty() ? "" : ",") + base.diagram.shape.label(g);
      throw FibreSolveFailure("free-case solve failed in degree " + std::to_string(k) +
                              " for the evaluation (" + tuple + ")");
    }
    ++stats.psi_columns;
    SparseVector result = pi_apply(ctx, k + 1, *y);
    return psi_memo.emplace(std::move(key), std::move(result)).first->second;
  }

  const SparseVector& sigma_column(Context& ctx, unsigned n, Index col) {
    auto key = std::make_pair(n, col);
    auto it = ctx.sigma_cols.find(key);
    if (it != ctx.sigma_cols.end()) return it->second;
    const Index d = ctx.conv.dim();
    ChainSpace space{d, d, n};
    ChainSpace out = chain_space(d, d, n + 1);
    SparseVector result(out.dim());
    if (n >= 1) {
      std::vector<Index> digits = space.decode(col);
      std::vector<Element> blocks;
      std::vector<Index> locals;
      for (Index g : digits) {
        blocks.push_back(ctx.conv.block_of[g]);
        locals.push_back(ctx.conv.local(g));
      }
      const auto& shape = ctx.conv.diagram.shape;
      auto ev = evaluation_hom(shape, blocks);
      std::vector<Element> gamma;
      for (Element s : ev.map) gamma.push_back(ctx.to_base[s]);
      const SparseVector& p = psi(gamma, locals);
      const Context& fctx = context(gamma);
      result = transfer_apply(ev, fctx.conv, ctx.conv, n + 1, p);
    }
    return ctx.sigma_cols.emplace(key, std::move(result)).first->second;
  }
};

SigmaEngine::SigmaEngine(ConvolutionAlgebra c) : impl_(std::make_unique<Impl>(std::move(c))) {}
SigmaEngine::~SigmaEngine() = default;

const ConvolutionAlgebra& SigmaEngine::algebra() const { return impl_->base; }

SparseVector SigmaEngine::sigma_column(unsigned n, Index col) {
  return impl_->sigma_column(impl_->top, n, col);
}

SparseMatrix SigmaEngine::sigma(unsigned n) {
  const Index d = impl_->base.dim();
  ChainSpace src = chain_space(d, d, n);
  ChainSpace tgt = chain_space(d, d, n + 1);
  // Visit columns grouped by block tuple so one free context is finished
  // before the next one starts.
  std::vector<std::pair<std::vector<Element>, Index>> order;
  for (Index j = 0; j < src.dim(); ++j) {
    std::vector<Element> blocks;
    for (Index g : src.decode(j)) blocks.push_back(impl_->base.block_of[g]);
    order.emplace_back(std::move(blocks), j);
  }
  std::stable_sort(order.begin(), order.end());
  SparseMatrix m(tgt.dim(), src.dim());
  for (const auto& [blocks, j] : order) m.set_column(j, sigma_column(n, j));
  return m;
}

SigmaEngine::Stats SigmaEngine::stats() const { return impl_->stats; }

GradedLinearMap sigma_family(const ConvolutionAlgebra& c, unsigned max_degree) {
  note_op("sigma_family");
  SigmaEngine engine(c);
  GradedLinearMap s;
  s.shift = 1;
  for (unsigned n = 0; n <= max_degree; ++n) s.maps.push_back(engine.sigma(n));
  return s;
}

GradedLinearMap sigma_direct(const ConvolutionAlgebra& c, unsigned max_degree) {
  const Index d = c.dim();
  Bimodule reg = regular_bimodule(c.algebra);
  GradedLinearMap s;
  s.shift = 1;
  chain_space(d, d, max_degree + 1);
  s.maps.push_back(SparseMatrix(ChainSpace{d, d, 1}.dim(), d));
  SparseMatrix d_prev = boundary(c.algebra, reg, 0);
  for (unsigned n = 1; n <= max_degree; ++n) {
    SparseMatrix d_n = boundary(c.algebra, reg, n);
    SparseMatrix rhs = pi_projection(c, n) - s.maps[n - 1] * d_prev;
    EchelonSolver solver(d_n);
    SparseMatrix sn(d_n.cols(), rhs.cols());
    for (Index j = 0; j < rhs.cols(); ++j) {
      auto y = solver.solve(rhs.column(j));
      if (!y) {
        throw FibreSolveFailure("direct solve failed in degree " + std::to_string(n));
      }
      sn.set_column(j, *y - mu_apply(c, n + 1, *y));
    }
    s.maps.push_back(std::move(sn));
    d_prev = std::move(d_n);
  }
  return s;
}

// ---------------------------------------------------------------------------

SparseMatrix rect_band_homotopy(const FiniteSemigroup& r, Element z, unsigned n) {
  note_op("rect_band_homotopy");
  const Element size = static_cast<Element>(r.size());
  for (Element a = 0; a < size; ++a) {
    if (!r.is_idempotent(a)) throw NotRectangular("element " + r.label(a) + " is not idempotent");
    for (Element b = 0; b < size; ++b) {
      for (Element c = 0; c < size; ++c) {
        if (r.product(r.product(a, b), c) != r.product(a, c)) {
          throw NotRectangular("abc != ac at (" + r.label(a) + ", " + r.label(b) + ", " +
                               r.label(c) + ")");
        }
      }
    }
  }
  if (z >= size) throw IndexOutOfRange("z is not an element of the band");
  ChainSpace src = chain_space(size, size, n);
  ChainSpace tgt = chain_space(size, size, n + 1);
  SparseMatrix s(tgt.dim(), src.dim());
  for (Index j = 0; j < src.dim(); ++j) {
    std::vector<Index> digits = src.decode(j);
    std::vector<Index> out;
    out.push_back(r.product(static_cast<Element>(digits[0]), z));
    out.push_back(r.product(z, static_cast<Element>(digits[0])));
    out.insert(out.end(), digits.begin() + 1, digits.end());
    s.set_column(j, SparseVector::unit(tgt.dim(), tgt.encode(out)));
  }
  return s;
}

}  // namespace semihoch
