#pragma once

// Hochschild chains C_n(A, M) = M (x) A^(x)n with boundaries
// d_n : C_{n+1} -> C_n, the diagonal projection mu on convolution algebras,
// normalised chains, diagonals, homotopy solvers and the splitting family.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semihoch/algebra.hpp"
#include "semihoch/diagram.hpp"
#include "semihoch/linalg.hpp"

namespace semihoch {

inline constexpr std::size_t kDefaultResourceLimit = 5'000'000;
void set_resource_limit(std::size_t basis_tensors);
std::size_t resource_limit();

// Basis tuples (m, a_1..a_n), flat index lexicographic with m most
// significant.
struct ChainSpace {
  Index coeff_dim = 0;
  Index alg_dim = 0;
  unsigned degree = 0;

  Index dim() const;
  std::vector<Index> decode(Index flat) const;
  Index encode(const std::vector<Index>& digits) const;
};

// Throws ResourceBound when the space exceeds resource_limit().
ChainSpace chain_space(Index coeff_dim, Index alg_dim, unsigned degree);

// i-th face C_{n+1} -> C_n, 0 <= i <= n + 1.
SparseMatrix face_map(const AlgebraPresentation& a, const Bimodule& m, unsigned n, unsigned i);
SparseVector boundary_column(const AlgebraPresentation& a, const Bimodule& m, unsigned n,
                             Index col);
SparseMatrix boundary(const AlgebraPresentation& a, const Bimodule& m, unsigned n);

struct DegreeData {
  Index dim = 0;
  std::size_t rank_prev = 0;  // rank d_{n-1}
  std::size_t rank_next = 0;  // rank d_n
  Index betti = 0;
};

struct HomologyReport {
  std::vector<DegreeData> degrees;
  std::vector<Index> betti() const;
};

HomologyReport betti(const AlgebraPresentation& a, const Bimodule& m, unsigned max_degree);

// H^n(A, X) as the cohomology of the transposed complex C_*(A, X')^T.
HomologyReport cohomology_betti(const AlgebraPresentation& a, const Bimodule& x,
                                unsigned max_degree);

// mu_n on C_n(C, C) for a convolution algebra C with regular coefficients.
SparseVector mu_apply(const ConvolutionAlgebra& c, unsigned n, const SparseVector& v);
SparseMatrix mu_projection(const ConvolutionAlgebra& c, unsigned n);
SparseMatrix pi_projection(const ConvolutionAlgebra& c, unsigned n);

std::vector<Index> diag_subcomplex_betti(const ConvolutionAlgebra& c, unsigned max_degree);

struct DisintegrationVerdict {
  bool pass = false;
  std::vector<Index> full;
  std::vector<Index> diagonal;
};
DisintegrationVerdict disintegration_check(const ConvolutionAlgebra& c, unsigned max_degree);

// An algebra K acting on A and on the coefficients, basis element by basis
// element; left and right actions as matrices.
struct KAction {
  Index k_dim = 0;
  std::vector<SparseMatrix> alg_left, alg_right;
  std::vector<SparseMatrix> coeff_left, coeff_right;
};

// K = Q[shape] through the l1(L) action, regular coefficients.
KAction shape_action(const ConvolutionAlgebra& c);
// K = Q acting by the identity.
KAction scalar_action(const AlgebraPresentation& a, const Bimodule& m);

SubspaceBasis normalized_subspace(const AlgebraPresentation& a, const Bimodule& m,
                                  const KAction& k, unsigned n);
// Homology of C_*/N_*(K).
HomologyReport relative_betti(const AlgebraPresentation& a, const Bimodule& m, const KAction& k,
                              unsigned max_degree);

// Delta in K (x) K (index i * dim + j for b_i (x) b_j).
std::optional<SparseVector> find_diagonal(const AlgebraPresentation& k);
struct DiagonalCheck {
  bool central = false;
  bool identity = false;  // pi(Delta) is a two-sided identity
};
DiagonalCheck check_diagonal(const AlgebraPresentation& k, const SparseVector& delta);

// maps[n] has source degree n and target degree n + shift.
struct GradedLinearMap {
  int shift = 0;
  std::vector<SparseMatrix> maps;

  const SparseMatrix& operator[](unsigned n) const { return maps.at(n); }
  unsigned size() const { return static_cast<unsigned>(maps.size()); }
};

// s_n with d_n s_n = target_n - s_{n-1} d_{n-1}, solved column by column
// with the echelon convention. `s_prev`/`d_prev` may be null (degree 0).
std::optional<SparseMatrix> solve_homotopy(const SparseMatrix& d_n, const SparseMatrix& target_n,
                                           const SparseMatrix* s_prev,
                                           const SparseMatrix* d_prev);

// s_0..s_max for a chain map given in degrees 0..max.
std::optional<GradedLinearMap> solve_homotopy_family(const std::vector<SparseMatrix>& d,
                                                     const GradedLinearMap& target,
                                                     unsigned max_degree);

// Given a chain map lambda, a chain map alpha with lambda alpha = alpha, and t
// with d t + t d = id - alpha, returns s_n = (id - lambda_{n+1}) t_n, which
// satisfies d s + s d = id - lambda. `d[n]` is d_n. Needs lambda and alpha in
// degrees 0..max+1 and t in 0..max. Throws HypothesisFailure.
GradedLinearMap combine_homotopy(const GradedLinearMap& lambda, const GradedLinearMap& alpha,
                                 const GradedLinearMap& t, const std::vector<SparseMatrix>& d,
                                 unsigned max_degree);

// Tran^alpha_n between regular chain spaces.
SparseVector transfer_apply(const SemilatticeHom& alpha, const ConvolutionAlgebra& source,
                            const ConvolutionAlgebra& target, unsigned n, const SparseVector& v);
SparseMatrix transfer_chain(const SemilatticeHom& alpha, const ConvolutionAlgebra& source,
                            const ConvolutionAlgebra& target, unsigned n);

// The splitting family sigma_0..sigma_max of a convolution algebra, built
// through free semilattices, pullbacks and transfer.
class SigmaEngine {
 public:
  explicit SigmaEngine(ConvolutionAlgebra c);
  ~SigmaEngine();
  SigmaEngine(const SigmaEngine&) = delete;
  SigmaEngine& operator=(const SigmaEngine&) = delete;

  const ConvolutionAlgebra& algebra() const;
  // sigma_n : C_n -> C_{n+1}. Throws FibreSolveFailure.
  SparseMatrix sigma(unsigned n);
  // sigma_n applied to one basis tensor.
  SparseVector sigma_column(unsigned n, Index col);

  struct Stats {
    std::size_t contexts = 0;
    std::size_t psi_columns = 0;
    std::size_t psi_hits = 0;
    std::size_t solves = 0;
  };
  Stats stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

GradedLinearMap sigma_family(const ConvolutionAlgebra& c, unsigned max_degree);

// Independent oracle: sigma_n = pi_{n+1} P_n (pi_n - sigma_{n-1} d_{n-1}) with
// P_n the echelon solve against d_n of (L, A) itself.
GradedLinearMap sigma_direct(const ConvolutionAlgebra& c, unsigned max_degree);

// s_n(x_0 (x) ... (x) x_n) = x_0 z (x) z x_0 (x) x_1 (x) ... (x) x_n on Q[R].
// Throws NotRectangular.
SparseMatrix rect_band_homotopy(const FiniteSemigroup& r, Element z, unsigned n);

}  // namespace semihoch
