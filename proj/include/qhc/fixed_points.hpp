#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qhc/channel.hpp"
#include "qhc/kernels.hpp"
#include "qhc/rep.hpp"

namespace qhc {

/// Subspace of d x d matrices with a basis orthonormal for <a, b> = tr(a^* b).
class OperatorSubspace {
 public:
  OperatorSubspace(int ambient_dim, std::vector<Mat> orthonormal_basis);

  /// Orthonormal basis of span(generators), threshold 1e-9 relative.
  static OperatorSubspace span(int d, const std::vector<Mat>& generators, double tol = kRankTol);

  int ambient_dim() const { return d_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Mat>& basis() const { return basis_; }

  /// Columns vec(b_k).
  Mat columns() const;
  /// Frobenius distance from x to the subspace.
  double residual(const Mat& x) const;
  /// Mutual containment within tol.
  bool equals(const OperatorSubspace& other, double tol = kRankTol) const;

 private:
  int d_;
  std::vector<Mat> basis_;
};

/// ker(Phi^adj - id) from the d^2 x d^2 Heisenberg superoperator, threshold 1e-9.
OperatorSubspace fixed_point_space(const QuantumChannel& phi, Exec exec = Exec::Parallel);

struct HarmonicFunctions {
  /// Row-reduced basis of {f : mu * f = f}; for a finite group every entry is
  /// the indicator of a left coset of the subgroup generated by supp(mu).
  std::vector<std::vector<cplx>> basis;
  int dim() const { return static_cast<int>(basis.size()); }
};

/// Solutions of (mu * f)(s) = sum_t f(s t) mu(t) = f(s).
HarmonicFunctions harmonic_functions(const ProbabilityMeasure& mu, const FiniteGroup& g);

/// *-algebra generated by the generators and I: alternately products of all
/// basis pairs and linear closure until the dimension is stable (<= 20 rounds).
OperatorSubspace generate_algebra(int d, const std::vector<Mat>& generators, int max_rounds = 20);

struct FixReport {
  bool holds;
  int lhs_dim;
  int rhs_dim;
};

/// Fix(Theta(mu)) against the algebra generated by {M_f : f harmonic} and {l_s}.
FixReport verify_fix_theta(const ProbabilityMeasure& mu, const GroupPtr& g);

/// Fix(ThetaHat(phi)) against the algebra generated by {l_s : s in G_phi} and
/// the diagonal matrices.
FixReport verify_fix_theta_hat(const PositiveDefiniteFunction& phi);

struct AlgebraReport {
  bool verdict;
  std::string reason;                     // "ok", "missing identity", "not adjoint closed", "not product closed"
  std::optional<std::pair<int, int>> witness;  // worst basis pair (or index twice for adjoint failures)
  double residual;
};

AlgebraReport is_algebra(const OperatorSubspace& s, double tol = kRankTol);

struct AlgebraDecomposition {
  std::vector<std::pair<int, int>> blocks;  // (n_k, m_k), descending
  Mat unitary;                              // columns ordered block by block, index i*m + l inside a block
  std::uint64_t seed;                       // seed actually used for the central element
};

/// Wedderburn decomposition of a unital *-algebra: a seeded random Hermitian
/// central element splits the centre, then each block is factored through
/// minimal projections and matrix units.  Throws NotAnAlgebra.
AlgebraDecomposition structure_decomposition(const OperatorSubspace& a, std::uint64_t seed = 0);

/// Largest deviation of U^* b U from the form (+)_k M_{n_k} kron I_{m_k} over the basis.
double block_form_residual(const OperatorSubspace& a, const AlgebraDecomposition& dec);

struct CoefficientFunction {
  int irrep;
  int i, j;
  std::vector<cplx> values;  // s -> <pi(s) e_j, e_i>
};

struct PeterWeylCheck {
  bool applicable;                          // mu adapted and irreps available
  std::vector<std::pair<int, int>> predicted;  // (d_pi, d_pi) per irrep, sorted like blocks
  bool matches;
  std::vector<CoefficientFunction> coefficient_functions;
};

struct NoiselessReport {
  AlgebraDecomposition decomposition;
  std::vector<int> noiseless;  // indices of blocks with n_k > 1
  std::optional<PeterWeylCheck> peter_weyl;
};

/// Throws FixedPointsNotAlgebra when Fix(phi) is not a unital *-algebra.
NoiselessReport noiseless_subsystems(const QuantumChannel& phi, std::uint64_t seed = 0);

/// As above for Theta(mu), adding the comparison with one (d_pi, d_pi) block
/// per irrep when mu is adapted, and the coefficient-function basis.
NoiselessReport noiseless_subsystems(const ProbabilityMeasure& mu, const GroupPtr& g, std::uint64_t seed = 0);

/// Dimension of span{diagonal matrices} intersected with span{l_s}, by a joint
/// linear solve.
int diagonal_group_algebra_intersection_dim(const FiniteGroup& g);

}  // namespace qhc
