#pragma once

#include <utility>
#include <vector>

#include "qhc/group.hpp"
#include "qhc/linalg.hpp"

namespace qhc {

/// A homomorphism s -> matrices[s] into d x d unitaries.
class UnitaryRep {
 public:
  /// Checks unitarity, matrices[e] = I and the homomorphism law for all pairs,
  /// each within 1e-10; throws InvalidRep.
  UnitaryRep(GroupPtr group, std::vector<Mat> matrices);

  const FiniteGroup& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  int dim() const { return dim_; }
  const Mat& operator()(int s) const { return matrices_[s]; }
  const std::vector<Mat>& matrices() const { return matrices_; }

  /// Trace of each matrix.
  std::vector<cplx> character() const;

 private:
  GroupPtr group_;
  int dim_;
  std::vector<Mat> matrices_;
};

/// Normalized positive definite function.  Construction enforces
/// values[e] = 1, values[s^-1] = conj(values[s]) and a positive semi-definite
/// Gram matrix [values[s t^-1]] (min eigenvalue >= -1e-10).
class PositiveDefiniteFunction {
 public:
  PositiveDefiniteFunction(GroupPtr group, std::vector<cplx> values);

  const FiniteGroup& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  const std::vector<cplx>& values() const { return values_; }
  cplx operator()(int s) const { return values_[s]; }

  /// G_phi = {s : |phi(s) - 1| <= tol}.
  std::vector<int> fixing_subgroup(double tol = kRankTol) const;
  bool is_real(double tol = kTol) const;

 private:
  GroupPtr group_;
  std::vector<cplx> values_;
};

/// Left (l_s d_t = d_{st}) and right (r_s d_t = d_{t s^-1}) regular
/// representations.  The modular factor of the right representation is 1 for
/// finite groups and is omitted.
std::pair<UnitaryRep, UnitaryRep> regular_reps(const GroupPtr& g);

/// Pairwise-inequivalent irreducible representations, sorted by dimension.
/// Supported: abelian groups, dihedral groups (also when recognised by their
/// presentation, e.g. d4-semidirect), S3 and S4.  Throws UnsupportedGroup.
std::vector<UnitaryRep> irrep_catalog(const GroupPtr& g);

/// Verifies user-supplied representations as a complete irrep list:
/// each irreducible, pairwise inequivalent and sum of d^2 equal to |G|.
std::vector<UnitaryRep> irrep_catalog(const GroupPtr& g, std::vector<UnitaryRep> supplied);

bool is_irreducible(const UnitaryRep& rep);

/// phi(s) = <pi(s) xi, xi>.  Throws NonUnitVector unless |xi| = 1 within 1e-12.
PositiveDefiniteFunction pdf_from_rep(const UnitaryRep& rep, const Vec& xi);

/// The matrix [phi(s t^-1)] over the group ordering.
Mat gram_matrix(const FiniteGroup& g, const std::vector<cplx>& phi);

struct PositivityVerdict {
  bool positive_definite;
  bool hermitian;
  double min_eigenvalue;  // of the Hermitian part of the Gram matrix
};

/// Throws NotNormalizedAtIdentity when |phi(e) - 1| > 1e-10.
PositivityVerdict check_positive_definite(const std::vector<cplx>& phi, const FiniteGroup& g);

struct GnsTriple {
  UnitaryRep rep;
  Vec xi;
  int rank;
};

/// Cyclic representation from the eigendecomposition of the Gram matrix,
/// truncated at rank threshold 1e-9 relative to the largest eigenvalue.
/// Columns of the square-root factor are pi(s)^* xi.
GnsTriple gns(const PositiveDefiniteFunction& phi);

/// F[chi, s] = conj(chi(s)) / sqrt|G|, rows in character order.
/// Throws NonAbelianGroup.
Mat fourier_matrix(const FiniteGroup& g);

/// Dual group: character index a times character index b is the character
/// whose exponent vector is a + b.
FiniteGroup dual_group(const FiniteGroup& g);

/// mu_hat(chi) = sum_s conj(chi(s)) mu(s), a positive definite function on
/// dual_group(g).
PositiveDefiniteFunction fourier_of_measure(const ProbabilityMeasure& mu, const FiniteGroup& g);

}  // namespace qhc
