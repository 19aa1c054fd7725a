#pragma once

#include <optional>
#include <vector>

#include "qhc/group.hpp"
#include "qhc/kernels.hpp"
#include "qhc/linalg.hpp"
#include "qhc/rep.hpp"

namespace qhc {

/// Completely positive trace-preserving map rho -> sum a_i rho a_i^*.
class QuantumChannel {
 public:
  /// Drops Kraus operators of weight tr(a^* a)/dim_in below 1e-14 and checks
  /// sum a^* a = I within 1e-10 (NotTracePreserving).  An all-zero family is
  /// rejected the same way.
  QuantumChannel(int dim_in, int dim_out, std::vector<Mat> kraus);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const std::vector<Mat>& kraus() const { return kraus_; }
  int kraus_count() const { return static_cast<int>(kraus_.size()); }

  /// Schroedinger picture.
  Mat apply(const Mat& rho) const { return kernels::apply_kraus(kraus_, rho); }
  /// Heisenberg picture x -> sum a^* x a.
  Mat apply_adjoint(const Mat& x) const { return kernels::apply_kraus_adjoint(kraus_, x); }
  Mat superoperator(Exec exec = Exec::Parallel) const { return kernels::superoperator(kraus_, exec); }
  Mat adjoint_superoperator(Exec exec = Exec::Parallel) const {
    return kernels::adjoint_superoperator(kraus_, exec);
  }

  /// Channel with Kraus family {a_i^*} (square channels only).
  QuantumChannel adjoint() const;

 private:
  int dim_in_, dim_out_;
  std::vector<Mat> kraus_;
};

QuantumChannel identity_channel(int d);

/// Multiplication operator M_f = diag(f).
Mat multiplication_operator(const std::vector<cplx>& f);

/// Kraus family {sqrt(mu(s)) r_s : mu(s) > 0} with r_s d_t = d_{t s^-1}.
QuantumChannel theta(const ProbabilityMeasure& mu, const GroupPtr& g);

/// Kraus family {diag(X[:, i])} where X[s, i] = <e_i, pi(s)^* xi> from gns(phi);
/// acts as Schur multiplication by C_phi.
QuantumChannel theta_hat(const PositiveDefiniteFunction& phi);

/// Schur multiplier x -> a o x for a correlation matrix a, with Kraus operators
/// diag(sqrt(lambda_i) u_i) from its eigendecomposition.
QuantumChannel schur_channel(const Mat& a);

enum class ExpectationTarget { Diagonal, GroupAlgebra };

/// Diagonal: theta_hat(delta_e).  GroupAlgebra: theta(haar).
QuantumChannel conditional_expectation(const GroupPtr& g, ExpectationTarget target);

/// phi after psi: Kraus {a_i b_j}.  Throws DimensionMismatch.
QuantumChannel compose(const QuantumChannel& phi, const QuantumChannel& psi);

/// Kraus {a_i kron b_j}.
QuantumChannel tensor(const QuantumChannel& phi, const QuantumChannel& psi);

/// Complementary channel: output dimension is the Kraus count n and
/// [b_j]_{ik} = [a_i]_{jk}.
QuantumChannel complement(const QuantumChannel& phi);

/// J = sum_{s,t} E_st kron Phi(E_st) on C^{d_in} kron C^{d_out}; partial trace
/// over the output is I_{d_in}.
Mat choi(const QuantumChannel& phi);

/// Rank of the Choi matrix (= minimal Kraus count), threshold 1e-9 relative.
int choi_rank(const QuantumChannel& phi);

/// Equality of two channels on all matrix units (spectral norm).
double channel_distance(const QuantumChannel& a, const QuantumChannel& b, Exec exec = Exec::Parallel);

struct BistochasticReport {
  double unital_residual;
  double tp_residual;
  bool verdict;
};

BistochasticReport is_bistochastic(const QuantumChannel& phi, double tol = kTol);

/// Returns U when the channel is x -> U x U^* (Choi rank one), checked within
/// 1e-10 on all matrix units.
std::optional<Mat> is_unitary_conjugation(const QuantumChannel& phi);

/// Weyl-covariant channel on C^d from q on Z_d x Z_d (element (s, t) has index
/// s*d + t): Kraus {sqrt(q(s,t)) r_s M_{chi^t}}, chi^t(u) = exp(2 pi i t u / d).
QuantumChannel weyl_covariant(const ProbabilityMeasure& q, int d);

struct DualityReport {
  /// max over matrix units x of |F Theta(mu)^adj(F^* x F) F^* - ThetaHat(mu_hat)(x)|.
  double residual;
  /// Same with Theta(mu) itself in place of its adjoint; this equals the
  /// residual only when mu is symmetric (mu(s) = mu(s^-1)).
  double literal_residual;
};

/// Fourier equivalence between Theta(mu) and ThetaHat(mu_hat) on an abelian
/// group, F[chi, s] = conj(chi(s)) / sqrt|G|.  Throws NonAbelianGroup.
DualityReport duality_check(const ProbabilityMeasure& mu, const GroupPtr& g);

}  // namespace qhc
