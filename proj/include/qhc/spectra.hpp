#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qhc/channel.hpp"
#include "qhc/kernels.hpp"
#include "qhc/rep.hpp"

namespace qhc {

// All entropies are in bits.

/// -sum lambda log2 lambda over eigenvalues >= 1e-15.  Eigenvalues in
/// [-1e-10, 0) are clipped to zero; Hermitian, PSD and unit trace are checked
/// within 1e-10 (NotAState).
double von_neumann_entropy(const Mat& rho);

double shannon_entropy(const std::vector<double>& p);
double shannon_entropy(const ProbabilityMeasure& mu);

/// S(Phi(rho)) - S(Phi^c(rho)).  Throws DimensionMismatch.
double coherent_information(const QuantumChannel& phi, const Mat& rho);

struct CapacityResult {
  double value;                // bits
  std::vector<double> argmax;  // probability vector over group elements
  int iterations;              // of the winning restart
  double optimality_gap;       // max_s g_s - sum_s mu_s g_s at argmax
};

/// H(mu) - S(sum_s mu(s) x_s) with x_s the projection onto pi(s) xi, (pi, xi) = gns(phi).
double capacity_objective(const PositiveDefiniteFunction& phi, const std::vector<double>& mu);

struct CapacityConfig {
  std::uint64_t seed = 0;
  int random_restarts = 32;
  int max_iterations = 100000;
  double gap_tol = 1e-9;
  Exec exec = Exec::Parallel;
};

/// Maximizes capacity_objective over the simplex by exponentiated-gradient
/// ascent with backtracking, from 32 random starts, the uniform start and a
/// start near each point mass.  Best value wins, ties by restart index.
CapacityResult schur_capacity(const PositiveDefiniteFunction& phi, const CapacityConfig& config = {});

struct MoeConfig {
  std::uint64_t seed = 0;
  int restarts = 64;
  int max_iterations = 400;
  Exec exec = Exec::Parallel;
};

struct MoeResult {
  double estimate;  // upper bound on the minimum output entropy, bits
  Vec witness;      // unit input vector
  Mat witness_state;
};

/// Projected gradient descent over pure inputs, started from every basis
/// vector, the uniform vector and `restarts` seeded random vectors.
MoeResult min_output_entropy(const QuantumChannel& phi, const MoeConfig& config = {});

/// S_min(Theta(mu) o E_diag) = H(mu).
double moe_theta_restricted(const ProbabilityMeasure& mu, const FiniteGroup& g);

/// S_min(ThetaHat(phi) o E_group) = S(C_phi / |G|).
double moe_theta_hat_restricted(const PositiveDefiniteFunction& phi);

struct PptReport {
  bool verdict;
  double min_pt_eigenvalue;
};

/// Partial transpose of the Choi matrix on the output factor.
PptReport choi_ppt(const QuantumChannel& phi, double tol = kTol);

struct EbReport {
  bool entanglement_breaking;
  std::string reason;
  std::optional<double> pt_witness;  // negative partial-transpose eigenvalue, when found
};

/// ThetaHat(phi) is EB iff phi = delta_e (within 1e-12).
EbReport eb_test_theta_hat(const PositiveDefiniteFunction& phi);
/// Theta(mu) is EB iff G is abelian and mu is Haar (within 1e-12).
EbReport eb_test_theta(const ProbabilityMeasure& mu, const GroupPtr& g);

}  // namespace qhc
