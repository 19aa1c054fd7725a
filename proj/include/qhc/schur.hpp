#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qhc/channel.hpp"
#include "qhc/kernels.hpp"
#include "qhc/rep.hpp"

namespace qhc {

/// PSD matrix with unit diagonal, factored as A = X X^*.  Row j of X is the
/// conjugate of the vector xi_j, so A[j, k] = <xi_k, xi_j> = xi_j^* xi_k.
struct CorrelationMatrix {
  Mat matrix;
  int rank;
  Mat factor;  // d x rank

  /// Validates Hermitian, min eigenvalue >= -1e-10 and unit diagonal within
  /// 1e-12 (NotPositiveDefinite); factors through the eigendecomposition.
  static CorrelationMatrix from_matrix(const Mat& a);

  int dim() const { return static_cast<int>(matrix.rows()); }
  /// xi_j as a column vector of length rank.
  Vec xi(int j) const { return factor.row(j).adjoint(); }
};

/// C_phi[s, t] = phi(s t^-1), factored through gns(phi) so that xi_s = pi(s)^* xi.
CorrelationMatrix correlation_matrix(const PositiveDefiniteFunction& phi);

struct ExtremeReport {
  bool verdict;
  int span_dim;
  int rank;
};

/// Real dimension of span{xi_j xi_j^*} inside the r^2-dimensional space of
/// Hermitian r x r matrices; extreme iff it equals r^2.
ExtremeReport is_extreme_correlation(const CorrelationMatrix& a);

/// Generalized Gell-Mann matrices for su(r): symmetric (j<k), antisymmetric
/// (j<k), then diagonal, normalized to tr(s_a s_b) = 2 delta_ab.  For r = 2
/// this is (X, Y, Z).
std::vector<Mat> gell_mann_basis(int r);

struct BlochOrbit {
  int rank;
  std::vector<RVec> vectors;
  std::vector<Mat> generators;
};

/// v_j[k] = tr(xi_j xi_j^* sigma_k).
BlochOrbit bloch_vectors(const CorrelationMatrix& a);

/// (1/r) I + (1/2) v . sigma.
Mat bloch_state(const BlochOrbit& orbit, const RVec& v);

/// Rank of the centred point matrix (threshold 1e-9 relative).  Throws EmptyInput.
int affine_span_dim(const std::vector<RVec>& vectors);

struct MaximallyExtremeReport {
  bool verdict;          // extreme with rank >= 2
  bool extreme_in_bis;   // the plain extremality test, true for characters too
  int rank;
  int span_dim;
  bool rank_at_least_two;
  bool non_real;
  bool aqbc_violation;   // extreme, rank >= 2 and non-real
};

MaximallyExtremeReport is_maximally_extreme(const PositiveDefiniteFunction& phi);

struct DichotomyResult {
  enum class Kind { Extreme, RandomUnitary } kind;
  int affine_dim;
  RVec normal;                      // plane normal (RandomUnitary only)
  std::array<double, 2> weights{};  // |<xi_1, e_k>|^2
  std::array<Mat, 2> unitaries;     // diagonal unitaries M_1, M_2
  double residual = 0.0;            // max over matrix units of |S_A(x) - sum w M x M^*|
};

/// Rank-2 dichotomy: Extreme when the Bloch orbit spans R^3 affinely, otherwise
/// an explicit two-term random-unitary decomposition.  Throws RankNotTwo.
DichotomyResult dichotomy_decompose(const CorrelationMatrix& a);

/// Random-unitary channel sum_k w_k M_k x M_k^* from a decomposition.
QuantumChannel random_unitary_channel(const DichotomyResult& d);

struct AqbcConfig {
  std::uint64_t seed = 0;
  int n_samples = 1000;
  bool optimize = false;
  /// Evaluated first, as sample indices 0..k-1.
  std::vector<Vec> injected;
  Exec exec = Exec::Parallel;
};

struct AqbcSample {
  int index;
  Vec xi;
  bool certified;
  bool refined;        // certified only after local refinement
  int rank;
  int span_dim;
  int affine_dim;
  std::string reason;  // "certified", "real correlation matrix", "rank one", "not extreme"
};

struct AqbcResult {
  std::vector<AqbcSample> samples;  // every sample, in index order
  std::vector<AqbcSample> certificates() const;
};

/// Samples unit vectors uniformly on the complex sphere (complex Gaussian,
/// normalized), each from its own generator seeded by (seed, index), and
/// certifies maximally extreme non-real phi = <pi(.) xi, xi>.  With
/// `optimize`, uncertified non-real samples are refined by a seeded local
/// search that maximizes the (r^2-1)-th singular value of the centred Bloch
/// matrix.  Throws RepresentationDimensionOne.
AqbcResult aqbc_search(const UnitaryRep& rep, const AqbcConfig& config);

enum class ExportFormat { Csv, Json };

/// Volume of the convex hull of 3-D points (0 when they are not affinely
/// spanning R^3).
double hull_volume(const std::vector<RVec>& points);

/// One row per vector: label, v1..vk; metadata group, rank, affine_span_dim and,
/// for rank 2, hull_volume.  CSV metadata goes in leading "# key: value" lines.
std::string export_bloch_orbit(const BlochOrbit& orbit, const std::vector<std::string>& labels,
                               const std::string& group_name, ExportFormat format);

}  // namespace qhc
