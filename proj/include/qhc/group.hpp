#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qhc {

/// How a group was built.  Used by the irrep catalog; explicit tables carry
/// Kind::Explicit and get no catalog entry.
struct GroupFamily {
  enum class Kind { Cyclic, Product, Semidirect, Symmetric, Dihedral, Explicit };
  Kind kind = Kind::Explicit;
  int n = 0;                          // cyclic/symmetric/dihedral parameter
  std::vector<GroupFamily> factors;   // product: {left, right}; semidirect: {normal, acting}
  std::string action;                 // semidirect action name ("swap" or "explicit")
};

/// One cyclic factor of an abelian group: `generator` has order `order`.
struct CyclicFactor {
  int generator;
  int order;
};

/// A finite group on the dense indices 0..order-1 with 0 the identity.  The
/// element ordering is fixed here and every matrix in the library indexes
/// rows and columns by it.
class FiniteGroup {
 public:
  /// Validates the group axioms exhaustively; throws NoIdentity, NoInverse or
  /// NonAssociativeTable.  Index 0 must be the identity.
  static FiniteGroup from_table(std::vector<std::vector<int>> table,
                                std::vector<std::string> labels = {},
                                GroupFamily family = {});

  int order() const { return static_cast<int>(table_.size()); }
  int identity() const { return 0; }
  int mul(int s, int t) const { return table_[s][t]; }
  int inv(int s) const { return inverse_[s]; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  const std::vector<int>& inverses() const { return inverse_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int s) const { return labels_[s]; }
  const GroupFamily& family() const { return family_; }

  bool is_abelian() const { return abelian_; }
  int element_order(int s) const;

  /// Cyclic decomposition G = <g_1> x ... x <g_k> (empty for non-abelian
  /// groups).  Families built from cyclic factors keep their natural
  /// generators; other abelian groups are decomposed by search.
  const std::vector<CyclicFactor>& abelian_factors() const { return factors_; }
  /// Exponent vector of `s` relative to abelian_factors().
  const std::vector<int>& coordinates(int s) const { return coords_[s]; }

  bool operator==(const FiniteGroup& other) const { return table_ == other.table_; }

 private:
  void init_abelian(std::vector<CyclicFactor> natural);
  friend FiniteGroup product(const FiniteGroup&, const FiniteGroup&);
  friend FiniteGroup cyclic(int);

  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  std::vector<std::string> labels_;
  GroupFamily family_;
  bool abelian_ = false;
  std::vector<CyclicFactor> factors_;
  std::vector<std::vector<int>> coords_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Constructors for the supported descriptor families.
FiniteGroup cyclic(int n);
FiniteGroup product(const FiniteGroup& left, const FiniteGroup& right);
/// Semidirect product N x| H.  `action[h][n]` is the image of n under the
/// automorphism attached to h; it must be a homomorphism H -> Aut(N).
/// Element (n, h) has index n * |H| + h.
FiniteGroup semidirect(const FiniteGroup& normal, const FiniteGroup& acting,
                       const std::vector<std::vector<int>>& action,
                       std::string action_name = "explicit");
/// Z2 acting on K x K by swapping the two coordinates.
FiniteGroup semidirect_swap(const FiniteGroup& square_of_factor, int factor_order);
/// Symmetric group, n <= 5.  Ordering: the alternating group in lexicographic
/// one-line order, then (12) times each of those.  For n = 3 this gives
/// e, (123), (132), (12), (23), (13).
FiniteGroup symmetric(int n);
/// The permutations behind symmetric(n), in element order; perm[x] is the
/// image of point x (0-based).
std::vector<std::vector<int>> symmetric_permutations(int n);
/// Dihedral group of order 2n; element r^k s^j has index k + n*j.
FiniteGroup dihedral(int n);

struct GroupDescriptor;
using DescriptorPtr = std::shared_ptr<const GroupDescriptor>;

struct CyclicDesc { int n; };
struct ProductDesc { DescriptorPtr left, right; };
struct SemidirectDesc {
  DescriptorPtr normal, acting;
  std::string action;                         // "swap" or "explicit"
  std::vector<std::vector<int>> automorphisms;  // used when action == "explicit"
};
struct SymmetricDesc { int n; };
struct DihedralDesc { int n; };
struct ExplicitDesc {
  std::vector<std::vector<int>> table;
  std::vector<std::string> labels;
};

struct GroupDescriptor {
  std::variant<CyclicDesc, ProductDesc, SemidirectDesc, SymmetricDesc, DihedralDesc, ExplicitDesc> value;
};

FiniteGroup make_group(const GroupDescriptor& descriptor);

/// Aliases: z{n}, z2^{n}, s3, s4, s{n} (n <= 5), d{n}, d4-semidirect.
FiniteGroup group_from_alias(const std::string& alias);

/// Smallest subgroup containing `generators`, as a sorted element list.
std::vector<int> subgroup_generated(const FiniteGroup& g, const std::vector<int>& generators);

bool is_subgroup(const FiniteGroup& g, const std::vector<int>& elements);

/// Left cosets sH, each sorted, ordered by smallest element.
std::vector<std::vector<int>> left_cosets(const FiniteGroup& g, const std::vector<int>& subgroup);

/// Weights indexed by group element; non-negative and summing to one.
class ProbabilityMeasure {
 public:
  /// Rejects negative weights and sums off by more than 1e-9; renormalizes
  /// sums within 1e-9 of one.
  explicit ProbabilityMeasure(std::vector<double> weights);

  static ProbabilityMeasure point_mass(int order, int s);

  const std::vector<double>& weights() const { return weights_; }
  double operator[](int s) const { return weights_[s]; }
  int size() const { return static_cast<int>(weights_.size()); }
  std::vector<int> support(double cutoff = 0.0) const;

 private:
  std::vector<double> weights_;
};

ProbabilityMeasure convolve(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu, const FiniteGroup& g);
ProbabilityMeasure haar(const FiniteGroup& g);
/// mu^n, the n-fold convolution power (n >= 1).
ProbabilityMeasure convolution_power(const ProbabilityMeasure& mu, int n, const FiniteGroup& g);

/// exp(2*pi*i*turns), exact at multiples of a quarter turn.
std::complex<double> unit_root(double turns);

struct Character {
  std::vector<std::complex<double>> values;
};

/// Characters of an abelian group, ordered lexicographically in the exponent
/// vector over abelian_factors(); character index a corresponds to the element
/// whose coordinates equal a.  Throws NonAbelianGroup.
std::vector<Character> characters(const FiniteGroup& g);

}  // namespace qhc
