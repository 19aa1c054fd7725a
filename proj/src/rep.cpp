#include "qhc/rep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "qhc/error.hpp"

namespace qhc {

namespace {

constexpr double kRepTol = 1e-10;

Mat one_by_one(cplx v) {
  Mat m(1, 1);
  m(0, 0) = v;
  return m;
}

std::vector<int> mixed_radix_digits(int index, const std::vector<CyclicFactor>& factors) {
  std::vector<int> d(factors.size(), 0);
  for (int k = static_cast<int>(factors.size()) - 1; k >= 0; --k) {
    d[k] = index % factors[k].order;
    index /= factors[k].order;
  }
  return d;
}

int mixed_radix_index(const std::vector<int>& d, const std::vector<CyclicFactor>& factors) {
  int index = 0;
  for (size_t k = 0; k < factors.size(); ++k) index = index * factors[k].order + d[k];
  return index;
}

// Two-dimensional irrep of S3 on a permutation of {0,1,2}, in the basis where
// (123) is diag(w, conj w) and (12) is the swap matrix.
Mat s3_two_dim(const std::vector<int>& tau) {
  const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  Mat basis(3, 2);
  const double r = 1.0 / std::sqrt(3.0);
  basis.col(0) << r, r * w * w, r * w;
  basis.col(1) << r * w * w, r, r * w;
  Mat perm = Mat::Zero(3, 3);
  for (int j = 0; j < 3; ++j) perm(tau[j], j) = 1.0;
  return basis.adjoint() * perm * basis;
}

Mat permutation_matrix(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  Mat p = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) p(sigma[j], j) = 1.0;
  return p;
}

int perm_parity(const std::vector<int>& p) {
  int inv = 0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2;
}

std::vector<UnitaryRep> abelian_catalog(const GroupPtr& g) {
  std::vector<UnitaryRep> out;
  for (const auto& chi : characters(*g)) {
    std::vector<Mat> mats;
    for (cplx v : chi.values) mats.push_back(one_by_one(v));
    out.emplace_back(g, std::move(mats));
  }
  return out;
}

struct DihedralPresentation {
  int n;
  std::vector<int> rot_exp;  // element -> a in r^a s^b
  std::vector<int> refl;     // element -> b
};

std::optional<DihedralPresentation> find_dihedral(const FiniteGroup& g) {
  if (g.order() % 2 || g.order() < 6) return std::nullopt;
  const int n = g.order() / 2;
  for (int r = 1; r < g.order(); ++r) {
    if (g.element_order(r) != n) continue;
    std::vector<int> powers(n);
    powers[0] = 0;
    for (int a = 1; a < n; ++a) powers[a] = g.mul(powers[a - 1], r);
    for (int s = 1; s < g.order(); ++s) {
      if (g.element_order(s) != 2) continue;
      if (std::find(powers.begin(), powers.end(), s) != powers.end()) continue;
      if (g.mul(g.mul(s, r), s) != g.inv(r)) continue;
      DihedralPresentation p{n, std::vector<int>(g.order(), -1), std::vector<int>(g.order(), -1)};
      for (int a = 0; a < n; ++a) {
        p.rot_exp[powers[a]] = a;
        p.refl[powers[a]] = 0;
        const int x = g.mul(powers[a], s);
        p.rot_exp[x] = a;
        p.refl[x] = 1;
      }
      return p;
    }
  }
  return std::nullopt;
}

std::vector<UnitaryRep> dihedral_catalog(const GroupPtr& g, const DihedralPresentation& p) {
  const int n = p.n;
  const int order = g->order();
  std::vector<UnitaryRep> out;
  auto one_dim = [&](int rot_sign, int refl_sign) {
    std::vector<Mat> mats(order);
    for (int x = 0; x < order; ++x) {
      double v = 1.0;
      if (rot_sign < 0 && p.rot_exp[x] % 2) v = -v;
      if (refl_sign < 0 && p.refl[x]) v = -v;
      mats[x] = one_by_one(v);
    }
    out.emplace_back(g, std::move(mats));
  };
  one_dim(1, 1);
  one_dim(1, -1);
  if (n % 2 == 0) {
    one_dim(-1, 1);
    one_dim(-1, -1);
  }
  for (int k = 1; 2 * k < n; ++k) {
    std::vector<Mat> mats(order);
    for (int x = 0; x < order; ++x) {
      Mat d = Mat::Zero(2, 2);
      const double turns = static_cast<double>((k * p.rot_exp[x]) % n) / n;
      d(0, 0) = unit_root(turns);
      d(1, 1) = unit_root(-turns);
      if (p.refl[x]) {
        Mat swap = Mat::Zero(2, 2);
        swap(0, 1) = swap(1, 0) = 1.0;
        d = d * swap;
      }
      mats[x] = d;
    }
    out.emplace_back(g, std::move(mats));
  }
  return out;
}

std::vector<UnitaryRep> symmetric_catalog(const GroupPtr& g, int n) {
  const auto perms = symmetric_permutations(n);
  const int order = g->order();
  std::vector<UnitaryRep> out;
  std::vector<Mat> triv(order), sign(order);
  for (int x = 0; x < order; ++x) {
    triv[x] = one_by_one(1.0);
    sign[x] = one_by_one(perm_parity(perms[x]) ? -1.0 : 1.0);
  }
  out.emplace_back(g, triv);
  out.emplace_back(g, sign);
  if (n == 3) {
    std::vector<Mat> two(order);
    for (int x = 0; x < order; ++x) two[x] = s3_two_dim(perms[x]);
    out.emplace_back(g, std::move(two));
    return out;
  }
  // n == 4: S4 -> S3 through the three pairings {01|23}, {02|13}, {03|12}.
  const int pairing[4][4] = {{-1, 0, 1, 2}, {0, -1, 2, 1}, {1, 2, -1, 0}, {2, 1, 0, -1}};
  std::vector<Mat> two(order), std3(order), std3_sign(order);
  Mat q = Mat::Zero(4, 3);
  q.col(0) << 1.0, -1.0, 0.0, 0.0;
  q.col(1) << 1.0, 1.0, -2.0, 0.0;
  q.col(2) << 1.0, 1.0, 1.0, -3.0;
  for (int c = 0; c < 3; ++c) q.col(c).normalize();
  for (int x = 0; x < order; ++x) {
    const auto& s = perms[x];
    std::vector<int> tau(3);
    // pairing k contains the pair {0, k+1}
    for (int k = 0; k < 3; ++k) tau[k] = pairing[s[0]][s[k + 1]];
    two[x] = s3_two_dim(tau);
    std3[x] = q.adjoint() * permutation_matrix(s) * q;
    std3_sign[x] = sign[x](0, 0) * std3[x];
  }
  out.emplace_back(g, std::move(two));
  out.emplace_back(g, std::move(std3));
  out.emplace_back(g, std::move(std3_sign));
  return out;
}

void check_complete(const FiniteGroup& g, const std::vector<UnitaryRep>& reps) {
  int sum = 0;
  for (size_t i = 0; i < reps.size(); ++i) {
    if (!is_irreducible(reps[i])) throw Error(ErrorKind::InvalidRep, "representation is reducible");
    sum += reps[i].dim() * reps[i].dim();
    const auto ci = reps[i].character();
    for (size_t j = 0; j < i; ++j) {
      const auto cj = reps[j].character();
      cplx ip = 0.0;
      for (int s = 0; s < g.order(); ++s) ip += ci[s] * std::conj(cj[s]);
      if (std::abs(ip) / g.order() > 1e-8)
        throw Error(ErrorKind::InvalidRep, "two supplied irreps are equivalent");
    }
  }
  if (sum != g.order())
    throw Error(ErrorKind::InvalidRep, "irrep dimensions do not satisfy sum d^2 = |G|");
}

}  // namespace

UnitaryRep::UnitaryRep(GroupPtr group, std::vector<Mat> matrices)
    : group_(std::move(group)), matrices_(std::move(matrices)) {
  const int n = group_->order();
  if (static_cast<int>(matrices_.size()) != n)
    throw Error(ErrorKind::InvalidRep, "need one matrix per group element");
  dim_ = static_cast<int>(matrices_[0].rows());
  if (dim_ < 1) throw Error(ErrorKind::InvalidRep, "representation dimension must be positive");
  const Mat id = Mat::Identity(dim_, dim_);
  for (const auto& m : matrices_) {
    if (m.rows() != dim_ || m.cols() != dim_)
      throw Error(ErrorKind::InvalidRep, "matrix dimensions disagree");
    if (spectral_norm(m * m.adjoint() - id) > kRepTol)
      throw Error(ErrorKind::InvalidRep, "matrix is not unitary");
  }
  if (spectral_norm(matrices_[0] - id) > kRepTol)
    throw Error(ErrorKind::InvalidRep, "identity element is not mapped to I");
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (spectral_norm(matrices_[s] * matrices_[t] - matrices_[group_->mul(s, t)]) > kRepTol)
        throw Error(ErrorKind::InvalidRep, "homomorphism law fails at (" + std::to_string(s) + "," +
                                               std::to_string(t) + ")");
}

std::vector<cplx> UnitaryRep::character() const {
  std::vector<cplx> out;
  for (const auto& m : matrices_) out.push_back(m.trace());
  return out;
}

PositiveDefiniteFunction::PositiveDefiniteFunction(GroupPtr group, std::vector<cplx> values)
    : group_(std::move(group)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != group_->order())
    throw Error(ErrorKind::DimensionMismatch, "function size differs from group order");
  const auto verdict = check_positive_definite(values_, *group_);
  if (!verdict.positive_definite)
    throw Error(ErrorKind::NotPositiveDefinite,
                verdict.hermitian ? "Gram matrix has eigenvalue " + std::to_string(verdict.min_eigenvalue)
                                  : "phi(s^-1) differs from conj(phi(s))");
}

std::vector<int> PositiveDefiniteFunction::fixing_subgroup(double tol) const {
  std::vector<int> out;
  for (int s = 0; s < group_->order(); ++s)
    if (std::abs(values_[s] - 1.0) <= tol) out.push_back(s);
  return out;
}

bool PositiveDefiniteFunction::is_real(double tol) const {
  return std::all_of(values_.begin(), values_.end(), [tol](cplx v) { return std::abs(v.imag()) <= tol; });
}

std::pair<UnitaryRep, UnitaryRep> regular_reps(const GroupPtr& g) {
  const int n = g->order();
  std::vector<Mat> left(n), right(n);
  for (int s = 0; s < n; ++s) {
    left[s] = Mat::Zero(n, n);
    right[s] = Mat::Zero(n, n);
    for (int t = 0; t < n; ++t) {
      left[s](g->mul(s, t), t) = 1.0;
      right[s](g->mul(t, g->inv(s)), t) = 1.0;
    }
  }
  return {UnitaryRep(g, std::move(left)), UnitaryRep(g, std::move(right))};
}

bool is_irreducible(const UnitaryRep& rep) {
  double norm2 = 0.0;
  for (cplx c : rep.character()) norm2 += std::norm(c);
  return std::abs(norm2 - rep.group().order()) < 1e-8;
}

std::vector<UnitaryRep> irrep_catalog(const GroupPtr& g) {
  std::vector<UnitaryRep> out;
  const auto& fam = g->family();
  if (g->is_abelian()) {
    out = abelian_catalog(g);
  } else if (fam.kind == GroupFamily::Kind::Symmetric && (fam.n == 3 || fam.n == 4)) {
    out = symmetric_catalog(g, fam.n);
  } else if (auto p = find_dihedral(*g)) {
    out = dihedral_catalog(g, *p);
  } else {
    throw Error(ErrorKind::UnsupportedGroup,
                "no built-in irreps for this group; supply representations explicitly");
  }
  std::stable_sort(out.begin(), out.end(), [](const UnitaryRep& a, const UnitaryRep& b) { return a.dim() < b.dim(); });
  check_complete(*g, out);
  return out;
}

std::vector<UnitaryRep> irrep_catalog(const GroupPtr& g, std::vector<UnitaryRep> supplied) {
  for (const auto& r : supplied)
    if (!(r.group() == *g)) throw Error(ErrorKind::InvalidRep, "representation is over a different group");
  std::stable_sort(supplied.begin(), supplied.end(),
                   [](const UnitaryRep& a, const UnitaryRep& b) { return a.dim() < b.dim(); });
  check_complete(*g, supplied);
  return supplied;
}

PositiveDefiniteFunction pdf_from_rep(const UnitaryRep& rep, const Vec& xi) {
  if (xi.size() != rep.dim()) throw Error(ErrorKind::DimensionMismatch, "xi has the wrong dimension");
  if (std::abs(xi.norm() - 1.0) > 1e-12) throw Error(ErrorKind::NonUnitVector, "xi must be a unit vector");
  std::vector<cplx> values(rep.group().order());
  for (int s = 0; s < rep.group().order(); ++s) values[s] = xi.dot(rep(s) * xi);
  values[0] = 1.0;
  return PositiveDefiniteFunction(rep.group_ptr(), std::move(values));
}

Mat gram_matrix(const FiniteGroup& g, const std::vector<cplx>& phi) {
  const int n = g.order();
  Mat c(n, n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) c(s, t) = phi[g.mul(s, g.inv(t))];
  return c;
}

PositivityVerdict check_positive_definite(const std::vector<cplx>& phi, const FiniteGroup& g) {
  if (static_cast<int>(phi.size()) != g.order())
    throw Error(ErrorKind::DimensionMismatch, "function size differs from group order");
  if (std::abs(phi[0] - 1.0) > kTol)
    throw Error(ErrorKind::NotNormalizedAtIdentity, "phi(e) must equal 1");
  const Mat c = gram_matrix(g, phi);
  const bool herm = is_hermitian(c, kTol);
  const Mat h = 0.5 * (c + c.adjoint());
  const double min_eig = eigh(h).values(0);
  return {herm && min_eig >= -kTol, herm, min_eig};
}

GnsTriple gns(const PositiveDefiniteFunction& phi) {
  const FiniteGroup& g = phi.group();
  const int n = g.order();
  const auto eig = eigh(gram_matrix(g, phi.values()));
  const double top = eig.values(n - 1);
  int rank = 0;
  for (int k = 0; k < n; ++k)
    if (eig.values(k) > kRankTol * top) ++rank;
  // Factor X = U_r Lambda_r^{1/2}, largest eigenvalues first; v_s = X^*[:, s].
  Mat x(n, rank);
  RVec lambda(rank);
  for (int k = 0; k < rank; ++k) {
    lambda(k) = eig.values(n - 1 - k);
    x.col(k) = eig.vectors.col(n - 1 - k) * std::sqrt(lambda(k));
  }
  const Mat v = x.adjoint();
  Mat pinv = x;
  for (int k = 0; k < rank; ++k) pinv.col(k) /= lambda(k);
  std::vector<Mat> mats(n);
  for (int s = 0; s < n; ++s) {
    Mat shifted(rank, n);
    for (int t = 0; t < n; ++t) shifted.col(t) = v.col(g.mul(t, s));
    // pi(s)^* maps v_t to v_{ts}
    mats[s] = (shifted * pinv).adjoint();
  }
  Vec xi = v.col(0);
  xi /= xi.norm();
  return {UnitaryRep(phi.group_ptr(), std::move(mats)), xi, rank};
}

Mat fourier_matrix(const FiniteGroup& g) {
  const auto chars = characters(g);
  const int n = g.order();
  Mat f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int a = 0; a < n; ++a)
    for (int s = 0; s < n; ++s) f(a, s) = std::conj(chars[a].values[s]) * scale;
  return f;
}

FiniteGroup dual_group(const FiniteGroup& g) {
  if (!g.is_abelian()) throw Error(ErrorKind::NonAbelianGroup, "dual group needs an abelian group");
  const auto& factors = g.abelian_factors();
  const int n = g.order();
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int a = 0; a < n; ++a) {
    const auto da = mixed_radix_digits(a, factors);
    labels[a] = "chi^" + std::to_string(a);
    for (int b = 0; b < n; ++b) {
      auto db = mixed_radix_digits(b, factors);
      for (size_t k = 0; k < factors.size(); ++k) db[k] = (da[k] + db[k]) % factors[k].order;
      table[a][b] = mixed_radix_index(db, factors);
    }
  }
  return FiniteGroup::from_table(std::move(table), std::move(labels));
}

PositiveDefiniteFunction fourier_of_measure(const ProbabilityMeasure& mu, const FiniteGroup& g) {
  if (!g.is_abelian()) throw Error(ErrorKind::NonAbelianGroup, "Fourier transform needs an abelian group");
  if (mu.size() != g.order()) throw Error(ErrorKind::DimensionMismatch, "measure size differs from group order");
  const auto chars = characters(g);
  std::vector<cplx> values(g.order(), 0.0);
  for (int a = 0; a < g.order(); ++a)
    for (int s = 0; s < g.order(); ++s) values[a] += std::conj(chars[a].values[s]) * mu[s];
  values[0] = 1.0;
  return PositiveDefiniteFunction(std::make_shared<const FiniteGroup>(dual_group(g)), std::move(values));
}

}  // namespace qhc
