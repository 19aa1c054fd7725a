#include "qhc/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qhc/error.hpp"

namespace qhc {

namespace {

// Incremental orthonormal basis of vectorized matrices.
class SpanBuilder {
 public:
  explicit SpanBuilder(int d) : d_(d), q_(d * d, 0) {}

  bool add(const Mat& x, double tol) {
    Vec v = vec(x);
    const double scale = std::max(1.0, v.norm());
    for (int pass = 0; pass < 2; ++pass)
      if (q_.cols() > 0) v -= q_ * (q_.adjoint() * v);
    if (v.norm() <= tol * scale) return false;
    q_.conservativeResize(Eigen::NoChange, q_.cols() + 1);
    q_.col(q_.cols() - 1) = v / v.norm();
    return true;
  }

  int size() const { return static_cast<int>(q_.cols()); }
  Mat element(int k) const { return unvec(q_.col(k), d_); }
  OperatorSubspace result() const {
    std::vector<Mat> b;
    for (int k = 0; k < size(); ++k) b.push_back(element(k));
    return OperatorSubspace(d_, std::move(b));
  }

 private:
  int d_;
  Mat q_;
};

std::vector<Mat> left_translations(const FiniteGroup& g) {
  const int n = g.order();
  std::vector<Mat> out;
  for (int s = 0; s < n; ++s) {
    Mat l = Mat::Zero(n, n);
    for (int t = 0; t < n; ++t) l(g.mul(s, t), t) = 1.0;
    out.push_back(l);
  }
  return out;
}

// Consecutive ascending eigenvalues closer than tol share a cluster.
std::vector<std::vector<int>> cluster_eigenvalues(const RVec& values, double tol) {
  std::vector<std::vector<int>> out;
  for (int i = 0; i < values.size(); ++i) {
    if (out.empty() || values(i) - values(out.back().back()) > tol) out.push_back({});
    out.back().push_back(i);
  }
  return out;
}

Mat columns_of(const Mat& vectors, const std::vector<int>& idx) {
  Mat out(vectors.rows(), idx.size());
  for (size_t k = 0; k < idx.size(); ++k) out.col(k) = vectors.col(idx[k]);
  return out;
}

cplx gaussian_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  const double re = gauss(rng);
  const double im = gauss(rng);
  return {re, im};
}

struct Block {
  int n, m;
  double eigenvalue;
  Mat columns;
};

// Factors P A P (P = w w^*) as M_n kron I_m and returns adapted columns.
std::optional<Block> factor_block(const std::vector<Mat>& algebra, const Mat& w, std::mt19937_64& rng) {
  const int rank = static_cast<int>(w.cols());
  std::vector<Mat> compressed;
  for (const auto& b : algebra) compressed.push_back(w.adjoint() * b * w);
  int dim_block = 0;
  {
    Mat cols(rank * rank, compressed.size());
    for (size_t k = 0; k < compressed.size(); ++k) cols.col(k) = vec(compressed[k]);
    dim_block = numerical_rank(cols);
  }
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim_block))));
  if (n * n != dim_block || rank % n != 0) return std::nullopt;
  const int m = rank / n;
  if (n == 1) return Block{1, m, 0.0, w};

  Mat h = Mat::Zero(rank, rank), a = Mat::Zero(rank, rank);
  for (const auto& c : compressed) {
    const cplx z = gaussian_complex(rng);
    h += z * c + std::conj(z) * c.adjoint();
    a += gaussian_complex(rng) * c;
  }
  const auto eig = eigh(h);
  const double spread = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  const auto clusters = cluster_eigenvalues(eig.values, 1e-7 * spread);
  if (static_cast<int>(clusters.size()) != n) return std::nullopt;
  for (const auto& c : clusters)
    if (static_cast<int>(c.size()) != m) return std::nullopt;

  // Order the minimal projections by descending eigenvalue.
  std::vector<Mat> q;
  for (auto it = clusters.rbegin(); it != clusters.rend(); ++it) q.push_back(columns_of(eig.vectors, *it));
  Mat cols(w.rows(), rank);
  cols.leftCols(m) = w * q[0];
  for (int i = 1; i < n; ++i) {
    const Mat t = q[i].adjoint() * a * q[0];  // m x m, |c| times a unitary
    const double c = t.norm() / std::sqrt(static_cast<double>(m));
    if (c < 1e-8) return std::nullopt;
    cols.middleCols(i * m, m) = w * (q[i] * t) / c;
  }
  return Block{n, m, 0.0, cols};
}

void rref_rows(Mat& m, double tol) {
  int lead = 0;
  const int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
  for (int r = 0; r < rows && lead < cols; ++lead) {
    int piv = r;
    for (int i = r + 1; i < rows; ++i)
      if (std::abs(m(i, lead)) > std::abs(m(piv, lead))) piv = i;
    if (std::abs(m(piv, lead)) <= tol) continue;
    m.row(r).swap(m.row(piv));
    m.row(r) /= m(r, lead);
    for (int i = 0; i < rows; ++i)
      if (i != r) m.row(i) -= m(i, lead) * m.row(r);
    ++r;
  }
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (std::abs(m(i, j)) <= tol) m(i, j) = 0.0;
}

}  // namespace

OperatorSubspace::OperatorSubspace(int ambient_dim, std::vector<Mat> orthonormal_basis)
    : d_(ambient_dim), basis_(std::move(orthonormal_basis)) {
  for (const auto& b : basis_)
    if (b.rows() != d_ || b.cols() != d_) throw Error(ErrorKind::DimensionMismatch, "basis element has the wrong size");
}

OperatorSubspace OperatorSubspace::span(int d, const std::vector<Mat>& generators, double tol) {
  if (generators.empty()) return OperatorSubspace(d, {});
  Mat cols(d * d, generators.size());
  for (size_t k = 0; k < generators.size(); ++k) cols.col(k) = vec(generators[k]);
  const Mat q = column_span_basis(cols, tol);
  std::vector<Mat> b;
  for (int k = 0; k < q.cols(); ++k) b.push_back(unvec(q.col(k), d));
  return OperatorSubspace(d, std::move(b));
}

Mat OperatorSubspace::columns() const {
  Mat c(d_ * d_, basis_.size());
  for (size_t k = 0; k < basis_.size(); ++k) c.col(k) = vec(basis_[k]);
  return c;
}

double OperatorSubspace::residual(const Mat& x) const {
  const Vec v = vec(x);
  if (basis_.empty()) return v.norm();
  const Mat q = columns();
  return (v - q * (q.adjoint() * v)).norm();
}

bool OperatorSubspace::equals(const OperatorSubspace& other, double tol) const {
  if (dim() != other.dim() || d_ != other.d_) return false;
  for (const auto& b : basis_)
    if (other.residual(b) > tol) return false;
  for (const auto& b : other.basis_)
    if (residual(b) > tol) return false;
  return true;
}

OperatorSubspace fixed_point_space(const QuantumChannel& phi, Exec exec) {
  if (phi.dim_in() != phi.dim_out()) throw Error(ErrorKind::DimensionMismatch, "fixed points need a square channel");
  const int d = phi.dim_in();
  const Mat s = phi.adjoint_superoperator(exec) - Mat::Identity(d * d, d * d);
  const Mat k = null_space(s, kRankTol);
  std::vector<Mat> b;
  for (int c = 0; c < k.cols(); ++c) b.push_back(unvec(k.col(c), d));
  return OperatorSubspace(d, std::move(b));
}

HarmonicFunctions harmonic_functions(const ProbabilityMeasure& mu, const FiniteGroup& g) {
  const int n = g.order();
  if (mu.size() != n) throw Error(ErrorKind::DimensionMismatch, "measure size differs from group order");
  Mat k = -Mat::Identity(n, n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) k(s, g.mul(s, t)) += mu[t];
  Mat rows = null_space(k, kRankTol).transpose();
  rref_rows(rows, 1e-9);
  HarmonicFunctions out;
  for (int r = 0; r < rows.rows(); ++r) {
    std::vector<cplx> f(n);
    for (int s = 0; s < n; ++s) f[s] = rows(r, s);
    out.basis.push_back(std::move(f));
  }
  return out;
}

OperatorSubspace generate_algebra(int d, const std::vector<Mat>& generators, int max_rounds) {
  SpanBuilder sb(d);
  sb.add(Mat::Identity(d, d), kRankTol);
  for (const auto& g : generators) {
    sb.add(g, kRankTol);
    sb.add(g.adjoint(), kRankTol);
  }
  for (int round = 0; round < max_rounds; ++round) {
    const int k = sb.size();
    std::vector<Mat> basis;
    for (int i = 0; i < k; ++i) basis.push_back(sb.element(i));
    bool grew = false;
    for (int i = 0; i < k && sb.size() < d * d; ++i)
      for (int j = 0; j < k && sb.size() < d * d; ++j) grew |= sb.add(basis[i] * basis[j], kRankTol);
    if (!grew) break;
  }
  return sb.result();
}

FixReport verify_fix_theta(const ProbabilityMeasure& mu, const GroupPtr& g) {
  const auto lhs = fixed_point_space(theta(mu, g));
  std::vector<Mat> gens = left_translations(*g);
  for (const auto& f : harmonic_functions(mu, *g).basis) gens.push_back(multiplication_operator(f));
  const auto rhs = generate_algebra(g->order(), gens);
  return {lhs.equals(rhs), lhs.dim(), rhs.dim()};
}

FixReport verify_fix_theta_hat(const PositiveDefiniteFunction& phi) {
  const auto& g = phi.group();
  const auto lhs = fixed_point_space(theta_hat(phi));
  const auto ls = left_translations(g);
  std::vector<Mat> gens;
  for (int s : phi.fixing_subgroup()) gens.push_back(ls[s]);
  for (int i = 0; i < g.order(); ++i) gens.push_back(matrix_unit(g.order(), i, i));
  const auto rhs = generate_algebra(g.order(), gens);
  return {lhs.equals(rhs), lhs.dim(), rhs.dim()};
}

AlgebraReport is_algebra(const OperatorSubspace& s, double tol) {
  const int d = s.ambient_dim();
  AlgebraReport r{true, "ok", std::nullopt, 0.0};
  const double id_res = s.residual(Mat::Identity(d, d));
  if (id_res > tol) return {false, "missing identity", std::nullopt, id_res};
  const auto& b = s.basis();
  for (int i = 0; i < s.dim(); ++i) {
    const double res = s.residual(b[i].adjoint());
    if (res > tol) return {false, "not adjoint closed", std::make_pair(i, i), res};
  }
  const auto residuals = map_indices(s.dim() * s.dim(), [&](int k) { return s.residual(b[k / s.dim()] * b[k % s.dim()]); });
  int worst = -1;
  for (int k = 0; k < static_cast<int>(residuals.size()); ++k)
    if (worst < 0 || residuals[k] > residuals[worst]) worst = k;
  if (worst >= 0) {
    r.residual = residuals[worst];
    r.witness = std::make_pair(worst / s.dim(), worst % s.dim());
    if (r.residual > tol) {
      r.verdict = false;
      r.reason = "not product closed";
    }
  }
  return r;
}

AlgebraDecomposition structure_decomposition(const OperatorSubspace& a, std::uint64_t seed) {
  const auto check = is_algebra(a);
  if (!check.verdict) throw Error(ErrorKind::NotAnAlgebra, "subspace is not a unital *-algebra: " + check.reason);
  const int d = a.ambient_dim();
  const auto& b = a.basis();
  const int k = a.dim();

  // Centre: coefficient vectors c with sum_i c_i [b_i, b_j] = 0 for every j.
  Mat comm(k * d * d, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) comm.block(j * d * d, i, d * d, 1) = vec(b[i] * b[j] - b[j] * b[i]);
  const Mat coeffs = null_space(comm, kRankTol);
  std::vector<Mat> centre;
  for (int c = 0; c < coeffs.cols(); ++c) {
    Mat z = Mat::Zero(d, d);
    for (int i = 0; i < k; ++i) z += coeffs(i, c) * b[i];
    centre.push_back(z);
  }
  const int nblocks = static_cast<int>(centre.size());

  for (int attempt = 0; attempt < 10; ++attempt) {
    const std::uint64_t used = seed + attempt;
    std::seed_seq seq{static_cast<std::uint32_t>(used), static_cast<std::uint32_t>(used >> 32)};
    std::mt19937_64 rng(seq);
    Mat h = Mat::Zero(d, d);
    for (const auto& z : centre) {
      const cplx c = gaussian_complex(rng);
      h += c * z + std::conj(c) * z.adjoint();
    }
    const auto eig = eigh(h);
    const double spread = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    const auto clusters = cluster_eigenvalues(eig.values, 1e-7 * spread);
    if (static_cast<int>(clusters.size()) != nblocks) continue;

    std::vector<Block> blocks;
    bool ok = true;
    for (auto it = clusters.rbegin(); it != clusters.rend() && ok; ++it) {
      auto blk = factor_block(b, columns_of(eig.vectors, *it), rng);
      if (!blk) ok = false;
      else {
        blk->eigenvalue = eig.values((*it)[0]);
        blocks.push_back(std::move(*blk));
      }
    }
    if (!ok) continue;
    std::stable_sort(blocks.begin(), blocks.end(), [](const Block& x, const Block& y) {
      return x.n != y.n ? x.n > y.n : x.m > y.m;
    });
    AlgebraDecomposition dec{{}, Mat(d, d), used};
    int col = 0;
    for (const auto& blk : blocks) {
      dec.blocks.emplace_back(blk.n, blk.m);
      dec.unitary.middleCols(col, blk.columns.cols()) = blk.columns;
      col += static_cast<int>(blk.columns.cols());
    }
    if (col != d) continue;
    if (spectral_norm(dec.unitary.adjoint() * dec.unitary - Mat::Identity(d, d)) > 1e-8) continue;
    return dec;
  }
  throw Error(ErrorKind::NumericalFailure, "could not split the algebra into blocks");
}

double block_form_residual(const OperatorSubspace& a, const AlgebraDecomposition& dec) {
  const int d = a.ambient_dim();
  double worst = 0.0;
  for (const auto& b : a.basis()) {
    const Mat c = dec.unitary.adjoint() * b * dec.unitary;
    Mat expected = Mat::Zero(d, d);
    int off = 0;
    for (const auto& [n, m] : dec.blocks) {
      Mat x(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          cplx avg = 0.0;
          for (int l = 0; l < m; ++l) avg += c(off + i * m + l, off + j * m + l);
          x(i, j) = avg / static_cast<double>(m);
        }
      expected.block(off, off, n * m, n * m) = kron(x, Mat::Identity(m, m));
      off += n * m;
    }
    worst = std::max(worst, spectral_norm(c - expected));
  }
  return worst;
}

NoiselessReport noiseless_subsystems(const QuantumChannel& phi, std::uint64_t seed) {
  const auto fix = fixed_point_space(phi);
  if (!is_algebra(fix).verdict) throw Error(ErrorKind::FixedPointsNotAlgebra, "fixed points do not form an algebra");
  NoiselessReport r;
  r.decomposition = structure_decomposition(fix, seed);
  for (size_t k = 0; k < r.decomposition.blocks.size(); ++k)
    if (r.decomposition.blocks[k].first > 1) r.noiseless.push_back(static_cast<int>(k));
  return r;
}

NoiselessReport noiseless_subsystems(const ProbabilityMeasure& mu, const GroupPtr& g, std::uint64_t seed) {
  auto r = noiseless_subsystems(theta(mu, g), seed);
  PeterWeylCheck pw{false, {}, false, {}};
  const bool adapted = static_cast<int>(subgroup_generated(*g, mu.support()).size()) == g->order();
  try {
    const auto irreps = irrep_catalog(g);
    for (size_t p = 0; p < irreps.size(); ++p) {
      const int dp = irreps[p].dim();
      pw.predicted.emplace_back(dp, dp);
      for (int i = 0; i < dp; ++i)
        for (int j = 0; j < dp; ++j) {
          CoefficientFunction cf{static_cast<int>(p), i, j, {}};
          for (int s = 0; s < g->order(); ++s) cf.values.push_back(irreps[p](s)(i, j));
          pw.coefficient_functions.push_back(std::move(cf));
        }
    }
    std::sort(pw.predicted.begin(), pw.predicted.end(), std::greater<>());
    pw.applicable = adapted;
    pw.matches = adapted && pw.predicted == r.decomposition.blocks;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnsupportedGroup) throw;
  }
  r.peter_weyl = std::move(pw);
  return r;
}

int diagonal_group_algebra_intersection_dim(const FiniteGroup& g) {
  const int n = g.order();
  const auto ls = left_translations(g);
  Mat m(n * n, 2 * n);
  for (int i = 0; i < n; ++i) m.col(i) = vec(matrix_unit(n, i, i));
  for (int s = 0; s < n; ++s) m.col(n + s) = -vec(ls[s]);
  return static_cast<int>(null_space(m, kRankTol).cols());
}

}  // namespace qhc
