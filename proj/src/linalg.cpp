#include "qhc/linalg.hpp"

#include <algorithm>

#include "qhc/error.hpp"

namespace qhc {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonAssociativeTable: return "NonAssociativeTable";
    case ErrorKind::NoIdentity: return "NoIdentity";
    case ErrorKind::NoInverse: return "NoInverse";
    case ErrorKind::UnsupportedDescriptor: return "UnsupportedDescriptor";
    case ErrorKind::EmptyGeneratorSet: return "EmptyGeneratorSet";
    case ErrorKind::NotASubgroup: return "NotASubgroup";
    case ErrorKind::NonAbelianGroup: return "NonAbelianGroup";
    case ErrorKind::InvalidMeasure: return "InvalidMeasure";
    case ErrorKind::UnsupportedGroup: return "UnsupportedGroup";
    case ErrorKind::InvalidRep: return "InvalidRep";
    case ErrorKind::NonUnitVector: return "NonUnitVector";
    case ErrorKind::NotNormalizedAtIdentity: return "NotNormalizedAtIdentity";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankNotTwo: return "RankNotTwo";
    case ErrorKind::RepresentationDimensionOne: return "RepresentationDimensionOne";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NotAState: return "NotAState";
    case ErrorKind::NotAnAlgebra: return "NotAnAlgebra";
    case ErrorKind::FixedPointsNotAlgebra: return "FixedPointsNotAlgebra";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace {

// Eigen 3.4.0's divide-and-conquer SVD can return wrong factors for matrices
// with heavily repeated singular values (permutation superoperators), so the
// one-sided Jacobi SVD is used throughout.
template <class M>
auto singular_values(const M& a) {
  Eigen::JacobiSVD<M> svd(a);
  return svd.singularValues().eval();
}

double threshold(double largest, double rel_tol) { return rel_tol * std::max(1.0, largest); }

}  // namespace

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  // sqrt of the top eigenvalue of the smaller Gram matrix; relative accuracy is kept
  const Mat gram = a.rows() <= a.cols() ? Mat(a * a.adjoint()) : Mat(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat matrix_unit(int d, int row, int col) {
  Mat e = Mat::Zero(d, d);
  e(row, col) = 1.0;
  return e;
}

Vec vec(const Mat& x) { return Eigen::Map<const Vec>(x.data(), x.size()); }

Mat unvec(const Vec& v, int rows) {
  return Eigen::Map<const Mat>(v.data(), rows, v.size() / rows);
}

Mat column_span_basis(const Mat& cols, double rel_tol) {
  if (cols.cols() == 0) return Mat(cols.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double cut = threshold(s.size() ? s(0) : 0.0, rel_tol);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

RMat column_span_basis(const RMat& cols, double rel_tol) {
  if (cols.cols() == 0) return RMat(cols.rows(), 0);
  Eigen::JacobiSVD<RMat> svd(cols, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double cut = threshold(s.size() ? s(0) : 0.0, rel_tol);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& a, double rel_tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = threshold(s.size() ? s(0) : 0.0, rel_tol);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixV().rightCols(n - r);
}

int numerical_rank(const Mat& a, double rel_tol) {
  if (a.size() == 0) return 0;
  auto s = singular_values(a);
  const double cut = threshold(s(0), rel_tol);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

int numerical_rank(const RMat& a, double rel_tol) {
  if (a.size() == 0) return 0;
  auto s = singular_values(a);
  const double cut = threshold(s(0), rel_tol);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

double projection_residual(const Mat& basis, const Mat& v) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Vec col = v.col(j);
    Vec rest = basis.cols() ? Vec(col - basis * (basis.adjoint() * col)) : col;
    worst = std::max(worst, rest.norm());
  }
  return worst;
}

HermitianEigen eigh(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

Mat partial_transpose_second(const Mat& m, int d1, int d2) {
  Mat out(m.rows(), m.cols());
  for (int i1 = 0; i1 < d1; ++i1)
    for (int j1 = 0; j1 < d1; ++j1)
      out.block(i1 * d2, j1 * d2, d2, d2) = m.block(i1 * d2, j1 * d2, d2, d2).transpose();
  return out;
}

bool is_hermitian(const Mat& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Mat outer(const Vec& a, const Vec& b) { return a * b.adjoint(); }

}  // namespace qhc
