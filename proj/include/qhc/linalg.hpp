#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qhc {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kTol = 1e-10;
inline constexpr double kRankTol = 1e-9;

/// Largest singular value.
double spectral_norm(const Mat& a);

Mat kron(const Mat& a, const Mat& b);

Mat matrix_unit(int d, int row, int col);

/// Column-major vectorization, so vec(a x b) = (b^T kron a) vec(x).
Vec vec(const Mat& x);
Mat unvec(const Vec& v, int rows);

/// Orthonormal basis (as columns) of the column span of `cols`.  A singular
/// value counts when it exceeds rel_tol * max(1, largest singular value).
Mat column_span_basis(const Mat& cols, double rel_tol = kRankTol);
RMat column_span_basis(const RMat& cols, double rel_tol = kRankTol);

/// Orthonormal basis of ker(a), same threshold convention as column_span_basis.
Mat null_space(const Mat& a, double rel_tol = kRankTol);

/// Numerical rank with a threshold relative to the largest singular value.
int numerical_rank(const Mat& a, double rel_tol = kRankTol);
int numerical_rank(const RMat& a, double rel_tol = kRankTol);

/// Distance from every column of `v` to span(basis), maximum over columns.
double projection_residual(const Mat& basis, const Mat& v);

struct HermitianEigen {
  RVec values;  // ascending
  Mat vectors;
};
HermitianEigen eigh(const Mat& h);

/// Partial transpose on the second tensor factor of a (d1*d2)x(d1*d2) matrix.
Mat partial_transpose_second(const Mat& m, int d1, int d2);

bool is_hermitian(const Mat& m, double tol = kTol);

Mat outer(const Vec& a, const Vec& b);

}  // namespace qhc
