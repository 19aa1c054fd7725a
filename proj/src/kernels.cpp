#include "qhc/kernels.hpp"

namespace qhc::kernels {

Mat apply_kraus(const std::vector<Mat>& kraus, const Mat& x) {
  Mat out = Mat::Zero(kraus.front().rows(), kraus.front().rows());
  for (const auto& a : kraus) out.noalias() += a * x * a.adjoint();
  return out;
}

Mat apply_kraus_adjoint(const std::vector<Mat>& kraus, const Mat& x) {
  Mat out = Mat::Zero(kraus.front().cols(), kraus.front().cols());
  for (const auto& a : kraus) out.noalias() += a.adjoint() * x * a;
  return out;
}

namespace {

// Column (r, c) of the superoperator: sum_i a[:, r] a[:, c]^*, vectorized.
Mat build_columns(const std::vector<Mat>& kraus, Exec exec) {
  const int din = static_cast<int>(kraus.front().cols());
  const int dout = static_cast<int>(kraus.front().rows());
  Mat s(dout * dout, din * din);
  auto column = [&](int k) {
    const int r = k % din, c = k / din;
    Mat img = Mat::Zero(dout, dout);
    for (const auto& a : kraus) img.noalias() += a.col(r) * a.col(c).adjoint();
    s.col(k) = vec(img);
  };
  if (exec == Exec::Serial) {
    for (int k = 0; k < din * din; ++k) column(k);
  } else {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < din * din; ++k) column(k);
  }
  return s;
}

}  // namespace

Mat superoperator(const std::vector<Mat>& kraus, Exec exec) { return build_columns(kraus, exec); }

Mat adjoint_superoperator(const std::vector<Mat>& kraus, Exec exec) {
  std::vector<Mat> adj;
  adj.reserve(kraus.size());
  for (const auto& a : kraus) adj.push_back(a.adjoint());
  return build_columns(adj, exec);
}

std::vector<Mat> apply_batch(const std::vector<Mat>& kraus, const std::vector<Mat>& inputs, Exec exec) {
  return map_indices(static_cast<int>(inputs.size()), [&](int i) { return apply_kraus(kraus, inputs[i]); }, exec);
}

}  // namespace qhc::kernels
