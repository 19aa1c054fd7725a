#pragma once

#include <algorithm>
#include <vector>

#include "qhc/linalg.hpp"

namespace qhc {

/// Execution policy for the batch kernels.  Serial is the reference; Parallel
/// distributes independent items over OpenMP threads.  Both produce identical
/// results because every item is computed by the same code with no shared
/// accumulation.
enum class Exec { Serial, Parallel };

/// Runs f(i) for i in [0, n) and returns the results in index order.
template <class F>
auto map_indices(int n, F&& f, Exec exec = Exec::Parallel) -> std::vector<decltype(f(0))> {
  std::vector<decltype(f(0))> out(n);
  if (exec == Exec::Serial) {
    for (int i = 0; i < n; ++i) out[i] = f(i);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) out[i] = f(i);
  }
  return out;
}

namespace kernels {

/// sum_i a_i x a_i^*.
Mat apply_kraus(const std::vector<Mat>& kraus, const Mat& x);

/// sum_i a_i^* x a_i.
Mat apply_kraus_adjoint(const std::vector<Mat>& kraus, const Mat& x);

/// Matrix of x -> sum a_i x a_i^* on column-major vec coordinates; column
/// c*d_in + r is vec of the image of the matrix unit E_{rc}.
Mat superoperator(const std::vector<Mat>& kraus, Exec exec = Exec::Parallel);

/// Same for the adjoint map x -> sum a_i^* x a_i.
Mat adjoint_superoperator(const std::vector<Mat>& kraus, Exec exec = Exec::Parallel);

/// Images of every input.
std::vector<Mat> apply_batch(const std::vector<Mat>& kraus, const std::vector<Mat>& inputs,
                             Exec exec = Exec::Parallel);

/// Largest spectral-norm difference between f and g over all d x d matrix units.
template <class F, class G>
double max_residual_on_units(int d, F&& f, G&& g, Exec exec = Exec::Parallel) {
  const auto res = map_indices(
      d * d, [&](int k) { return spectral_norm(f(matrix_unit(d, k % d, k / d)) - g(matrix_unit(d, k % d, k / d))); },
      exec);
  double worst = 0.0;
  for (double r : res) worst = std::max(worst, r);
  return worst;
}

}  // namespace kernels

}  // namespace qhc
