#pragma once

// Test-side oracles and generators.  Everything here is computed directly from
// definitions and shares no code with the library beyond the value types.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qhc/channel.hpp"
#include "qhc/group.hpp"
#include "qhc/rep.hpp"

namespace qhc::test {

inline const cplx kI{0.0, 1.0};

inline GroupPtr share(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }
inline GroupPtr alias(const std::string& name) { return share(group_from_alias(name)); }

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// The six 2x2 matrices of the S3 triangle representation in the order
/// e, (123), (132), (12), (23), (13).
inline std::vector<Mat> s3_triangle() {
  const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  std::vector<Mat> m(6, Mat::Zero(2, 2));
  m[0] << 1, 0, 0, 1;
  m[1] << w, 0, 0, std::conj(w);
  m[2] << std::conj(w), 0, 0, w;
  m[3] << 0, 1, 1, 0;
  m[4] << 0, std::conj(w), w, 0;
  m[5] << 0, w, std::conj(w), 0;
  return m;
}

/// Correlation matrix of the triangle representation for xi = (i, 3)/sqrt(10).
inline Mat s3_expected_correlation() {
  const double r3 = std::sqrt(3.0);
  const cplx a{-0.5, 0.4 * r3}, b{-0.5, -0.4 * r3};
  const double c = 0.3 * r3;
  Mat m(6, 6);
  m << 1, a, b, 0, -c, c,
       b, 1, a, c, 0, -c,
       a, b, 1, -c, c, 0,
       0, c, -c, 1, b, a,
       -c, 0, c, a, 1, b,
       c, -c, 0, b, a, 1;
  return m;
}

inline Vec complex_xi() {
  Vec v(2);
  v << kI / std::sqrt(10.0), 3.0 / std::sqrt(10.0);
  return v;
}

inline Vec coplanar_xi() {
  Vec v(2);
  v << 1.0 / std::sqrt(2.0), kI / std::sqrt(2.0);
  return v;
}

inline Mat pauli_x() { Mat m(2, 2); m << 0, 1, 1, 0; return m; }
inline Mat pauli_y() { Mat m(2, 2); m << 0, -kI, kI, 0; return m; }
inline Mat pauli_z() { Mat m(2, 2); m << 1, 0, 0, -1; return m; }

inline std::vector<double> random_weights(std::mt19937_64& rng, int n, bool sparse = false) {
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution keep(0.6);
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) {
    x = (sparse && !keep(rng)) ? 0.0 : e(rng);
    sum += x;
  }
  if (sum == 0.0) {
    w[0] = 1.0;
    sum = 1.0;
  }
  for (auto& x : w) x /= sum;
  return w;
}

inline Vec random_unit(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = cplx(n(rng), n(rng));
  return v / v.norm();
}

/// Random density matrix G G^* / tr.
inline Mat random_state(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = cplx(n(rng), n(rng));
  Mat rho = g * g.adjoint();
  return rho / rho.trace();
}

/// phi(s) = <l_s v, v> = sum_t v(t) conj(v(s t)) for a random unit v.
inline std::vector<cplx> random_pdf_values(std::mt19937_64& rng, const FiniteGroup& g) {
  const Vec v = random_unit(rng, g.order());
  std::vector<cplx> phi(g.order());
  for (int s = 0; s < g.order(); ++s) {
    cplx acc = 0.0;
    for (int t = 0; t < g.order(); ++t) acc += v(t) * std::conj(v(g.mul(s, t)));
    phi[s] = acc;
  }
  return phi;
}

/// Right translation r_s delta_t = delta_{t s^-1}.
inline Mat right_translation(const FiniteGroup& g, int s) {
  Mat r = Mat::Zero(g.order(), g.order());
  for (int t = 0; t < g.order(); ++t) r(g.mul(t, g.inv(s)), t) = 1.0;
  return r;
}

/// Left translation l_s delta_t = delta_{s t}.
inline Mat left_translation(const FiniteGroup& g, int s) {
  Mat l = Mat::Zero(g.order(), g.order());
  for (int t = 0; t < g.order(); ++t) l(g.mul(s, t), t) = 1.0;
  return l;
}

/// rho -> sum_s mu(s) r_s rho r_s^*.
inline Mat theta_oracle(const FiniteGroup& g, const std::vector<double>& mu, const Mat& rho) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (int s = 0; s < g.order(); ++s) {
    const Mat r = right_translation(g, s);
    out += mu[s] * r * rho * r.adjoint();
  }
  return out;
}

/// Entrywise product with [phi(s t^-1)].
inline Mat schur_oracle(const FiniteGroup& g, const std::vector<cplx>& phi, const Mat& x) {
  Mat out(x.rows(), x.cols());
  for (int s = 0; s < g.order(); ++s)
    for (int t = 0; t < g.order(); ++t) out(s, t) = phi[g.mul(s, g.inv(t))] * x(s, t);
  return out;
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

/// Entropy of a 2x2 density matrix from its closed-form eigenvalues.
inline double qubit_entropy(const Mat& rho) {
  const double tr = rho.trace().real();
  const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
  return binary_entropy(tr / 2 + disc);
}

}  // namespace qhc::test
