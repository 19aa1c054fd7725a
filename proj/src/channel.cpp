#include "qhc/channel.hpp"

#include <cmath>
#include <limits>

#include "qhc/error.hpp"

namespace qhc {

namespace {

constexpr double kDropWeight = 1e-14;

}  // namespace

QuantumChannel::QuantumChannel(int dim_in, int dim_out, std::vector<Mat> kraus)
    : dim_in_(dim_in), dim_out_(dim_out) {
  if (dim_in < 1 || dim_out < 1) throw Error(ErrorKind::DimensionMismatch, "channel dimensions must be positive");
  for (auto& a : kraus) {
    if (a.rows() != dim_out || a.cols() != dim_in)
      throw Error(ErrorKind::DimensionMismatch, "Kraus operator has the wrong shape");
    if (a.squaredNorm() / dim_in < kDropWeight) continue;
    kraus_.push_back(std::move(a));
  }
  if (kraus_.empty()) throw Error(ErrorKind::NotTracePreserving, "Kraus family is empty");
  Mat sum = Mat::Zero(dim_in, dim_in);
  for (const auto& a : kraus_) sum.noalias() += a.adjoint() * a;
  const double res = spectral_norm(sum - Mat::Identity(dim_in, dim_in));
  if (res > kTol)
    throw Error(ErrorKind::NotTracePreserving, "sum a^* a differs from I by " + std::to_string(res));
}

QuantumChannel QuantumChannel::adjoint() const {
  if (dim_in_ != dim_out_) throw Error(ErrorKind::DimensionMismatch, "adjoint needs a square channel");
  std::vector<Mat> adj;
  for (const auto& a : kraus_) adj.push_back(a.adjoint());
  return QuantumChannel(dim_in_, dim_out_, std::move(adj));
}

QuantumChannel identity_channel(int d) { return QuantumChannel(d, d, {Mat::Identity(d, d)}); }

Mat multiplication_operator(const std::vector<cplx>& f) {
  Mat m = Mat::Zero(f.size(), f.size());
  for (size_t i = 0; i < f.size(); ++i) m(i, i) = f[i];
  return m;
}

QuantumChannel theta(const ProbabilityMeasure& mu, const GroupPtr& g) {
  if (mu.size() != g->order()) throw Error(ErrorKind::DimensionMismatch, "measure size differs from group order");
  const int n = g->order();
  std::vector<Mat> kraus;
  for (int s = 0; s < n; ++s) {
    if (mu[s] <= 0.0) continue;
    Mat r = Mat::Zero(n, n);
    for (int t = 0; t < n; ++t) r(g->mul(t, g->inv(s)), t) = 1.0;
    kraus.push_back(std::sqrt(mu[s]) * r);
  }
  return QuantumChannel(n, n, std::move(kraus));
}

QuantumChannel theta_hat(const PositiveDefiniteFunction& phi) {
  const auto triple = gns(phi);
  const int n = phi.group().order();
  std::vector<Mat> kraus(triple.rank, Mat::Zero(n, n));
  for (int s = 0; s < n; ++s) {
    const Vec v = triple.rep(s).adjoint() * triple.xi;
    for (int i = 0; i < triple.rank; ++i) kraus[i](s, s) = std::conj(v(i));
  }
  return QuantumChannel(n, n, std::move(kraus));
}

QuantumChannel schur_channel(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  const auto eig = eigh(0.5 * (a + a.adjoint()));
  const double top = std::max(eig.values(n - 1), 0.0);
  std::vector<Mat> kraus;
  for (int k = n - 1; k >= 0; --k) {
    if (eig.values(k) <= kRankTol * top) break;
    Mat m = Mat::Zero(n, n);
    for (int s = 0; s < n; ++s) m(s, s) = std::sqrt(eig.values(k)) * eig.vectors(s, k);
    kraus.push_back(std::move(m));
  }
  return QuantumChannel(n, n, std::move(kraus));
}

QuantumChannel conditional_expectation(const GroupPtr& g, ExpectationTarget target) {
  if (target == ExpectationTarget::GroupAlgebra) return theta(haar(*g), g);
  std::vector<cplx> delta(g->order(), 0.0);
  delta[0] = 1.0;
  return theta_hat(PositiveDefiniteFunction(g, std::move(delta)));
}

QuantumChannel compose(const QuantumChannel& phi, const QuantumChannel& psi) {
  if (psi.dim_out() != phi.dim_in())
    throw Error(ErrorKind::DimensionMismatch, "cannot compose: inner output differs from outer input");
  std::vector<Mat> kraus;
  for (const auto& a : phi.kraus())
    for (const auto& b : psi.kraus()) kraus.push_back(a * b);
  return QuantumChannel(psi.dim_in(), phi.dim_out(), std::move(kraus));
}

QuantumChannel tensor(const QuantumChannel& phi, const QuantumChannel& psi) {
  std::vector<Mat> kraus;
  for (const auto& a : phi.kraus())
    for (const auto& b : psi.kraus()) kraus.push_back(kron(a, b));
  return QuantumChannel(phi.dim_in() * psi.dim_in(), phi.dim_out() * psi.dim_out(), std::move(kraus));
}

QuantumChannel complement(const QuantumChannel& phi) {
  const int n = phi.kraus_count();
  std::vector<Mat> kraus(phi.dim_out(), Mat::Zero(n, phi.dim_in()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < phi.dim_out(); ++j) kraus[j].row(i) = phi.kraus()[i].row(j);
  return QuantumChannel(phi.dim_in(), n, std::move(kraus));
}

Mat choi(const QuantumChannel& phi) {
  const int din = phi.dim_in(), dout = phi.dim_out();
  Mat j = Mat::Zero(din * dout, din * dout);
  for (const auto& a : phi.kraus()) {
    Vec w(din * dout);
    for (int s = 0; s < din; ++s)
      for (int o = 0; o < dout; ++o) w(s * dout + o) = a(o, s);
    j.noalias() += w * w.adjoint();
  }
  return j;
}

int choi_rank(const QuantumChannel& phi) { return numerical_rank(choi(phi)); }

double channel_distance(const QuantumChannel& a, const QuantumChannel& b, Exec exec) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out())
    throw Error(ErrorKind::DimensionMismatch, "channels have different shapes");
  return kernels::max_residual_on_units(
      a.dim_in(), [&](const Mat& x) { return a.apply(x); }, [&](const Mat& x) { return b.apply(x); }, exec);
}

BistochasticReport is_bistochastic(const QuantumChannel& phi, double tol) {
  Mat tp = Mat::Zero(phi.dim_in(), phi.dim_in());
  Mat un = Mat::Zero(phi.dim_out(), phi.dim_out());
  for (const auto& a : phi.kraus()) {
    tp.noalias() += a.adjoint() * a;
    un.noalias() += a * a.adjoint();
  }
  BistochasticReport r;
  r.tp_residual = spectral_norm(tp - Mat::Identity(phi.dim_in(), phi.dim_in()));
  r.unital_residual = phi.dim_in() == phi.dim_out()
                          ? spectral_norm(un - Mat::Identity(phi.dim_out(), phi.dim_out()))
                          : std::numeric_limits<double>::infinity();
  r.verdict = std::max(r.tp_residual, r.unital_residual) <= tol;
  return r;
}

std::optional<Mat> is_unitary_conjugation(const QuantumChannel& phi) {
  if (phi.dim_in() != phi.dim_out()) return std::nullopt;
  const int d = phi.dim_in();
  const Mat j = choi(phi);
  if (numerical_rank(j) != 1) return std::nullopt;
  const auto eig = eigh(j);
  const Vec w = eig.vectors.col(d * d - 1) * std::sqrt(std::max(eig.values(d * d - 1), 0.0));
  Mat u(d, d);
  for (int s = 0; s < d; ++s)
    for (int o = 0; o < d; ++o) u(o, s) = w(s * d + o);
  // Fix the global phase so the first sizeable entry is real positive.
  for (int k = 0; k < d * d; ++k) {
    const cplx z = u(k % d, k / d);
    if (std::abs(z) > 1e-8) {
      u *= std::conj(z) / std::abs(z);
      break;
    }
  }
  if (spectral_norm(u * u.adjoint() - Mat::Identity(d, d)) > kTol) return std::nullopt;
  if (channel_distance(phi, QuantumChannel(d, d, {u})) > kTol) return std::nullopt;
  return u;
}

QuantumChannel weyl_covariant(const ProbabilityMeasure& q, int d) {
  if (q.size() != d * d) throw Error(ErrorKind::DimensionMismatch, "q must live on Z_d x Z_d");
  std::vector<Mat> kraus;
  for (int s = 0; s < d; ++s) {
    Mat r = Mat::Zero(d, d);
    for (int u = 0; u < d; ++u) r(((u - s) % d + d) % d, u) = 1.0;
    for (int t = 0; t < d; ++t) {
      const double w = q[s * d + t];
      if (w <= 0.0) continue;
      Mat m = Mat::Zero(d, d);
      for (int u = 0; u < d; ++u) m(u, u) = unit_root(static_cast<double>((t * u) % d) / d);
      kraus.push_back(std::sqrt(w) * r * m);
    }
  }
  return QuantumChannel(d, d, std::move(kraus));
}

DualityReport duality_check(const ProbabilityMeasure& mu, const GroupPtr& g) {
  if (!g->is_abelian()) throw Error(ErrorKind::NonAbelianGroup, "duality needs an abelian group");
  const Mat f = fourier_matrix(*g);
  const auto th = theta(mu, g);
  const auto dual = theta_hat(fourier_of_measure(mu, *g));
  const int n = g->order();
  auto rhs = [&](const Mat& x) { return dual.apply(x); };
  DualityReport r;
  r.residual = kernels::max_residual_on_units(
      n, [&](const Mat& x) { return Mat(f * th.apply_adjoint(f.adjoint() * x * f) * f.adjoint()); }, rhs);
  r.literal_residual = kernels::max_residual_on_units(
      n, [&](const Mat& x) { return Mat(f * th.apply(f.adjoint() * x * f) * f.adjoint()); }, rhs);
  return r;
}

}  // namespace qhc
