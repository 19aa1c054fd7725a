#include "qhc/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qhc/error.hpp"

namespace qhc {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double entropy_of_eigenvalues(const RVec& lambda) {
  double h = 0.0;
  for (int i = 0; i < lambda.size(); ++i)
    if (lambda(i) >= 1e-15) h -= lambda(i) * std::log2(lambda(i));
  return h;
}

// Entropy without state validation, for optimizer inner loops.
double entropy_unchecked(const Mat& rho) {
  return entropy_of_eigenvalues(eigh(0.5 * (rho + rho.adjoint())).values);
}

Mat log2_psd(const Mat& rho, double floor) {
  const auto eig = eigh(0.5 * (rho + rho.adjoint()));
  RVec l(eig.values.size());
  for (int i = 0; i < l.size(); ++i) l(i) = std::log2(std::max(eig.values(i), floor));
  return eig.vectors * l.asDiagonal() * eig.vectors.adjoint();
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

struct CapacityProblem {
  int n;
  std::vector<Vec> orbit;  // pi(s) xi

  Mat state(const std::vector<double>& mu) const {
    const int r = static_cast<int>(orbit[0].size());
    Mat rho = Mat::Zero(r, r);
    for (int s = 0; s < n; ++s)
      if (mu[s] > 0) rho.noalias() += mu[s] * orbit[s] * orbit[s].adjoint();
    return rho;
  }
  double value(const std::vector<double>& mu) const { return shannon_entropy(mu) - entropy_unchecked(state(mu)); }
  std::vector<double> gradient(const std::vector<double>& mu) const {
    const Mat l = log2_psd(state(mu), 1e-300);
    std::vector<double> g(n);
    for (int s = 0; s < n; ++s) {
      const double lm = mu[s] > 0 ? std::log2(mu[s]) : -1075.0;
      g[s] = -lm + orbit[s].dot(l * orbit[s]).real();
    }
    return g;
  }
};

CapacityProblem make_problem(const PositiveDefiniteFunction& phi) {
  const auto triple = gns(phi);
  CapacityProblem p{phi.group().order(), {}};
  for (int s = 0; s < p.n; ++s) p.orbit.push_back(triple.rep(s) * triple.xi);
  return p;
}

double kkt_gap(const std::vector<double>& mu, const std::vector<double>& g) {
  double top = -std::numeric_limits<double>::infinity(), avg = 0.0;
  for (size_t s = 0; s < mu.size(); ++s) {
    top = std::max(top, g[s]);
    avg += mu[s] * g[s];
  }
  return top - avg;
}

struct Ascent {
  std::vector<double> mu;
  double value;
  double gap;
  int iterations;
};

Ascent exponentiated_gradient(const CapacityProblem& p, std::vector<double> mu, const CapacityConfig& cfg) {
  double f = p.value(mu);
  double eta = 1.0;
  int it = 0;
  double gap = 0.0;
  for (; it < cfg.max_iterations; ++it) {
    const auto g = p.gradient(mu);
    gap = kkt_gap(mu, g);
    if (gap < cfg.gap_tol) break;
    double gmax = *std::max_element(g.begin(), g.end());
    bool moved = false;
    for (int tries = 0; tries < 60; ++tries) {
      std::vector<double> next(p.n);
      double z = 0.0;
      for (int s = 0; s < p.n; ++s) {
        next[s] = mu[s] * std::exp(eta * kLn2 * (g[s] - gmax));
        z += next[s];
      }
      for (auto& v : next) v /= z;
      const double fn = p.value(next);
      if (fn >= f) {
        moved = fn > f || next != mu;
        mu = std::move(next);
        f = fn;
        eta = std::min(eta * 2.0, 1e6);
        break;
      }
      eta *= 0.5;
    }
    if (!moved) break;
  }
  gap = kkt_gap(mu, p.gradient(mu));
  return {mu, f, gap, it};
}

}  // namespace

double von_neumann_entropy(const Mat& rho) {
  if (rho.rows() != rho.cols()) throw Error(ErrorKind::NotAState, "state must be square");
  if (!is_hermitian(rho, kTol)) throw Error(ErrorKind::NotAState, "state is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > kTol) throw Error(ErrorKind::NotAState, "state does not have unit trace");
  RVec l = eigh(0.5 * (rho + rho.adjoint())).values;
  for (int i = 0; i < l.size(); ++i) {
    if (l(i) < -kTol) throw Error(ErrorKind::NotAState, "state has a negative eigenvalue");
    if (l(i) < 0) l(i) = 0;
  }
  return entropy_of_eigenvalues(l);
}

double shannon_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0) h -= v * std::log2(v);
  return h;
}

double shannon_entropy(const ProbabilityMeasure& mu) { return shannon_entropy(mu.weights()); }

double coherent_information(const QuantumChannel& phi, const Mat& rho) {
  if (rho.rows() != phi.dim_in() || rho.cols() != phi.dim_in())
    throw Error(ErrorKind::DimensionMismatch, "state dimension differs from channel input");
  return von_neumann_entropy(phi.apply(rho)) - von_neumann_entropy(complement(phi).apply(rho));
}

double capacity_objective(const PositiveDefiniteFunction& phi, const std::vector<double>& mu) {
  if (static_cast<int>(mu.size()) != phi.group().order())
    throw Error(ErrorKind::DimensionMismatch, "measure size differs from group order");
  return make_problem(phi).value(mu);
}

CapacityResult schur_capacity(const PositiveDefiniteFunction& phi, const CapacityConfig& config) {
  const auto problem = make_problem(phi);
  const int n = problem.n;
  const int starts = config.random_restarts + 1 + n;
  auto start_point = [&](int k) {
    std::vector<double> mu(n, 1.0 / n);
    if (k < config.random_restarts) {
      auto rng = make_rng(config.seed, k);
      std::exponential_distribution<double> expo(1.0);
      double z = 0.0;
      for (auto& v : mu) z += (v = expo(rng) + 1e-12);
      for (auto& v : mu) v /= z;
    } else if (k > config.random_restarts) {
      const int s = k - config.random_restarts - 1;
      for (int t = 0; t < n; ++t) mu[t] = (t == s ? 0.9 : 0.0) + 0.1 / n;
    }
    return mu;
  };
  const auto runs = map_indices(starts, [&](int k) { return exponentiated_gradient(problem, start_point(k), config); },
                                config.exec);
  int best = 0;
  for (int k = 1; k < starts; ++k)
    if (runs[k].value > runs[best].value) best = k;
  return {std::max(runs[best].value, 0.0), runs[best].mu, runs[best].iterations, runs[best].gap};
}

MoeResult min_output_entropy(const QuantumChannel& phi, const MoeConfig& config) {
  const int d = phi.dim_in();
  const int starts = d + 1 + config.restarts;
  auto start_vector = [&](int k) {
    Vec v = Vec::Zero(d);
    if (k < d) {
      v(k) = 1.0;
    } else if (k == d) {
      v.setConstant(1.0 / std::sqrt(static_cast<double>(d)));
    } else {
      auto rng = make_rng(config.seed, k);
      std::normal_distribution<double> gauss;
      for (int i = 0; i < d; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v(i) = cplx(re, im);
      }
      v.normalize();
    }
    return v;
  };
  auto value = [&](const Vec& v) { return entropy_unchecked(phi.apply(v * v.adjoint())); };
  auto descend = [&](int k) {
    Vec v = start_vector(k);
    double f = value(v);
    double eta = 0.5;
    for (int it = 0; it < config.max_iterations && f > 1e-14; ++it) {
      // dS = -tr(d rho Phi^adj(log2 sigma)), so descend along Phi^adj(log2 sigma) v.
      const Mat lg = phi.apply_adjoint(log2_psd(phi.apply(v * v.adjoint()), 1e-15));
      Vec dir = lg * v;
      dir -= v * v.dot(dir);  // tangent to the sphere
      if (dir.norm() < 1e-13) break;
      bool moved = false;
      for (int tries = 0; tries < 40; ++tries) {
        Vec next = (v + eta * dir).normalized();
        const double fn = value(next);
        if (fn < f) {
          moved = f - fn > 1e-15;
          v = next;
          f = fn;
          eta = std::min(eta * 1.5, 10.0);
          break;
        }
        eta *= 0.5;
      }
      if (!moved) break;
    }
    return std::make_pair(f, v);
  };
  const auto runs = map_indices(starts, descend, config.exec);
  int best = 0;
  for (int k = 1; k < starts; ++k)
    if (runs[k].first < runs[best].first) best = k;
  const Vec w = runs[best].second;
  return {std::max(runs[best].first, 0.0), w, w * w.adjoint()};
}

double moe_theta_restricted(const ProbabilityMeasure& mu, const FiniteGroup& g) {
  if (mu.size() != g.order()) throw Error(ErrorKind::DimensionMismatch, "measure size differs from group order");
  return shannon_entropy(mu);
}

double moe_theta_hat_restricted(const PositiveDefiniteFunction& phi) {
  const Mat c = gram_matrix(phi.group(), phi.values());
  return von_neumann_entropy(c / static_cast<double>(phi.group().order()));
}

PptReport choi_ppt(const QuantumChannel& phi, double tol) {
  const Mat pt = partial_transpose_second(choi(phi), phi.dim_in(), phi.dim_out());
  const double m = eigh(0.5 * (pt + pt.adjoint())).values(0);
  return {m >= -tol, m};
}

EbReport eb_test_theta_hat(const PositiveDefiniteFunction& phi) {
  double off = 0.0;
  for (int s = 1; s < phi.group().order(); ++s) off = std::max(off, std::abs(phi(s)));
  EbReport r;
  r.entanglement_breaking = off <= 1e-12;
  r.reason = r.entanglement_breaking ? "phi = delta_e" : "phi differs from delta_e";
  if (!r.entanglement_breaking) {
    const auto ppt = choi_ppt(theta_hat(phi));
    if (!ppt.verdict) r.pt_witness = ppt.min_pt_eigenvalue;
  }
  return r;
}

EbReport eb_test_theta(const ProbabilityMeasure& mu, const GroupPtr& g) {
  EbReport r;
  if (!g->is_abelian()) {
    r.entanglement_breaking = false;
    r.reason = "nonabelian group";
  } else {
    double dev = 0.0;
    for (int s = 0; s < g->order(); ++s) dev = std::max(dev, std::abs(mu[s] - 1.0 / g->order()));
    r.entanglement_breaking = dev <= 1e-12;
    r.reason = r.entanglement_breaking ? "abelian group with Haar measure" : "measure is not Haar";
  }
  if (!r.entanglement_breaking) {
    const auto ppt = choi_ppt(theta(mu, g));
    if (!ppt.verdict) r.pt_witness = ppt.min_pt_eigenvalue;
  }
  return r;
}

}  // namespace qhc
