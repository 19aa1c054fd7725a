#include <doctest.h>

#include <algorithm>
#include <functional>

#include "qhc/error.hpp"
#include "qhc/schur.hpp"
#include "qhc/spectra.hpp"
#include "support.hpp"

using namespace qhc;
using namespace qhc::test;

namespace {

/// max over q in {0, 1/1000, ..., 1} of H(q) - S(q x0 + (1-q) x1) for the Z2 phase flip.
double phase_flip_grid_capacity(double c) {
  // orbit vectors of phi = (1, c): x0, x1 with <x1, x0> = c, realized in C^2
  const double a = std::sqrt((1 + c) / 2), b = std::sqrt((1 - c) / 2);
  Vec v0(2), v1(2);
  v0 << a, b;
  v1 << a, -b;
  double best = -1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double q = k / 1000.0;
    const Mat rho = q * v0 * v0.adjoint() + (1 - q) * v1 * v1.adjoint();
    best = std::max(best, binary_entropy(q) - qubit_entropy(rho));
  }
  return best;
}

}  // namespace

TEST_CASE("von Neumann entropy") {
  Vec v(3);
  v << 0.6, cplx(0, 0.8), 0.0;
  CHECK(std::abs(von_neumann_entropy(v * v.adjoint())) < 1e-12);
  CHECK(von_neumann_entropy(Mat::Identity(4, 4) / 4.0) == doctest::Approx(2.0));
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 0.9;
  d(1, 1) = 0.1;
  CHECK(von_neumann_entropy(d) == doctest::Approx(0.468996).epsilon(1e-6));
  CHECK(von_neumann_entropy(d) == doctest::Approx(binary_entropy(0.1)).epsilon(1e-13));
  Mat bad = d;
  bad(1, 1) = -0.1;
  bad(0, 0) = 1.1;
  try {
    von_neumann_entropy(bad);
    FAIL("accepted a non-state");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAState);
  }
  Mat noisy = d;
  noisy(0, 0) = 1.0 + 5e-11;
  noisy(1, 1) = -5e-11;
  CHECK(std::abs(von_neumann_entropy(noisy)) < 1e-8);
}

TEST_CASE("Shannon entropy") {
  CHECK(shannon_entropy(ProbabilityMeasure::point_mass(5, 2)) == 0.0);
  CHECK(shannon_entropy(haar(group_from_alias("d4"))) == doctest::Approx(3.0));
  CHECK(shannon_entropy(std::vector<double>{0.5, 0.25, 0.25}) == doctest::Approx(1.5));
}

TEST_CASE("coherent information") {
  CHECK(coherent_information(identity_channel(4), Mat::Identity(4, 4) / 4.0) == doctest::Approx(2.0));
  const auto g = alias("z3");
  const auto e = conditional_expectation(g, ExpectationTarget::Diagonal);
  Mat rho = Mat::Zero(3, 3);
  rho(0, 0) = 0.5;
  rho(1, 1) = 0.3;
  rho(2, 2) = 0.2;
  CHECK(std::abs(coherent_information(e, rho)) < 1e-12);
  const double p = 0.1;
  const auto pf = theta_hat(PositiveDefiniteFunction(alias("z2"), {1.0, 1 - 2 * p}));
  CHECK(coherent_information(pf, Mat::Identity(2, 2) / 2.0) == doctest::Approx(1 - binary_entropy(p)).epsilon(1e-12));
  CHECK_THROWS_AS(coherent_information(pf, Mat::Identity(3, 3) / 3.0), Error);
}

TEST_CASE("capacity of phase flips matches a grid scan") {
  const auto z2 = alias("z2");
  for (double p : {0.05, 0.1, 0.25, 0.5}) {
    const PositiveDefiniteFunction phi(z2, {1.0, 1 - 2 * p});
    const auto r = schur_capacity(phi);
    CHECK(std::abs(r.value - phase_flip_grid_capacity(1 - 2 * p)) < 1e-6);
    CHECK(std::abs(capacity_objective(phi, r.argmax) - r.value) < 1e-9);
    CHECK(r.optimality_gap < 1e-6);
    CHECK(r.value >= -1e-12);
    CHECK(r.value <= 1.0 + 1e-12);
  }
}

TEST_CASE("capacity extremes") {
  for (const char* name : {"z2", "s3", "d4"}) {
    const auto g = alias(name);
    const int n = g->order();
    const auto one = schur_capacity(PositiveDefiniteFunction(g, std::vector<cplx>(n, 1.0)));
    CHECK(std::abs(one.value - std::log2(n)) < 1e-9);
    std::vector<cplx> delta(n, 0.0);
    delta[0] = 1.0;
    CHECK(std::abs(schur_capacity(PositiveDefiniteFunction(g, delta)).value) < 1e-9);
  }
}

TEST_CASE("capacity is independent of the GNS factorization") {
  std::mt19937_64 rng(201);
  const auto s3 = alias("s3");
  const UnitaryRep pi(s3, s3_triangle());
  const Vec xi = random_unit(rng, 2);
  const auto phi = pdf_from_rep(pi, xi);
  // Second factorization: conjugate the representation by a random unitary.
  const Mat q = Eigen::HouseholderQR<Mat>(random_state(rng, 2) + Mat::Identity(2, 2)).householderQ();
  std::vector<Mat> mats;
  for (const auto& m : pi.matrices()) mats.push_back(q * m * q.adjoint());
  const auto phi2 = pdf_from_rep(UnitaryRep(s3, mats), q * xi);
  std::vector<double> mu = random_weights(rng, 6);
  CHECK(std::abs(capacity_objective(phi, mu) - capacity_objective(phi2, mu)) < 1e-9);
  CHECK(std::abs(schur_capacity(phi).value - schur_capacity(phi2).value) < 1e-9);
}

TEST_CASE("capacity agrees with grid scans on small groups") {
  std::mt19937_64 rng(203);
  for (const char* name : {"z3", "z4", "z2^2"}) {
    const auto g = alias(name);
    const auto phi = PositiveDefiniteFunction(g, random_pdf_values(rng, *g));
    const auto r = schur_capacity(phi);
    // grid over the simplex with step 1/40
    const int steps = 40;
    const int n = g->order();
    double best = -1.0;
    std::vector<int> k(n, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == n - 1) {
        k[i] = left;
        std::vector<double> mu(n);
        for (int j = 0; j < n; ++j) mu[j] = static_cast<double>(k[j]) / steps;
        best = std::max(best, capacity_objective(phi, mu));
        return;
      }
      for (int v = 0; v <= left; ++v) {
        k[i] = v;
        rec(i + 1, left - v);
      }
    };
    rec(0, steps);
    CHECK(r.value >= best - 1e-9);
    CHECK(r.value <= best + 0.1);
  }
}

TEST_CASE("minimum output entropy of the building blocks is zero") {
  std::mt19937_64 rng(207);
  MoeConfig cfg;
  cfg.seed = 1;
  cfg.restarts = 8;
  for (const char* name : {"z3", "s3"}) {
    const auto g = alias(name);
    const auto t = theta(ProbabilityMeasure(random_weights(rng, g->order())), g);
    CHECK(std::abs(min_output_entropy(t, cfg).estimate) < 1e-6);
    const auto h = theta_hat(PositiveDefiniteFunction(g, random_pdf_values(rng, *g)));
    CHECK(std::abs(min_output_entropy(h, cfg).estimate) < 1e-6);
  }
  CHECK(std::abs(min_output_entropy(identity_channel(3), cfg).estimate) < 1e-9);
  // the witnesses named by the theory are fixed
  const auto g = alias("s3");
  const auto t = theta(ProbabilityMeasure(random_weights(rng, 6)), g);
  const Mat constants = Mat::Ones(6, 6) / 6.0;
  CHECK(std::abs(von_neumann_entropy(t.apply(constants))) < 1e-10);
  const auto h = theta_hat(PositiveDefiniteFunction(g, random_pdf_values(rng, *g)));
  CHECK(std::abs(von_neumann_entropy(h.apply(matrix_unit(6, 2, 2)))) < 1e-10);
}

TEST_CASE("restricted MOE formulas") {
  const auto z2 = alias("z2");
  CHECK(moe_theta_restricted(ProbabilityMeasure({0.9, 0.1}), *z2) == doctest::Approx(binary_entropy(0.1)));
  CHECK(moe_theta_restricted(ProbabilityMeasure::point_mass(8, 3), group_from_alias("d4")) == 0.0);
  CHECK(moe_theta_restricted(haar(group_from_alias("d4")), group_from_alias("d4")) == doctest::Approx(3.0));

  const auto s3 = alias("s3");
  CHECK(std::abs(moe_theta_hat_restricted(PositiveDefiniteFunction(s3, std::vector<cplx>(6, 1.0)))) < 1e-12);
  std::vector<cplx> delta(6, 0.0);
  delta[0] = 1.0;
  CHECK(moe_theta_hat_restricted(PositiveDefiniteFunction(s3, delta)) == doctest::Approx(std::log2(6.0)));
  const auto phi = pdf_from_rep(UnitaryRep(s3, s3_triangle()), complex_xi());
  CHECK(std::abs(moe_theta_hat_restricted(phi) - 1.0) < 1e-9);
  // independent: eigenvalues of the expected matrix / 6 are {1/2, 1/2, 0, 0, 0, 0}
  const RVec ev = eigh(s3_expected_correlation() / 6.0).values;
  CHECK(std::abs(ev(5) - 0.5) < 1e-12);
  CHECK(std::abs(ev(4) - 0.5) < 1e-12);
  CHECK(std::abs(ev(3)) < 1e-12);
}

TEST_CASE("restricted MOE formulas bound the numerical minimum") {
  std::mt19937_64 rng(211);
  MoeConfig cfg;
  cfg.seed = 4;
  cfg.restarts = 16;
  for (const char* name : {"z2", "z3", "s3"}) {
    const auto g = alias(name);
    const int n = g->order();
    const ProbabilityMeasure mu(random_weights(rng, n));
    const auto diag = conditional_expectation(g, ExpectationTarget::Diagonal);
    const auto lhs = min_output_entropy(compose(theta(mu, g), diag), cfg);
    CHECK(lhs.estimate >= moe_theta_restricted(mu, *g) - 1e-6);
    CHECK(std::abs(lhs.estimate - moe_theta_restricted(mu, *g)) < 1e-6);
    // analytic witness: any delta_s
    CHECK(std::abs(von_neumann_entropy(compose(theta(mu, g), diag).apply(matrix_unit(n, 0, 0))) -
                   shannon_entropy(mu)) < 1e-9);

    const PositiveDefiniteFunction phi(g, random_pdf_values(rng, *g));
    const auto ga = conditional_expectation(g, ExpectationTarget::GroupAlgebra);
    const auto rhs = min_output_entropy(compose(theta_hat(phi), ga), cfg);
    CHECK(rhs.estimate >= moe_theta_hat_restricted(phi) - 1e-6);
    CHECK(std::abs(rhs.estimate - moe_theta_hat_restricted(phi)) < 1e-6);
    // analytic witness: the constant vector is fixed by E and mapped to C_phi/|G|
    CHECK(std::abs(von_neumann_entropy(compose(theta_hat(phi), ga).apply(Mat::Ones(n, n) / double(n))) -
                   moe_theta_hat_restricted(phi)) < 1e-9);
  }
}

TEST_CASE("PPT test on Choi matrices") {
  const auto s3 = alias("s3");
  std::vector<cplx> delta(6, 0.0);
  delta[0] = 1.0;
  CHECK(choi_ppt(theta_hat(PositiveDefiniteFunction(s3, delta))).verdict);
  const auto phi = pdf_from_rep(UnitaryRep(s3, s3_triangle()), complex_xi());
  const auto r = choi_ppt(theta_hat(phi));
  CHECK_FALSE(r.verdict);
  CHECK(r.min_pt_eigenvalue < -1e-3);
  CHECK_FALSE(choi_ppt(identity_channel(2)).verdict);
}

TEST_CASE("entanglement breaking") {
  const auto s3 = alias("s3");
  std::vector<cplx> delta(6, 0.0);
  delta[0] = 1.0;
  CHECK(eb_test_theta_hat(PositiveDefiniteFunction(s3, delta)).entanglement_breaking);

  std::mt19937_64 rng(213);
  for (const char* name : {"z2", "s3"}) {
    const auto g = alias(name);
    for (int trial = 0; trial < 5; ++trial) {
      const auto r = eb_test_theta_hat(PositiveDefiniteFunction(g, random_pdf_values(rng, *g)));
      CHECK_FALSE(r.entanglement_breaking);
      REQUIRE(r.pt_witness.has_value());
      CHECK(*r.pt_witness < -1e-10);
    }
  }
  const auto h = eb_test_theta(haar(*s3), s3);
  CHECK_FALSE(h.entanglement_breaking);
  CHECK(h.reason == "nonabelian group");
  const auto z4 = alias("z4");
  CHECK(eb_test_theta(haar(*z4), z4).entanglement_breaking);
  CHECK_FALSE(eb_test_theta(ProbabilityMeasure({0.4, 0.2, 0.2, 0.2}), z4).entanglement_breaking);
}

TEST_CASE("EB implies PPT and bistochastic channels raise entropy") {
  std::mt19937_64 rng(217);
  for (const char* name : {"z2", "z4", "s3", "z2^2"}) {
    const auto g = alias(name);
    const int n = g->order();
    const ProbabilityMeasure mu(random_weights(rng, n, true));
    const PositiveDefiniteFunction phi(g, random_pdf_values(rng, *g));
    for (const auto& [eb, ch] : {std::pair{eb_test_theta(mu, g), theta(mu, g)},
                                 std::pair{eb_test_theta(haar(*g), g), theta(haar(*g), g)},
                                 std::pair{eb_test_theta_hat(phi), theta_hat(phi)}}) {
      if (eb.entanglement_breaking) CHECK(choi_ppt(ch).verdict);
      for (int trial = 0; trial < 3; ++trial) {
        const Mat rho = random_state(rng, n);
        CHECK(von_neumann_entropy(ch.apply(rho)) >= von_neumann_entropy(rho) - 1e-9);
      }
    }
  }
}
