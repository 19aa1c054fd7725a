#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "qhc/error.hpp"
#include "qhc/fixed_points.hpp"
#include "support.hpp"

using namespace qhc;
using namespace qhc::test;

namespace {

using Blocks = std::vector<std::pair<int, int>>;

/// Dimension of {x : Phi^adj(x) = x} from the kernel of the explicit superoperator.
int fixed_dim_oracle(const QuantumChannel& phi) {
  const int d = phi.dim_in();
  Mat s = Mat::Zero(d * d, d * d);
  for (int k = 0; k < d * d; ++k) {
    const Mat e = matrix_unit(d, k % d, k / d);
    Mat img = -e;
    for (const auto& a : phi.kraus()) img += a.adjoint() * e * a;
    s.col(k) = Eigen::Map<const Vec>(img.data(), d * d);
  }
  Eigen::JacobiSVD<Mat> svd(s);
  const RVec sv = svd.singularValues();
  int zero = 0;
  for (int i = 0; i < sv.size(); ++i) zero += sv(i) < 1e-9 * std::max(1.0, sv(0));
  return zero;
}

/// Whether every basis element of `a` lies in `b`.
bool contained(const OperatorSubspace& a, const OperatorSubspace& b) {
  for (const auto& x : a.basis())
    if (b.residual(x) > 1e-8) return false;
  return true;
}

}  // namespace

TEST_CASE("fixed points of simple channels") {
  CHECK(fixed_point_space(identity_channel(3)).dim() == 9);
  const auto z2 = alias("z2");
  const auto t = theta(ProbabilityMeasure({0.5, 0.5}), z2);
  const auto fix = fixed_point_space(t);
  CHECK(fix.dim() == 2);
  CHECK(fix.residual(Mat::Identity(2, 2)) < 1e-12);
  CHECK(fix.residual(pauli_x()) < 1e-12);
  CHECK(fix.residual(pauli_z()) > 0.5);
}

TEST_CASE("fixed points of adapted Schur multipliers are the diagonal") {
  std::mt19937_64 rng(301);
  for (int n = 1; n <= 3; ++n) {
    GroupPtr g = alias("z2");
    for (int k = 1; k < n; ++k) g = share(product(*g, cyclic(2)));
    const PositiveDefiniteFunction phi(g, random_pdf_values(rng, *g));
    const auto fix = fixed_point_space(theta_hat(phi));
    CHECK(fix.dim() == (1 << n));
    for (int i = 0; i < (1 << n); ++i) CHECK(fix.residual(matrix_unit(1 << n, i, i)) < 1e-10);
  }
}

TEST_CASE("fixed point dimension agrees with a superoperator kernel oracle") {
  std::mt19937_64 rng(303);
  for (const char* name : {"z3", "z4", "s3", "z2^2"}) {
    const auto g = alias(name);
    const auto t = theta(ProbabilityMeasure(random_weights(rng, g->order(), true)), g);
    CHECK(fixed_point_space(t).dim() == fixed_dim_oracle(t));
    CHECK(fixed_point_space(t, Exec::Serial).dim() == fixed_dim_oracle(t));
    const auto h = theta_hat(PositiveDefiniteFunction(g, random_pdf_values(rng, *g)));
    CHECK(fixed_point_space(h).dim() == fixed_dim_oracle(h));
  }
}

TEST_CASE("harmonic functions") {
  const auto s3 = alias("s3");
  const auto adapted = harmonic_functions(haar(*s3), *s3);
  REQUIRE(adapted.dim() == 1);
  for (int s = 1; s < 6; ++s) CHECK(std::abs(adapted.basis[0][s] - adapted.basis[0][0]) < 1e-12);

  const auto z4 = alias("z4");
  const auto h = harmonic_functions(ProbabilityMeasure({0.3, 0.0, 0.7, 0.0}), *z4);
  REQUIRE(h.dim() == 2);
  for (const auto& f : h.basis) {
    // indicator of {0, 2} or {1, 3}
    CHECK(std::abs(f[0] - f[2]) < 1e-12);
    CHECK(std::abs(f[1] - f[3]) < 1e-12);
    CHECK(std::abs(f[0] * f[1]) < 1e-12);
  }
  CHECK(harmonic_functions(ProbabilityMeasure::point_mass(6, 0), *s3).dim() == 6);
  // cosets of <(12)> in S3: three of them
  CHECK(harmonic_functions(ProbabilityMeasure({0.5, 0, 0, 0.5, 0, 0}), *s3).dim() == 3);
}

TEST_CASE("harmonic functions satisfy the mean value property") {
  std::mt19937_64 rng(307);
  for (const char* name : {"z6", "s3", "d4"}) {
    const auto g = group_from_alias(name);
    const int n = g.order();
    for (int trial = 0; trial < 5; ++trial) {
      const ProbabilityMeasure mu(random_weights(rng, n, true));
      const auto h = harmonic_functions(mu, g);
      CHECK(h.dim() == static_cast<int>(left_cosets(g, subgroup_generated(g, mu.support())).size()));
      for (const auto& f : h.basis)
        for (int s = 0; s < n; ++s) {
          cplx acc = 0.0;
          for (int t = 0; t < n; ++t) acc += f[g.mul(s, t)] * mu[t];
          CHECK(std::abs(acc - f[s]) < 1e-10);
        }
    }
  }
}

TEST_CASE("fixed points of Theta and ThetaHat match their generated algebras") {
  const auto s3 = alias("s3");
  auto r = verify_fix_theta(haar(*s3), s3);
  CHECK(r.holds);
  CHECK(r.lhs_dim == 6);
  CHECK(r.rhs_dim == 6);
  r = verify_fix_theta(ProbabilityMeasure::point_mass(6, 0), s3);
  CHECK(r.holds);
  CHECK(r.lhs_dim == 36);
  const auto z4 = alias("z4");
  r = verify_fix_theta(ProbabilityMeasure({0.5, 0.0, 0.5, 0.0}), z4);
  CHECK(r.holds);
  CHECK(r.lhs_dim == 8);

  std::mt19937_64 rng(311);
  for (const char* name : {"z3", "z4", "s3", "z2^2", "d4"}) {
    const auto g = alias(name);
    for (int trial = 0; trial < 3; ++trial) {
      const auto a = verify_fix_theta(ProbabilityMeasure(random_weights(rng, g->order(), true)), g);
      CHECK(a.holds);
      CHECK(a.lhs_dim == a.rhs_dim);
    }
    const auto b = verify_fix_theta_hat(PositiveDefiniteFunction(g, random_pdf_values(rng, *g)));
    CHECK(b.holds);
    CHECK(b.lhs_dim == g->order());
  }
  // phi = 1 on the subgroup {0, 2} of Z4: diagonal plus l_2 generate a block algebra
  const PositiveDefiniteFunction ind(z4, {1.0, 0.0, 1.0, 0.0});
  const auto c = verify_fix_theta_hat(ind);
  CHECK(c.holds);
  CHECK(c.lhs_dim == 8);
}

TEST_CASE("algebra recognition") {
  const Mat i2 = Mat::Identity(2, 2);
  CHECK(is_algebra(OperatorSubspace::span(2, {i2, pauli_x()})).verdict);
  const auto no_id = is_algebra(OperatorSubspace::span(2, {pauli_x()}));
  CHECK_FALSE(no_id.verdict);
  CHECK(no_id.reason == "missing identity");
  const auto no_adj = is_algebra(OperatorSubspace::span(2, {i2, matrix_unit(2, 0, 1)}));
  CHECK_FALSE(no_adj.verdict);
  CHECK(no_adj.reason == "not adjoint closed");
  Mat a = Mat::Zero(3, 3);
  a(1, 1) = 1;
  a(2, 2) = 2;
  const auto no_prod = is_algebra(OperatorSubspace::span(3, {Mat::Identity(3, 3), a}));
  CHECK_FALSE(no_prod.verdict);
  CHECK(no_prod.reason == "not product closed");
  CHECK(no_prod.witness.has_value());
}

TEST_CASE("generated algebras") {
  CHECK(generate_algebra(3, {}).dim() == 1);
  CHECK(generate_algebra(3, {matrix_unit(3, 0, 1), matrix_unit(3, 1, 2)}).dim() == 9);
  const auto s3 = group_from_alias("s3");
  std::vector<Mat> ls;
  for (int s = 0; s < 6; ++s) ls.push_back(left_translation(s3, s));
  CHECK(generate_algebra(6, ls).dim() == 6);
}

TEST_CASE("structure decomposition") {
  const auto d4 = group_from_alias("d4");
  std::vector<Mat> ls;
  for (int s = 0; s < 8; ++s) ls.push_back(left_translation(d4, s));
  const auto alg = OperatorSubspace::span(8, ls);
  REQUIRE(alg.dim() == 8);
  const auto dec = structure_decomposition(alg, 5);
  CHECK(dec.blocks == Blocks{{2, 2}, {1, 1}, {1, 1}, {1, 1}, {1, 1}});
  CHECK(dec.seed == 5);
  CHECK(block_form_residual(alg, dec) < 1e-8);
  CHECK(max_abs(dec.unitary.adjoint() * dec.unitary - Mat::Identity(8, 8)) < 1e-9);

  const auto scalars = OperatorSubspace::span(4, {Mat::Identity(4, 4)});
  CHECK(structure_decomposition(scalars).blocks == Blocks{{1, 4}});
  std::vector<Mat> units;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) units.push_back(matrix_unit(3, i, j));
  const auto full = OperatorSubspace::span(3, units);
  const auto fd = structure_decomposition(full);
  CHECK(fd.blocks == Blocks{{3, 1}});
  CHECK(block_form_residual(full, fd) < 1e-9);

  // M_2 kron I_2 (+) C inside M_5
  std::vector<Mat> gens;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Mat m = Mat::Zero(5, 5);
      m.topLeftCorner(4, 4) = kron(matrix_unit(2, i, j), Mat::Identity(2, 2));
      gens.push_back(m);
    }
  Mat last = Mat::Zero(5, 5);
  last(4, 4) = 1;
  gens.push_back(last);
  const auto mixed = OperatorSubspace::span(5, gens);
  CHECK(is_algebra(mixed).verdict);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto dd = structure_decomposition(mixed, seed);
    CHECK(dd.blocks == Blocks{{2, 2}, {1, 1}});
    CHECK(block_form_residual(mixed, dd) < 1e-8);
  }
  CHECK_THROWS_AS(structure_decomposition(OperatorSubspace::span(2, {pauli_x()})), Error);
}

TEST_CASE("noiseless subsystems") {
  const auto d4 = alias("d4");
  const auto r = noiseless_subsystems(haar(*d4), d4, 3);
  CHECK(r.decomposition.blocks == Blocks{{2, 2}, {1, 1}, {1, 1}, {1, 1}, {1, 1}});
  CHECK(r.noiseless == std::vector<int>{0});
  REQUIRE(r.peter_weyl.has_value());
  CHECK(r.peter_weyl->applicable);
  CHECK(r.peter_weyl->matches);
  CHECK(r.peter_weyl->coefficient_functions.size() == 8);

  const auto s3 = alias("s3");
  std::mt19937_64 rng(313);
  const auto s = noiseless_subsystems(ProbabilityMeasure(random_weights(rng, 6)), s3);
  CHECK(s.decomposition.blocks == Blocks{{2, 2}, {1, 1}, {1, 1}});
  REQUIRE(s.peter_weyl.has_value());
  CHECK(s.peter_weyl->matches);
  // coefficient functions are orthogonal with norm^2 |G| / d_pi
  const auto& cf = s.peter_weyl->coefficient_functions;
  CHECK(cf.size() == 6);
  auto irrep_dim = [&](int irrep) {
    const auto c = std::count_if(cf.begin(), cf.end(), [&](const CoefficientFunction& f) { return f.irrep == irrep; });
    return static_cast<int>(std::lround(std::sqrt(static_cast<double>(c))));
  };
  for (size_t a = 0; a < cf.size(); ++a)
    for (size_t b = 0; b < cf.size(); ++b) {
      cplx ip = 0.0;
      for (int k = 0; k < 6; ++k) ip += cf[a].values[k] * std::conj(cf[b].values[k]);
      const double expect = a == b ? 6.0 / irrep_dim(cf[a].irrep) : 0.0;
      CHECK(std::abs(ip - expect) < 1e-9);
    }

  const auto z4 = alias("z4");
  const auto ab = noiseless_subsystems(ProbabilityMeasure(random_weights(rng, 4)), z4);
  CHECK(ab.decomposition.blocks == Blocks{{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  CHECK(ab.noiseless.empty());

  const auto id = noiseless_subsystems(identity_channel(3));
  CHECK(id.decomposition.blocks == Blocks{{3, 1}});
  CHECK(id.noiseless == std::vector<int>{0});
}

TEST_CASE("fixed points grow along convolution powers") {
  std::mt19937_64 rng(317);
  for (const char* name : {"z4", "s3", "d4"}) {
    const auto g = alias(name);
    for (int trial = 0; trial < 3; ++trial) {
      const ProbabilityMeasure mu(random_weights(rng, g->order(), true));
      const auto base = fixed_point_space(theta(mu, g));
      for (int n = 2; n <= 3; ++n) {
        const auto power = fixed_point_space(theta(convolution_power(mu, n, *g), g));
        CHECK(contained(base, power));
      }
    }
  }
}
