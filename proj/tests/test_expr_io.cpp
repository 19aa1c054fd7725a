#include <doctest.h>

#include <functional>

#include "qhc/error.hpp"
#include "qhc/expr.hpp"
#include "qhc/io.hpp"
#include "support.hpp"

using namespace qhc;
using namespace qhc::test;
using qhc::io::Json;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::NumericalFailure;
}

}  // namespace

TEST_CASE("exact expressions") {
  const auto x = parse_expression("i/sqrt(10)");
  CHECK_FALSE(x.is_real());
  CHECK(std::abs(x.to_complex() - cplx(0, 1 / std::sqrt(10.0))) < 1e-16);
  CHECK(std::abs(parse_expression("(1+i)/2").to_complex() - cplx(0.5, 0.5)) < 1e-16);
  CHECK(std::abs(parse_expression("3/sqrt(10)").to_complex() - 3 / std::sqrt(10.0)) < 1e-16);
  CHECK(parse_expression("sqrt(2)*sqrt(2)").is_real());
  CHECK(parse_expression("sqrt(2)*sqrt(2)").to_complex() == cplx(2.0, 0.0));
  CHECK(parse_expression("sqrt(12) - 2*sqrt(3)").is_zero());
  CHECK(parse_expression("i*i").to_complex() == cplx(-1.0, 0.0));
  CHECK(parse_expression("0.25 + 0.75").to_complex() == cplx(1.0, 0.0));
  CHECK(parse_expression("-1/2 + sqrt(3)*i/2").to_complex() == cplx(-0.5, std::sqrt(3.0) / 2));
  CHECK(std::abs(parse_expression("sqrt(3/4)").to_complex() - std::sqrt(0.75)) < 1e-16);
}

TEST_CASE("expression errors") {
  for (const char* bad : {"", "1+", "sqrt(-1)", "(1", "1)", "x", "1/0", "sqrt(i)", "2..5"})
    CHECK(kind_of([&] { parse_expression(bad); }) == ErrorKind::ParseError);
}

TEST_CASE("expression lists") {
  const auto v = parse_complex_list("i/sqrt(10), 3/sqrt(10)");
  REQUIRE(v.size() == 2);
  CHECK(std::abs(v[0] - complex_xi()(0)) < 1e-16);
  CHECK(std::abs(v[1] - complex_xi()(1)) < 1e-16);
  const auto r = parse_real_list("1, 0.8");
  CHECK(r == std::vector<double>{1.0, 0.8});
  CHECK(kind_of([] { parse_real_list("1, i"); }) == ErrorKind::ParseError);
}

TEST_CASE("complex and matrix JSON round trips") {
  const cplx z(0.1, -1e-300);
  CHECK(io::complex_from_json(io::to_json(z)) == z);
  CHECK(io::complex_from_json(Json::parse(io::to_json(z).dump())) == z);
  std::mt19937_64 rng(401);
  const Mat m = random_state(rng, 4);
  CHECK(io::matrix_from_json(Json::parse(io::to_json(m).dump())) == m);
  const Vec v = random_unit(rng, 5);
  CHECK(io::vector_from_json(Json::parse(io::to_json(v).dump())) == v);
  CHECK(kind_of([] { io::complex_from_json(Json::parse("[1, 2, 3]")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::matrix_from_json(Json::parse("[[[1,0]], [[1,0],[0,0]]]")); }) == ErrorKind::ParseError);
}

TEST_CASE("group documents") {
  const auto s3 = group_from_alias("s3");
  const Json doc = io::group_to_json(s3);
  CHECK(doc["order"] == 6);
  const auto back = io::group_from_json(Json::parse(doc.dump()));
  CHECK(back->table() == s3.table());
  CHECK(back->labels() == s3.labels());

  CHECK(io::group_from_json(Json::parse(R"({"cyclic": 5})"))->order() == 5);
  CHECK(io::group_from_json(Json::parse(R"({"symmetric": 4})"))->order() == 24);
  CHECK(io::group_from_json(Json::parse(R"({"dihedral": 5})"))->order() == 10);
  CHECK(io::group_from_json(Json::parse(R"({"product": [{"cyclic": 2}, "s3"]})"))->order() == 12);
  const auto sd = io::group_from_json(
      Json::parse(R"({"semidirect": {"normal": "z2^2", "acting": {"cyclic": 2}, "action": "swap"}})"));
  CHECK(sd->order() == 8);
  CHECK_FALSE(sd->is_abelian());
  const auto ex = io::group_from_json(Json::parse(R"({"explicit": {"table": [[0,1],[1,0]], "labels": ["e","a"]}})"));
  CHECK(ex->labels() == std::vector<std::string>{"e", "a"});

  CHECK(kind_of([] { io::group_from_json(Json::parse(R"({"cyclic": 2, "symmetric": 3})")); }) ==
        ErrorKind::UnsupportedDescriptor);
  CHECK(kind_of([] { io::group_from_json(Json::parse(R"({"alternating": 4})")); }) ==
        ErrorKind::UnsupportedDescriptor);
  CHECK(kind_of([] { io::group_from_json(Json::parse(R"({"order": 3, "table": [[0,1],[1,0]]})")); }) ==
        ErrorKind::ParseError);
  CHECK(kind_of([] { io::group_from_json(Json::parse(R"({"table": [[0,1],[0,1]]})")); }) != ErrorKind::ParseError);
}

TEST_CASE("measure, representation, function and channel documents") {
  const Json ref = "s3";
  const auto g = alias("s3");
  const ProbabilityMeasure mu({0.1, 0.2, 0.3, 0.1, 0.2, 0.1});
  GroupPtr parsed;
  const auto mu2 = io::measure_from_json(Json::parse(io::measure_to_json(mu, ref).dump()), &parsed);
  CHECK(mu2.weights() == mu.weights());
  CHECK(parsed->order() == 6);
  CHECK(kind_of([] { io::measure_from_json(Json::parse(R"({"group": "z3", "weights": [0.5, 0.5]})")); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { io::measure_from_json(Json::parse(R"({"group": "z2", "weights": [0.5, 0.6]})")); }) ==
        ErrorKind::InvalidMeasure);

  const UnitaryRep rep(g, s3_triangle());
  const auto rep2 = io::rep_from_json(Json::parse(io::rep_to_json(rep, ref).dump()));
  for (int s = 0; s < 6; ++s) CHECK(rep2(s) == rep(s));

  const auto phi = pdf_from_rep(rep, complex_xi());
  const auto phi2 = io::pdf_from_json(Json::parse(io::pdf_to_json(phi, ref).dump()));
  CHECK(phi2.values() == phi.values());

  const auto ch = theta_hat(phi);
  const auto ch2 = io::channel_from_json(Json::parse(io::channel_to_json(ch).dump()));
  REQUIRE(ch2.kraus_count() == ch.kraus_count());
  for (int k = 0; k < ch.kraus_count(); ++k) CHECK(ch2.kraus()[k] == ch.kraus()[k]);
  CHECK(kind_of([] {
          io::channel_from_json(Json::parse(R"({"dim_in": 2, "dim_out": 2, "kraus": [[[[1,0],[0,0]],[[0,0],[0,0]]]]})"));
        }) == ErrorKind::NotTracePreserving);
}

TEST_CASE("error documents") {
  const Json e = io::error_to_json("ParseError", "bad input");
  CHECK(e.dump() == R"({"error":{"kind":"ParseError","message":"bad input"}})");
  CHECK(error_kind_name(ErrorKind::NotPositiveDefinite) == "NotPositiveDefinite");
  CHECK(error_kind_name(ErrorKind::RankNotTwo) == "RankNotTwo");
}
