#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "qhc/io.hpp"
#include "support.hpp"

using namespace qhc;
using namespace qhc::test;
using qhc::io::Json;

namespace {

struct Result {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / "qhc_cli_test";
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("theta with a point mass at the identity is the identity channel") {
  const auto r = run({"channel", "theta", "--group", "z2", "--measure", "1,0"});
  REQUIRE(r.code == 0);
  const auto ch = io::channel_from_json(r.json());
  CHECK(ch.kraus_count() == 1);
  CHECK(max_abs(ch.kraus()[0] - Mat::Identity(2, 2)) == 0.0);
}

TEST_CASE("theta and theta-hat documents match the library") {
  auto r = run({"channel", "theta", "--group", "s3", "--measure", "haar"});
  REQUIRE(r.code == 0);
  const auto g = alias("s3");
  const auto t = io::channel_from_json(r.json());
  const Mat rho = Mat::Identity(6, 6) / 6.0 + 0.1 * (matrix_unit(6, 0, 1) + matrix_unit(6, 1, 0));
  CHECK(max_abs(t.apply(rho) - theta_oracle(*g, haar(*g).weights(), rho)) < 1e-15);

  r = run({"channel", "theta-hat", "--group", "s3", "--irrep", "2d", "--xi", "i/sqrt(10),3/sqrt(10)"});
  REQUIRE(r.code == 0);
  const auto h = io::channel_from_json(r.json());
  const Mat x = Mat::Ones(6, 6);
  CHECK(max_abs(h.apply(x) - s3_expected_correlation()) < 1e-12);

  r = run({"channel", "theta-hat", "--group", "z2", "--phi", "1,0.8"});
  REQUIRE(r.code == 0);
  const Mat y = io::channel_from_json(r.json()).apply(pauli_x());
  CHECK(max_abs(y - 0.8 * pauli_x()) < 1e-15);
}

TEST_CASE("channel weyl, compose and check") {
  auto r = run({"channel", "weyl", "--d", "2", "--q", "haar"});
  REQUIRE(r.code == 0);
  const auto dep = io::channel_from_json(r.json());
  CHECK(max_abs(dep.apply(matrix_unit(2, 0, 0)) - Mat::Identity(2, 2) / 2.0) < 1e-15);

  const std::string flip = run({"channel", "theta", "--group", "z2", "--measure", "0.5,0.5"}).out;
  const std::string phase = run({"channel", "theta-hat", "--group", "z2", "--phi", "1,0"}).out;
  r = run({"channel", "compose", "--outer", flip, "--inner", phase});
  REQUIRE(r.code == 0);
  CHECK(max_abs(io::channel_from_json(r.json()).apply(matrix_unit(2, 0, 0)) - Mat::Identity(2, 2) / 2.0) < 1e-15);

  r = run({"channel", "check", "--channel", flip});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["bistochastic"]["verdict"] == true);
  CHECK(j["choi_rank"] == 2);
  CHECK(j["unitary_conjugation"].is_null());
  CHECK(j["ppt"]["verdict"] == true);

  r = run({"channel", "check", "--group", "z3", "--measure", "delta"});
  REQUIRE(r.code == 0);
  CHECK_FALSE(r.json()["unitary_conjugation"].is_null());
}

TEST_CASE("extremality reports the certificate and the dichotomy") {
  auto r = run({"extremality", "--group", "s3", "--irrep", "2d", "--xi", "i/sqrt(10),3/sqrt(10)"});
  REQUIRE(r.code == 0);
  auto j = r.json();
  CHECK(j["verdict"] == "maximally-extreme");
  CHECK(j["span_dim"] == 4);
  CHECK(j["rank"] == 2);
  CHECK(j["aqbc_violation"] == true);
  CHECK(j["dichotomy"]["kind"] == "extreme");

  r = run({"extremality", "--group", "s3", "--irrep", "2d", "--xi", "1/sqrt(2),i/sqrt(2)"});
  REQUIRE(r.code == 0);
  j = r.json();
  CHECK(j["verdict"] == "not-maximally-extreme");
  CHECK(j["dichotomy"]["kind"] == "random-unitary");
  CHECK(j["dichotomy"]["residual"].get<double>() < 1e-10);

  r = run({"extremality", "--group", "s3", "--irrep", "2d", "--xi", "1,0"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["verdict"] == "not-maximally-extreme");
}

TEST_CASE("bloch-orbit CSV and JSON") {
  auto r = run({"bloch-orbit", "--group", "s3", "--irrep", "2d", "--xi", "1/sqrt(2),i/sqrt(2)", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    if (!header) {
      CHECK(line == "label,v1,v2,v3");
      header = true;
      continue;
    }
    ++rows;
  }
  CHECK(rows == 6);
  CHECK(r.out.find("# affine_span_dim: 2") != std::string::npos);

  r = run({"bloch-orbit", "--group", "s3", "--irrep", "2d", "--xi", "i/sqrt(10),3/sqrt(10)"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["affine_span_dim"] == 3);
  CHECK(run({"bloch-orbit", "--group", "s3", "--irrep", "2d", "--xi", "1,0", "--format", "xml"}).code == 2);
}

TEST_CASE("aqbc-search is reproducible and requires a seed") {
  const std::vector<std::string> args = {"aqbc-search", "--group", "s3", "--irrep", "2d", "--samples", "200", "--seed", "7"};
  const auto a = run(args);
  REQUIRE(a.code == 0);
  auto b_args = args;
  b_args.insert(b_args.end(), {"--threads", "3"});
  const auto b = run(b_args);
  CHECK(a.out == b.out);
  CHECK(a.json()["samples"] == 200);
  CHECK(a.json()["certified_fraction"].get<double>() >= 0.99);
  const auto no_seed = run({"aqbc-search", "--group", "s3", "--irrep", "2d"});
  CHECK(no_seed.code == 2);
  CHECK(no_seed.json()["error"]["kind"] == "ValidationError");
}

TEST_CASE("capacity and moe") {
  auto r = run({"capacity", "--group", "z2", "--phi", "1,0.8", "--seed", "1"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(r.json()["value"].get<double>() - (1 - binary_entropy(0.1))) < 1e-6);
  CHECK(r.json()["units"] == "bits");

  r = run({"moe", "--group", "s3", "--irrep", "2d", "--xi", "i/sqrt(10),3/sqrt(10)", "--restricted", "--seed", "1"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(r.json()["formula"].get<double>() - 1.0) < 1e-9);
  CHECK(r.json()["value"].get<double>() >= 1.0 - 1e-6);

  r = run({"moe", "--group", "z3", "--measure", "0.2,0.3,0.5", "--seed", "1"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(r.json()["value"].get<double>()) < 1e-6);
}

TEST_CASE("eb-test, fixpoints, noiseless and duality") {
  auto r = run({"eb-test", "--group", "z2", "--phi", "1,0.5"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["verdict"] == "NotEB");
  CHECK(r.json()["pt_witness"].get<double>() < 0);
  CHECK(run({"eb-test", "--group", "z4", "--measure", "haar"}).json()["verdict"] == "EB");
  CHECK(run({"eb-test", "--group", "s3", "--phi", "delta"}).json()["verdict"] == "EB");

  r = run({"fixpoints", "--group", "s3", "--measure", "haar"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["dim"] == 6);
  CHECK(r.json()["structure_theorem"]["holds"] == true);

  r = run({"noiseless", "--group", "d4", "--measure", "haar", "--seed", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["blocks"] == Json::parse("[[2,2],[1,1],[1,1],[1,1],[1,1]]"));
  CHECK(r.json()["noiseless"] == Json::parse("[0]"));

  r = run({"duality", "--group", "z4", "--measure", "0.1,0.2,0.3,0.4"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["residual"].get<double>() < 1e-10);
  CHECK(r.json()["holds"] == true);
  const auto na = run({"duality", "--group", "s3", "--measure", "haar"});
  CHECK(na.code == 2);
  CHECK(na.json()["error"]["kind"] == "NonAbelianGroup");
}

TEST_CASE("group build and show") {
  auto r = run({"group", "build", "--group", "{\"product\": [\"z2\", \"z3\"]}"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["order"] == 6);
  r = run({"group", "show", "--group", "s3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("(123)") != std::string::npos);
  const auto bad = run({"group", "build", "--group", "{\"explicit\": {\"table\": [[1,0],[0,1]]}}"});
  CHECK(bad.code == 2);
  CHECK(bad.json()["error"]["kind"] == "NoIdentity");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 64);
  CHECK(run({"frobnicate"}).code == 64);
  CHECK(run({"channel"}).code == 64);
  CHECK(run({"channel", "unknown"}).code == 64);
  CHECK(run({"channel", "theta", "--group", "z2", "--measure", "0.5,0.6"}).code == 2);
  CHECK(run({"channel", "theta", "--group", "z2", "--measure", "0.5,0.5", "--bogus"}).code == 2);
  CHECK(run({"extremality", "--group", "s3", "--irrep", "2d", "--xi", "1,1"}).code == 2);
  const auto r = run({"capacity", "--group", "s3", "--phi", "1,2,3,4,5,6", "--seed", "1"});
  CHECK(r.code == 2);
  CHECK(r.json()["error"].contains("kind"));
  CHECK(r.json()["error"].contains("message"));
}

TEST_CASE("help pages carry the conventions footer") {
  for (const auto& args : std::vector<std::vector<std::string>>{{"--help"}, {"channel", "--help"}, {"capacity", "--help"}}) {
    const auto r = run(args);
    CHECK(r.code == 0);
    CHECK(r.out.find("Exit codes") != std::string::npos);
    CHECK(r.out.find("bits") != std::string::npos);
  }
}

TEST_CASE("manifests and replay") {
  const auto dir = temp_dir();
  const auto out = (dir / "cap.json").string();
  const auto r = run({"capacity", "--group", "z3", "--phi", "ones", "--seed", "5", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const auto mpath = out + ".manifest.json";
  REQUIRE(std::filesystem::exists(mpath));
  std::ifstream mf(mpath);
  const Json m = Json::parse(mf);
  CHECK(m["command"] == "capacity");
  CHECK(m["seed"] == 5);
  CHECK(m["tool_version"] == cli::kToolVersion);
  std::ifstream of(out);
  std::stringstream ss;
  ss << of.rdbuf();
  CHECK(m["outputs"][0]["fnv1a64"] == cli::fnv1a64(ss.str()));

  const auto rep = run({"replay", mpath});
  CHECK(rep.code == 0);
  CHECK(rep.json()["reproduced"] == true);

  // without --out the manifest goes to stderr as one line
  const auto s = run({"group", "build", "--group", "z2"});
  REQUIRE(s.code == 0);
  const Json sm = Json::parse(s.err);
  CHECK(sm["outputs"][0]["fnv1a64"] == cli::fnv1a64(s.out));
  CHECK(sm["seed"].is_null());

  CHECK(cli::fnv1a64("") == "cbf29ce484222325");
  CHECK(cli::fnv1a64("a") == "af63dc4c8601ec8c");
}
