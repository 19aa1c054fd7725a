#include "qhc/io.hpp"

#include <regex>

#include "qhc/error.hpp"

namespace qhc::io {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const RVec& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad("complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Mat matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) bad("matrix must be a nonempty array of rows");
  const int rows = static_cast<int>(j.size()), cols = static_cast<int>(j[0].size());
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols) bad("matrix rows have different lengths");
    for (int k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
  }
  return m;
}

Vec vector_from_json(const Json& j) {
  if (!j.is_array()) bad("vector must be an array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i]);
  return v;
}

Json group_to_json(const FiniteGroup& g) {
  Json j;
  j["order"] = g.order();
  j["table"] = g.table();
  j["labels"] = g.labels();
  return j;
}

GroupDescriptor descriptor_from_json(const Json& j) {
  auto sub = [](const Json& x) { return std::make_shared<const GroupDescriptor>(descriptor_from_json(x)); };
  if (j.is_string()) {
    const std::string alias = j.get<std::string>();
    const FiniteGroup g = group_from_alias(alias);
    std::smatch m;
    if (std::regex_match(alias, m, std::regex(R"(z2\^(\d+))"))) {
      // Keep the product structure so a swap action can see the two factors.
      GroupDescriptor d{CyclicDesc{2}};
      for (int i = 1; i < std::stoi(m[1]); ++i)
        d = {ProductDesc{std::make_shared<const GroupDescriptor>(d), std::make_shared<const GroupDescriptor>(
                                                                         GroupDescriptor{CyclicDesc{2}})}};
      return d;
    }
    if (std::regex_match(alias, m, std::regex(R"(z(\d+))"))) return {CyclicDesc{std::stoi(m[1])}};
    return {ExplicitDesc{g.table(), g.labels()}};
  }
  if (j.is_object() && j.contains("table")) {
    ExplicitDesc d{j.at("table").get<std::vector<std::vector<int>>>(), {}};
    if (j.contains("labels")) d.labels = j.at("labels").get<std::vector<std::string>>();
    if (j.contains("order") && j.at("order").get<int>() != static_cast<int>(d.table.size()))
      bad("'order' disagrees with the table size");
    return {d};
  }
  if (!j.is_object() || j.size() != 1)
    throw Error(ErrorKind::UnsupportedDescriptor, "group descriptor must have exactly one key");
  const auto& [key, v] = *j.items().begin();
  if (key == "cyclic") return {CyclicDesc{v.get<int>()}};
  if (key == "symmetric") return {SymmetricDesc{v.get<int>()}};
  if (key == "dihedral") return {DihedralDesc{v.get<int>()}};
  if (key == "product") {
    if (!v.is_array() || v.size() != 2) bad("product takes two groups");
    return {ProductDesc{sub(v[0]), sub(v[1])}};
  }
  if (key == "semidirect") {
    SemidirectDesc d{sub(field(v, "normal")), sub(field(v, "acting")), field(v, "action").get<std::string>(), {}};
    if (v.contains("automorphisms")) d.automorphisms = v.at("automorphisms").get<std::vector<std::vector<int>>>();
    return {d};
  }
  if (key == "explicit") {
    ExplicitDesc d{field(v, "table").get<std::vector<std::vector<int>>>(), {}};
    if (v.contains("labels")) d.labels = v.at("labels").get<std::vector<std::string>>();
    return {d};
  }
  throw Error(ErrorKind::UnsupportedDescriptor, "unknown group descriptor '" + key + "'");
}

GroupPtr group_from_json(const Json& ref) {
  try {
    if (ref.is_string()) return std::make_shared<const FiniteGroup>(group_from_alias(ref.get<std::string>()));
    return std::make_shared<const FiniteGroup>(make_group(descriptor_from_json(ref)));
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("bad group document: ") + e.what());
  }
}

Json measure_to_json(const ProbabilityMeasure& mu, const Json& group_ref) {
  Json j;
  j["group"] = group_ref;
  j["weights"] = mu.weights();
  return j;
}

ProbabilityMeasure measure_from_json(const Json& j, GroupPtr* group) {
  const auto g = group_from_json(field(j, "group"));
  ProbabilityMeasure mu(field(j, "weights").get<std::vector<double>>());
  if (mu.size() != g->order()) throw Error(ErrorKind::DimensionMismatch, "weights do not match the group order");
  if (group) *group = g;
  return mu;
}

Json rep_to_json(const UnitaryRep& rep, const Json& group_ref) {
  Json j;
  j["group"] = group_ref;
  j["dim"] = rep.dim();
  Json mats = Json::array();
  for (const auto& m : rep.matrices()) mats.push_back(to_json(m));
  j["matrices"] = std::move(mats);
  return j;
}

UnitaryRep rep_from_json(const Json& j) {
  const auto g = group_from_json(field(j, "group"));
  std::vector<Mat> mats;
  for (const auto& m : field(j, "matrices")) mats.push_back(matrix_from_json(m));
  if (j.contains("dim"))
    for (const auto& m : mats)
      if (m.rows() != j.at("dim").get<int>()) throw Error(ErrorKind::DimensionMismatch, "'dim' disagrees with matrices");
  return UnitaryRep(g, std::move(mats));
}

Json pdf_to_json(const PositiveDefiniteFunction& phi, const Json& group_ref) {
  Json j;
  j["group"] = group_ref;
  Json vals = Json::array();
  for (cplx v : phi.values()) vals.push_back(to_json(v));
  j["values"] = std::move(vals);
  return j;
}

PositiveDefiniteFunction pdf_from_json(const Json& j) {
  const auto g = group_from_json(field(j, "group"));
  std::vector<cplx> vals;
  for (const auto& v : field(j, "values")) vals.push_back(complex_from_json(v));
  return PositiveDefiniteFunction(g, std::move(vals));
}

Json channel_to_json(const QuantumChannel& c) {
  Json j;
  j["dim_in"] = c.dim_in();
  j["dim_out"] = c.dim_out();
  Json k = Json::array();
  for (const auto& a : c.kraus()) k.push_back(to_json(a));
  j["kraus"] = std::move(k);
  return j;
}

QuantumChannel channel_from_json(const Json& j) {
  std::vector<Mat> kraus;
  for (const auto& a : field(j, "kraus")) kraus.push_back(matrix_from_json(a));
  return QuantumChannel(field(j, "dim_in").get<int>(), field(j, "dim_out").get<int>(), std::move(kraus));
}

Json noiseless_to_json(const NoiselessReport& r) {
  Json j;
  Json blocks = Json::array();
  for (const auto& [n, m] : r.decomposition.blocks) blocks.push_back({n, m});
  j["blocks"] = std::move(blocks);
  j["noiseless"] = r.noiseless;
  j["unitary"] = to_json(r.decomposition.unitary);
  j["seed"] = r.decomposition.seed;
  if (r.peter_weyl) {
    Json pw;
    pw["applicable"] = r.peter_weyl->applicable;
    Json pred = Json::array();
    for (const auto& [n, m] : r.peter_weyl->predicted) pred.push_back({n, m});
    pw["predicted_blocks"] = std::move(pred);
    pw["matches"] = r.peter_weyl->matches;
    Json cfs = Json::array();
    for (const auto& cf : r.peter_weyl->coefficient_functions) {
      Json c;
      c["irrep"] = cf.irrep;
      c["i"] = cf.i;
      c["j"] = cf.j;
      Json vals = Json::array();
      for (cplx v : cf.values) vals.push_back(to_json(v));
      c["values"] = std::move(vals);
      cfs.push_back(std::move(c));
    }
    pw["coefficient_functions"] = std::move(cfs);
    j["peter_weyl"] = std::move(pw);
  }
  return j;
}

Json capacity_to_json(const CapacityResult& r) {
  Json j;
  j["value"] = r.value;
  j["argmax"] = r.argmax;
  j["gap"] = r.optimality_gap;
  j["iterations"] = r.iterations;
  j["units"] = "bits";
  return j;
}

Json moe_to_json(const MoeResult& r) {
  Json j;
  j["value"] = r.estimate;
  j["bound"] = "upper";
  j["witness"] = to_json(r.witness_state);
  j["witness_vector"] = to_json(r.witness);
  j["units"] = "bits";
  return j;
}

Json dichotomy_to_json(const DichotomyResult& r) {
  Json j;
  j["kind"] = r.kind == DichotomyResult::Kind::Extreme ? "extreme" : "random-unitary";
  j["affine_span_dim"] = r.affine_dim;
  if (r.kind == DichotomyResult::Kind::RandomUnitary) {
    j["normal"] = to_json(r.normal);
    j["weights"] = {r.weights[0], r.weights[1]};
    Json diag = Json::array();
    for (const auto& u : r.unitaries) diag.push_back(to_json(Vec(u.diagonal())));
    j["unitary_diagonals"] = std::move(diag);
    j["residual"] = r.residual;
  }
  return j;
}

Json aqbc_sample_to_json(const AqbcSample& s) {
  Json j;
  j["index"] = s.index;
  j["xi"] = to_json(s.xi);
  j["certified"] = s.certified;
  j["refined"] = s.refined;
  j["rank"] = s.rank;
  j["span_dim"] = s.span_dim;
  j["affine_span_dim"] = s.affine_dim;
  j["reason"] = s.reason;
  return j;
}

Json error_to_json(const std::string& kind, const std::string& message) {
  Json j;
  j["error"]["kind"] = kind;
  j["error"]["message"] = message;
  return j;
}

}  // namespace qhc::io
