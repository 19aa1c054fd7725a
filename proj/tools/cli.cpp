#include "cli.hpp"

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "qhc/channel.hpp"
#include "qhc/error.hpp"
#include "qhc/expr.hpp"
#include "qhc/fixed_points.hpp"
#include "qhc/io.hpp"
#include "qhc/schur.hpp"
#include "qhc/spectra.hpp"

namespace qhc::cli {

namespace {

using io::Json;

constexpr const char* kConventions =
    "Conventions:\n"
    "  Group elements are indexed 0..|G|-1 with 0 the identity; every matrix\n"
    "  indexes rows and columns in that order (see `group show` for labels).\n"
    "  s3 orders e,(123),(132),(12),(23),(13); d{n} orders r^k s^j as k + n*j;\n"
    "  products order (g,h) as g*|H| + h.\n"
    "  Channels act on density matrices as rho -> sum a rho a^*.  Theta(mu) has\n"
    "  Kraus sqrt(mu(s)) r_s with r_s d_t = d_{t s^-1}; ThetaHat(phi) is Schur\n"
    "  multiplication by [phi(s t^-1)].\n"
    "  Choi matrix J = sum E_st kron Phi(E_st), unnormalized (partial trace over\n"
    "  the output is I).\n"
    "  Entropies and capacities are in bits (log base 2).\n"
    "  Tolerances: residuals 1e-10 (spectral norm), ranks 1e-9 relative.\n"
    "Literals: comma-separated exact expressions such as \"i/sqrt(10),3/sqrt(10)\";\n"
    "  measures also accept `haar` and `delta`, functions `delta` and `ones`.\n"
    "Exit codes: 0 ok, 2 validation error, 3 numerical failure, 64 unknown subcommand.";

const std::set<std::string> kTopLevel = {"group",    "channel",   "extremality", "bloch-orbit", "aqbc-search",
                                         "capacity", "moe",       "eb-test",     "fixpoints",   "noiseless",
                                         "duality",  "replay"};
const std::map<std::string, std::set<std::string>> kNested = {
    {"group", {"build", "show"}}, {"channel", {"theta", "theta-hat", "weyl", "compose", "check"}}};

struct Options {
  std::string group, measure, phi, irrep, xi, channel, outer, inner, q, format = "json", out, manifest, inject;
  std::string manifest_file;
  int d = 0;
  int samples = 1000;
  int threads = 0;
  bool optimize = false;
  bool restricted = false;
  std::optional<std::uint64_t> seed;
  double tol = kTol;
};

struct Document {
  std::string text;
  std::vector<Json> inputs;  // file references
};

bool looks_inline(const std::string& s) { return !s.empty() && (s[0] == '{' || s[0] == '['); }

Json read_json_arg(const std::string& arg, std::vector<Json>& inputs) {
  if (looks_inline(arg)) return Json::parse(arg);
  std::ifstream f(arg);
  if (!f) throw Error(ErrorKind::ParseError, "cannot open '" + arg + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  inputs.push_back({{"path", arg}, {"fnv1a64", fnv1a64(ss.str())}});
  return Json::parse(ss.str());
}

GroupPtr load_group(const Options& o, std::vector<Json>& inputs) {
  if (o.group.empty()) throw Error(ErrorKind::ParseError, "--group is required");
  if (looks_inline(o.group) || o.group.ends_with(".json")) return io::group_from_json(read_json_arg(o.group, inputs));
  return io::group_from_json(Json(o.group));
}

ProbabilityMeasure parse_measure(const std::string& text, const FiniteGroup& g) {
  if (text == "haar" || text == "uniform") return haar(g);
  if (text == "delta") return ProbabilityMeasure::point_mass(g.order(), 0);
  auto w = parse_real_list(text);
  if (static_cast<int>(w.size()) != g.order())
    throw Error(ErrorKind::DimensionMismatch, "measure has " + std::to_string(w.size()) + " weights, group order is " +
                                                  std::to_string(g.order()));
  return ProbabilityMeasure(std::move(w));
}

UnitaryRep select_irrep(const std::string& sel, const GroupPtr& g) {
  if (sel == "regular") return regular_reps(g).first;
  const auto irreps = irrep_catalog(g);
  if (!sel.empty() && sel.back() == 'd') {
    const int dim = std::stoi(sel.substr(0, sel.size() - 1));
    for (const auto& r : irreps)
      if (r.dim() == dim) return r;
    throw Error(ErrorKind::InvalidRep, "no irrep of dimension " + std::to_string(dim));
  }
  size_t idx = 0;
  try {
    idx = std::stoul(sel);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "--irrep takes an index, '<d>d' or 'regular'");
  }
  if (idx >= irreps.size()) throw Error(ErrorKind::InvalidRep, "irrep index out of range");
  return irreps[idx];
}

Vec parse_vector(const std::string& text) {
  const auto z = parse_complex_list(text);
  Vec v(z.size());
  for (size_t i = 0; i < z.size(); ++i) v(i) = z[i];
  return v;
}

bool has_phi_source(const Options& o) { return !o.phi.empty() || !o.xi.empty(); }

PositiveDefiniteFunction load_phi(const Options& o, const GroupPtr& g) {
  if (!o.phi.empty() && !o.xi.empty()) throw Error(ErrorKind::ParseError, "give either --phi or --irrep/--xi");
  if (!o.phi.empty()) {
    std::vector<cplx> vals;
    if (o.phi == "delta") {
      vals.assign(g->order(), 0.0);
      vals[0] = 1.0;
    } else if (o.phi == "ones") {
      vals.assign(g->order(), 1.0);
    } else {
      vals = parse_complex_list(o.phi);
    }
    if (static_cast<int>(vals.size()) != g->order())
      throw Error(ErrorKind::DimensionMismatch, "phi needs one value per group element");
    return PositiveDefiniteFunction(g, std::move(vals));
  }
  if (o.xi.empty()) throw Error(ErrorKind::ParseError, "give --phi or --irrep with --xi");
  const auto rep = select_irrep(o.irrep.empty() ? "regular" : o.irrep, g);
  const Vec xi = parse_vector(o.xi);
  if (xi.size() != rep.dim()) throw Error(ErrorKind::DimensionMismatch, "xi length differs from the irrep dimension");
  return pdf_from_rep(rep, xi);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// A channel built from --channel, or from --group with --measure or a phi source.
struct ChannelSource {
  std::optional<QuantumChannel> channel;
  GroupPtr group;
  std::optional<ProbabilityMeasure> mu;
  std::optional<PositiveDefiniteFunction> phi;
};

ChannelSource load_channel_source(const Options& o, std::vector<Json>& inputs) {
  ChannelSource src;
  if (!o.channel.empty()) {
    if (!o.group.empty()) throw Error(ErrorKind::ParseError, "give either --channel or --group");
    src.channel = io::channel_from_json(read_json_arg(o.channel, inputs));
    return src;
  }
  src.group = load_group(o, inputs);
  if (!o.measure.empty() && has_phi_source(o)) throw Error(ErrorKind::ParseError, "give either --measure or --phi/--xi");
  if (!o.measure.empty()) {
    src.mu = parse_measure(o.measure, *src.group);
    src.channel = theta(*src.mu, src.group);
  } else {
    src.phi = load_phi(o, src.group);
    src.channel = theta_hat(*src.phi);
  }
  return src;
}

Json bistochastic_json(const BistochasticReport& r) {
  return {{"verdict", r.verdict}, {"tp_residual", r.tp_residual}, {"unital_residual", r.unital_residual}};
}

Document cmd_group(const std::string& sub, const Options& o) {
  Document doc;
  const auto g = load_group(o, doc.inputs);
  if (sub == "build") {
    doc.text = dump(io::group_to_json(*g));
    return doc;
  }
  Json j;
  j["order"] = g->order();
  j["labels"] = g->labels();
  j["abelian"] = g->is_abelian();
  std::vector<int> orders;
  for (int s = 0; s < g->order(); ++s) orders.push_back(g->element_order(s));
  j["element_orders"] = orders;
  j["inverses"] = g->inverses();
  if (g->is_abelian()) {
    Json f = Json::array();
    for (const auto& c : g->abelian_factors()) f.push_back({{"generator", c.generator}, {"order", c.order}});
    j["abelian_factors"] = f;
  }
  try {
    std::vector<int> dims;
    for (const auto& r : irrep_catalog(g)) dims.push_back(r.dim());
    j["irrep_dims"] = dims;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnsupportedGroup) throw;
    j["irrep_dims"] = nullptr;
  }
  doc.text = dump(j);
  return doc;
}

Document cmd_channel(const std::string& sub, const Options& o) {
  Document doc;
  if (sub == "theta") {
    const auto g = load_group(o, doc.inputs);
    if (o.measure.empty()) throw Error(ErrorKind::ParseError, "--measure is required");
    doc.text = dump(io::channel_to_json(theta(parse_measure(o.measure, *g), g)));
  } else if (sub == "theta-hat") {
    const auto g = load_group(o, doc.inputs);
    doc.text = dump(io::channel_to_json(theta_hat(load_phi(o, g))));
  } else if (sub == "weyl") {
    if (o.d < 1) throw Error(ErrorKind::ParseError, "--d must be positive");
    const auto w = o.q == "haar" ? std::vector<double>(o.d * o.d, 1.0 / (o.d * o.d)) : parse_real_list(o.q);
    doc.text = dump(io::channel_to_json(weyl_covariant(ProbabilityMeasure(w), o.d)));
  } else if (sub == "compose") {
    const auto outer = io::channel_from_json(read_json_arg(o.outer, doc.inputs));
    const auto inner = io::channel_from_json(read_json_arg(o.inner, doc.inputs));
    doc.text = dump(io::channel_to_json(compose(outer, inner)));
  } else {
    const auto src = load_channel_source(o, doc.inputs);
    const auto& c = *src.channel;
    Json j;
    j["dim_in"] = c.dim_in();
    j["dim_out"] = c.dim_out();
    j["kraus_count"] = c.kraus_count();
    j["choi_rank"] = choi_rank(c);
    j["bistochastic"] = bistochastic_json(is_bistochastic(c, o.tol));
    if (c.dim_in() == c.dim_out()) {
      const auto u = is_unitary_conjugation(c);
      j["unitary_conjugation"] = u ? io::to_json(*u) : Json(nullptr);
      const auto ppt = choi_ppt(c, o.tol);
      j["ppt"] = {{"verdict", ppt.verdict}, {"min_pt_eigenvalue", ppt.min_pt_eigenvalue}};
    }
    doc.text = dump(j);
  }
  return doc;
}

Document cmd_extremality(const Options& o) {
  Document doc;
  const auto g = load_group(o, doc.inputs);
  const auto phi = load_phi(o, g);
  const auto rep = is_maximally_extreme(phi);
  const auto cm = correlation_matrix(phi);
  Json j;
  j["verdict"] = rep.verdict ? "maximally-extreme" : "not-maximally-extreme";
  j["extreme_in_bis"] = rep.extreme_in_bis;
  j["rank"] = rep.rank;
  j["span_dim"] = rep.span_dim;
  j["r_squared"] = rep.rank * rep.rank;
  j["rank_at_least_two"] = rep.rank_at_least_two;
  j["non_real"] = rep.non_real;
  j["aqbc_violation"] = rep.aqbc_violation;
  j["affine_span_dim"] = affine_span_dim(bloch_vectors(cm).vectors);
  if (cm.rank == 2) j["dichotomy"] = io::dichotomy_to_json(dichotomy_decompose(cm));
  doc.text = dump(j);
  return doc;
}

Document cmd_bloch(const Options& o) {
  Document doc;
  const auto g = load_group(o, doc.inputs);
  const auto orbit = bloch_vectors(correlation_matrix(load_phi(o, g)));
  if (o.format != "csv" && o.format != "json") throw Error(ErrorKind::ParseError, "--format is json or csv");
  doc.text = export_bloch_orbit(orbit, g->labels(), o.group, o.format == "csv" ? ExportFormat::Csv : ExportFormat::Json);
  return doc;
}

Document cmd_aqbc(const Options& o) {
  Document doc;
  const auto g = load_group(o, doc.inputs);
  const auto rep = select_irrep(o.irrep.empty() ? "0" : o.irrep, g);
  AqbcConfig cfg;
  cfg.seed = *o.seed;
  cfg.n_samples = o.samples;
  cfg.optimize = o.optimize;
  if (!o.inject.empty()) cfg.injected.push_back(parse_vector(o.inject));
  const auto res = aqbc_search(rep, cfg);
  std::map<std::string, int> reasons;
  Json certs = Json::array();
  for (const auto& s : res.samples) {
    ++reasons[s.reason];
    if (s.certified) certs.push_back(io::aqbc_sample_to_json(s));
  }
  Json j;
  j["seed"] = cfg.seed;
  j["samples"] = static_cast<int>(res.samples.size());
  j["certified"] = static_cast<int>(certs.size());
  j["certified_fraction"] = res.samples.empty() ? 0.0 : static_cast<double>(certs.size()) / res.samples.size();
  j["outcomes"] = reasons;
  j["certificates"] = std::move(certs);
  doc.text = dump(j);
  return doc;
}

Document cmd_capacity(const Options& o) {
  Document doc;
  const auto g = load_group(o, doc.inputs);
  CapacityConfig cfg;
  cfg.seed = *o.seed;
  doc.text = dump(io::capacity_to_json(schur_capacity(load_phi(o, g), cfg)));
  return doc;
}

Document cmd_moe(const Options& o) {
  Document doc;
  auto src = load_channel_source(o, doc.inputs);
  MoeConfig cfg;
  cfg.seed = *o.seed;
  Json j;
  if (o.restricted) {
    if (src.mu) {
      const auto e = conditional_expectation(src.group, ExpectationTarget::Diagonal);
      j = io::moe_to_json(min_output_entropy(compose(*src.channel, e), cfg));
      j["formula"] = moe_theta_restricted(*src.mu, *src.group);
      j["composition"] = "Theta(mu) o E_diagonal";
    } else if (src.phi) {
      const auto e = conditional_expectation(src.group, ExpectationTarget::GroupAlgebra);
      j = io::moe_to_json(min_output_entropy(compose(*src.channel, e), cfg));
      j["formula"] = moe_theta_hat_restricted(*src.phi);
      j["composition"] = "ThetaHat(phi) o E_group_algebra";
    } else {
      throw Error(ErrorKind::ParseError, "--restricted needs --group with --measure or --phi/--xi");
    }
  } else {
    j = io::moe_to_json(min_output_entropy(*src.channel, cfg));
  }
  doc.text = dump(j);
  return doc;
}

Document cmd_eb(const Options& o) {
  Document doc;
  const auto src = load_channel_source(o, doc.inputs);
  if (!src.group) throw Error(ErrorKind::ParseError, "eb-test needs --group with --measure or --phi/--xi");
  const auto r = src.mu ? eb_test_theta(*src.mu, src.group) : eb_test_theta_hat(*src.phi);
  const auto ppt = choi_ppt(*src.channel);
  Json j;
  j["verdict"] = r.entanglement_breaking ? "EB" : "NotEB";
  j["reason"] = r.reason;
  j["pt_witness"] = r.pt_witness ? Json(*r.pt_witness) : Json(nullptr);
  j["ppt"] = {{"verdict", ppt.verdict}, {"min_pt_eigenvalue", ppt.min_pt_eigenvalue}};
  doc.text = dump(j);
  return doc;
}

Document cmd_fixpoints(const Options& o) {
  Document doc;
  const auto src = load_channel_source(o, doc.inputs);
  const auto fix = fixed_point_space(*src.channel);
  const auto alg = is_algebra(fix);
  Json j;
  j["dim"] = fix.dim();
  j["is_algebra"] = alg.verdict;
  j["algebra_check"] = alg.reason;
  if (src.mu) {
    const auto v = verify_fix_theta(*src.mu, src.group);
    j["harmonic_dim"] = harmonic_functions(*src.mu, *src.group).dim();
    j["structure_theorem"] = {{"holds", v.holds}, {"lhs_dim", v.lhs_dim}, {"rhs_dim", v.rhs_dim}};
  } else if (src.phi) {
    const auto v = verify_fix_theta_hat(*src.phi);
    j["fixing_subgroup"] = src.phi->fixing_subgroup();
    j["structure_theorem"] = {{"holds", v.holds}, {"lhs_dim", v.lhs_dim}, {"rhs_dim", v.rhs_dim}};
  }
  Json basis = Json::array();
  for (const auto& b : fix.basis()) basis.push_back(io::to_json(b));
  j["basis"] = std::move(basis);
  doc.text = dump(j);
  return doc;
}

Document cmd_noiseless(const Options& o) {
  Document doc;
  const auto src = load_channel_source(o, doc.inputs);
  const auto r = src.mu ? noiseless_subsystems(*src.mu, src.group, *o.seed) : noiseless_subsystems(*src.channel, *o.seed);
  doc.text = dump(io::noiseless_to_json(r));
  return doc;
}

Document cmd_duality(const Options& o) {
  Document doc;
  const auto g = load_group(o, doc.inputs);
  if (o.measure.empty()) throw Error(ErrorKind::ParseError, "--measure is required");
  const auto r = duality_check(parse_measure(o.measure, *g), g);
  Json j;
  j["residual"] = r.residual;
  j["literal_residual"] = r.literal_residual;
  j["tolerance"] = o.tol;
  j["holds"] = r.residual <= o.tol;
  doc.text = dump(j);
  return doc;
}

void add_group_options(CLI::App* s, Options& o) {
  s->add_option("--group", o.group, "Group alias (z{n}, z2^{n}, s3, s4, d{n}, d4-semidirect), JSON file or inline JSON");
}

void add_phi_options(CLI::App* s, Options& o) {
  s->add_option("--phi", o.phi, "Positive definite function values in group order");
  s->add_option("--irrep", o.irrep, "Representation: catalog index, '<d>d' (first irrep of dimension d) or 'regular'");
  s->add_option("--xi", o.xi, "Unit vector xi, phi(s) = <pi(s) xi, xi>");
}

void add_source_options(CLI::App* s, Options& o) {
  add_group_options(s, o);
  s->add_option("--measure", o.measure, "Probability weights in group order (Theta(mu))");
  add_phi_options(s, o);
  s->add_option("--channel", o.channel, "Channel JSON file or inline JSON");
}

void add_common(CLI::App* s, Options& o, bool stochastic) {
  s->add_option("--out", o.out, "Write the document to this path instead of stdout");
  s->add_option("--manifest", o.manifest_file, "Write the run manifest here (default: <out>.manifest.json or stderr)");
  s->add_option("--threads", o.threads, "OpenMP threads (0 = runtime default); results do not depend on it");
  s->add_option("--tol", o.tol, "Tolerance where documented (default 1e-10)");
  auto* seed = s->add_option("--seed", o.seed, "Random seed (u64)");
  if (stochastic) seed->required();
  s->footer(kConventions);
}

int finish_error(std::ostream& out, const std::string& kind, const std::string& msg, int code) {
  out << io::error_to_json(kind, msg).dump(2) << "\n";
  return code;
}

// Replays a manifest in-process and compares output digests.
int replay(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path);
  if (!f) return finish_error(out, "ValidationError", "cannot open manifest '" + path + "'", kExitValidation);
  Json m;
  try {
    m = Json::parse(f);
  } catch (const std::exception& e) {
    return finish_error(out, "ParseError", e.what(), kExitValidation);
  }
  std::vector<std::string> args;
  const auto argv = m.at("argv").get<std::vector<std::string>>();
  for (size_t i = 0; i < argv.size(); ++i) {
    if (argv[i] == "--out" || argv[i] == "--manifest") {
      ++i;
      continue;
    }
    args.push_back(argv[i]);
  }
  std::ostringstream captured, side;
  const int code = run(args, captured, side);
  const std::string expected = m.at("outputs").at(0).at("fnv1a64").get<std::string>();
  const std::string actual = fnv1a64(captured.str());
  Json j;
  j["manifest"] = path;
  j["exit_code"] = code;
  j["expected"] = expected;
  j["actual"] = actual;
  j["reproduced"] = code == kExitOk && expected == actual;
  out << j.dump(2) << "\n";
  (void)err;
  return j["reproduced"].get<bool>() ? kExitOk : kExitNumerical;
}

}  // namespace

std::string fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const bool help = !args.empty() && (args[0] == "--help" || args[0] == "-h");
  if (!help && (args.empty() || !kTopLevel.count(args[0])))
    return finish_error(out, "UnknownSubcommand", args.empty() ? "no subcommand given" : "unknown subcommand '" + args[0] + "'",
                        kExitUnknownSubcommand);
  if (!help && kNested.count(args[0])) {
    const auto& allowed = kNested.at(args[0]);
    const bool sub_help = args.size() > 1 && (args[1] == "--help" || args[1] == "-h");
    if (!sub_help && (args.size() < 2 || !allowed.count(args[1])))
      return finish_error(out, "UnknownSubcommand",
                          args.size() < 2 ? args[0] + " needs a subcommand" : "unknown subcommand '" + args[1] + "'",
                          kExitUnknownSubcommand);
  }

  Options o;
  std::string replay_path;
  CLI::App app{"Quantum channels from finite groups: Theta(mu), ThetaHat(phi), extremality, capacity, fixed points.",
               "qhc"};
  app.footer(kConventions);
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::map<CLI::App*, std::string> names;
  auto* group = app.add_subcommand("group", "Build or inspect a finite group");
  group->require_subcommand(1);
  for (const char* n : {"build", "show"}) {
    auto* s = group->add_subcommand(n, std::string(n) == "build" ? "Print the group table JSON" : "Labels, orders, irrep dimensions");
    add_group_options(s, o);
    add_common(s, o, false);
    names[s] = std::string("group ") + n;
  }
  auto* channel = app.add_subcommand("channel", "Construct or check channels (JSON channel format)");
  channel->require_subcommand(1);
  {
    auto* s = channel->add_subcommand("theta", "Theta(mu): Kraus sqrt(mu(s)) r_s");
    add_group_options(s, o);
    s->add_option("--measure", o.measure, "Probability weights in group order");
    add_common(s, o, false);
    names[s] = "channel theta";
    s = channel->add_subcommand("theta-hat", "ThetaHat(phi): Schur multiplication by [phi(s t^-1)]");
    add_group_options(s, o);
    add_phi_options(s, o);
    add_common(s, o, false);
    names[s] = "channel theta-hat";
    s = channel->add_subcommand("weyl", "Weyl-covariant channel from q on Z_d x Z_d, (s,t) at index s*d + t");
    s->add_option("--d", o.d, "Dimension d")->required();
    s->add_option("--q", o.q, "Weights q(s,t) or 'haar'")->required();
    add_common(s, o, false);
    names[s] = "channel weyl";
    s = channel->add_subcommand("compose", "outer o inner, Kraus {a_i b_j}");
    s->add_option("--outer", o.outer, "Channel applied second (JSON)")->required();
    s->add_option("--inner", o.inner, "Channel applied first (JSON)")->required();
    add_common(s, o, false);
    names[s] = "channel compose";
    s = channel->add_subcommand("check", "Bistochastic residuals, Choi rank, unitary conjugation, PPT (--tol applies)");
    add_source_options(s, o);
    add_common(s, o, false);
    names[s] = "channel check";
  }
  auto sub = [&](const char* name, const char* desc, bool stochastic, auto&& extra) {
    auto* s = app.add_subcommand(name, desc);
    extra(s);
    add_common(s, o, stochastic);
    names[s] = name;
    return s;
  };
  sub("extremality", "Maximal extremality of phi: span test, rank, AQBC certificate, rank-2 dichotomy", false,
      [&](CLI::App* s) {
        add_group_options(s, o);
        add_phi_options(s, o);
      });
  sub("bloch-orbit", "Bloch vectors of the orbit pi(s)^* xi (Gell-Mann basis, tr(s_a s_b) = 2 delta)", false,
      [&](CLI::App* s) {
        add_group_options(s, o);
        add_phi_options(s, o);
        s->add_option("--format", o.format, "json or csv (17 significant digits)");
      });
  sub("aqbc-search", "Seeded search for maximally extreme non-real phi = <pi(.) xi, xi>", true, [&](CLI::App* s) {
    add_group_options(s, o);
    s->add_option("--irrep", o.irrep, "Representation of dimension >= 2: index, '<d>d' or 'regular'");
    s->add_option("--samples", o.samples, "Number of random unit vectors");
    s->add_flag("--optimize", o.optimize, "Refine uncertified samples by local search");
    s->add_option("--inject", o.inject, "Extra xi evaluated as sample 0");
  });
  sub("capacity", "Quantum capacity of ThetaHat(phi) in bits: max_mu H(mu) - S(sum mu(s) x_s)", true, [&](CLI::App* s) {
    add_group_options(s, o);
    add_phi_options(s, o);
  });
  sub("moe", "Minimum output entropy upper bound in bits (multi-start search over pure inputs)", true,
      [&](CLI::App* s) {
        add_source_options(s, o);
        s->add_flag("--restricted", o.restricted,
                    "Use Theta(mu) o E_diagonal or ThetaHat(phi) o E_group_algebra and report the closed formula");
      });
  sub("eb-test", "Entanglement-breaking verdict with a partial-transpose witness", false,
      [&](CLI::App* s) { add_source_options(s, o); });
  sub("fixpoints", "Fixed-point space, algebra check and structure theorem comparison", false,
      [&](CLI::App* s) { add_source_options(s, o); });
  sub("noiseless", "Block decomposition of the fixed-point algebra; n_k > 1 blocks are noiseless", true,
      [&](CLI::App* s) { add_source_options(s, o); });
  sub("duality", "Fourier equivalence residual between Theta(mu) and ThetaHat(mu_hat) (--tol applies)", false,
      [&](CLI::App* s) {
        add_group_options(s, o);
        s->add_option("--measure", o.measure, "Probability weights in group order");
      });
  auto* rp = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  rp->add_option("manifest", replay_path, "Manifest JSON")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    std::string all;
    for (auto* a = &app; a;) {
      auto subs = a->get_subcommands();
      if (subs.empty()) break;
      a = subs.front();
      all = a->help();
    }
    out << (all.empty() ? app.help() : all);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return finish_error(out, "ValidationError", e.what(), kExitValidation);
  }

  if (rp->parsed()) return replay(replay_path, out, err);

  CLI::App* leaf = nullptr;
  for (const auto& [s, name] : names)
    if (s->parsed()) leaf = s;
  const std::string command = names[leaf];
  if (o.threads > 0) omp_set_num_threads(o.threads);

  Document doc;
  try {
    if (command.starts_with("group ")) doc = cmd_group(command.substr(6), o);
    else if (command.starts_with("channel ")) doc = cmd_channel(command.substr(8), o);
    else if (command == "extremality") doc = cmd_extremality(o);
    else if (command == "bloch-orbit") doc = cmd_bloch(o);
    else if (command == "aqbc-search") doc = cmd_aqbc(o);
    else if (command == "capacity") doc = cmd_capacity(o);
    else if (command == "moe") doc = cmd_moe(o);
    else if (command == "eb-test") doc = cmd_eb(o);
    else if (command == "fixpoints") doc = cmd_fixpoints(o);
    else if (command == "noiseless") doc = cmd_noiseless(o);
    else doc = cmd_duality(o);
  } catch (const Error& e) {
    const int code = e.kind() == ErrorKind::NumericalFailure ? kExitNumerical : kExitValidation;
    return finish_error(out, std::string(error_kind_name(e.kind())), e.what(), code);
  } catch (const nlohmann::json::exception& e) {
    return finish_error(out, "ParseError", e.what(), kExitValidation);
  } catch (const std::invalid_argument& e) {
    return finish_error(out, "ParseError", e.what(), kExitValidation);
  }

  std::string target = "stdout";
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) return finish_error(out, "ValidationError", "cannot write '" + o.out + "'", kExitValidation);
    f << doc.text;
    target = o.out;
  } else {
    out << doc.text;
  }

  Json manifest;
  manifest["command"] = command;
  manifest["argv"] = args;
  manifest["inputs"] = doc.inputs;
  manifest["seed"] = o.seed ? Json(*o.seed) : Json(nullptr);
  manifest["tool_version"] = kToolVersion;
  manifest["outputs"] = Json::array({{{"target", target}, {"fnv1a64", fnv1a64(doc.text)}, {"bytes", doc.text.size()}}});
  std::string mpath = o.manifest_file;
  if (mpath.empty() && !o.out.empty()) mpath = o.out + ".manifest.json";
  if (!mpath.empty()) {
    std::ofstream f(mpath);
    f << manifest.dump(2) << "\n";
  } else {
    err << manifest.dump() << "\n";
  }
  return kExitOk;
}

}  // namespace qhc::cli
