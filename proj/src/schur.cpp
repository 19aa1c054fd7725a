#include "qhc/schur.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qhc/error.hpp"

namespace qhc {

namespace {

// Real coordinates of a Hermitian r x r matrix: trace, then Gell-Mann components.
RVec hermitian_coordinates(const Mat& h, const std::vector<Mat>& gm) {
  RVec c(gm.size() + 1);
  c(0) = h.trace().real();
  for (size_t k = 0; k < gm.size(); ++k) c(k + 1) = (h * gm[k]).trace().real();
  return c;
}

RMat centred_points(const std::vector<RVec>& vectors) {
  const int n = static_cast<int>(vectors.size());
  const int k = static_cast<int>(vectors[0].size());
  RVec mean = RVec::Zero(k);
  for (const auto& v : vectors) mean += v;
  mean /= n;
  RMat m(k, n);
  for (int j = 0; j < n; ++j) m.col(j) = vectors[j] - mean;
  return m;
}

Mat sigma_dot(const RVec& n) {
  Mat s(2, 2);
  s << n(2), cplx(n(0), -n(1)), cplx(n(0), n(1)), -n(2);
  return s;
}

void fix_phase(Vec& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

Vec random_unit_vector(int d, std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss;
  Vec v(d);
  for (int i = 0; i < d; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = cplx(re, im);
  }
  return v / v.norm();
}

// Orbit vectors pi(s)^* xi (unnormalized phi not needed; rep is unitary).
std::vector<Vec> orbit_of(const UnitaryRep& rep, const Vec& xi) {
  std::vector<Vec> out;
  for (int s = 0; s < rep.group().order(); ++s) out.push_back(rep(s).adjoint() * xi);
  return out;
}

// Smallest singular value that must be nonzero for a full affine span,
// computed on the orbit directly.
double affine_margin(const std::vector<Vec>& orbit, const std::vector<Mat>& gm) {
  std::vector<RVec> pts;
  for (const auto& v : orbit) {
    const Mat h = v * v.adjoint();
    RVec p(gm.size());
    for (size_t k = 0; k < gm.size(); ++k) p(k) = (h * gm[k]).trace().real();
    pts.push_back(p);
  }
  const RMat m = centred_points(pts);
  Eigen::JacobiSVD<RMat> svd(m);
  const auto& sv = svd.singularValues();
  const int need = static_cast<int>(gm.size());
  return sv.size() >= need ? sv(need - 1) : 0.0;
}

AqbcSample evaluate_sample(const UnitaryRep& rep, int index, const Vec& xi) {
  AqbcSample s{index, xi, false, false, 0, 0, 0, ""};
  const auto phi = pdf_from_rep(rep, xi);
  const auto cm = correlation_matrix(phi);
  const auto rep_extreme = is_maximally_extreme(phi);
  s.rank = rep_extreme.rank;
  s.span_dim = rep_extreme.span_dim;
  s.affine_dim = affine_span_dim(bloch_vectors(cm).vectors);
  if (!rep_extreme.non_real) s.reason = "real correlation matrix";
  else if (!rep_extreme.rank_at_least_two) s.reason = "rank one";
  else if (!rep_extreme.aqbc_violation) s.reason = "not extreme";
  else {
    s.certified = true;
    s.reason = "certified";
  }
  return s;
}

}  // namespace

CorrelationMatrix CorrelationMatrix::from_matrix(const Mat& a) {
  const int d = static_cast<int>(a.rows());
  if (d < 1 || a.cols() != d) throw Error(ErrorKind::DimensionMismatch, "correlation matrix must be square");
  if (!is_hermitian(a, kTol)) throw Error(ErrorKind::NotPositiveDefinite, "matrix is not Hermitian");
  for (int i = 0; i < d; ++i)
    if (std::abs(a(i, i) - 1.0) > 1e-12) throw Error(ErrorKind::NotPositiveDefinite, "diagonal entries must be 1");
  const auto eig = eigh(0.5 * (a + a.adjoint()));
  if (eig.values(0) < -kTol) throw Error(ErrorKind::NotPositiveDefinite, "matrix has a negative eigenvalue");
  const double top = eig.values(d - 1);
  int rank = 0;
  for (int k = 0; k < d; ++k)
    if (eig.values(k) > kRankTol * top) ++rank;
  Mat x(d, rank);
  for (int k = 0; k < rank; ++k) x.col(k) = eig.vectors.col(d - 1 - k) * std::sqrt(eig.values(d - 1 - k));
  return {a, rank, x};
}

CorrelationMatrix correlation_matrix(const PositiveDefiniteFunction& phi) {
  const auto triple = gns(phi);
  const int n = phi.group().order();
  Mat x(n, triple.rank);
  for (int s = 0; s < n; ++s) x.row(s) = (triple.rep(s).adjoint() * triple.xi).adjoint();
  return {gram_matrix(phi.group(), phi.values()), triple.rank, x};
}

std::vector<Mat> gell_mann_basis(int r) {
  std::vector<Mat> out;
  for (int j = 0; j < r; ++j)
    for (int k = j + 1; k < r; ++k) {
      Mat m = Mat::Zero(r, r);
      m(j, k) = m(k, j) = 1.0;
      out.push_back(m);
    }
  for (int j = 0; j < r; ++j)
    for (int k = j + 1; k < r; ++k) {
      Mat m = Mat::Zero(r, r);
      m(j, k) = cplx(0, -1);
      m(k, j) = cplx(0, 1);
      out.push_back(m);
    }
  for (int l = 1; l < r; ++l) {
    Mat m = Mat::Zero(r, r);
    const double c = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) m(j, j) = c;
    m(l, l) = -l * c;
    out.push_back(m);
  }
  return out;
}

ExtremeReport is_extreme_correlation(const CorrelationMatrix& a) {
  const int r = a.rank;
  const auto gm = gell_mann_basis(r);
  RMat coords(r * r, a.dim());
  for (int j = 0; j < a.dim(); ++j) {
    const Vec v = a.xi(j);
    coords.col(j) = hermitian_coordinates(v * v.adjoint(), gm);
  }
  const int span = numerical_rank(coords);
  return {span == r * r, span, r};
}

BlochOrbit bloch_vectors(const CorrelationMatrix& a) {
  BlochOrbit orbit{a.rank, {}, gell_mann_basis(a.rank)};
  for (int j = 0; j < a.dim(); ++j) {
    const Vec v = a.xi(j);
    const Mat h = v * v.adjoint();
    RVec b(orbit.generators.size());
    for (size_t k = 0; k < orbit.generators.size(); ++k) b(k) = (h * orbit.generators[k]).trace().real();
    orbit.vectors.push_back(b);
  }
  return orbit;
}

Mat bloch_state(const BlochOrbit& orbit, const RVec& v) {
  Mat m = Mat::Identity(orbit.rank, orbit.rank) / static_cast<double>(orbit.rank);
  for (size_t k = 0; k < orbit.generators.size(); ++k) m += 0.5 * v(k) * orbit.generators[k];
  return m;
}

int affine_span_dim(const std::vector<RVec>& vectors) {
  if (vectors.empty()) throw Error(ErrorKind::EmptyInput, "no vectors");
  if (vectors[0].size() == 0) return 0;
  // Absolute scale: Bloch vectors are bounded, so differences below 1e-9 are noise.
  const RMat m = centred_points(vectors);
  Eigen::JacobiSVD<RMat> svd(m);
  int rank = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > kRankTol * std::max(1.0, svd.singularValues()(0))) ++rank;
  return rank;
}

MaximallyExtremeReport is_maximally_extreme(const PositiveDefiniteFunction& phi) {
  const auto cm = correlation_matrix(phi);
  const auto ext = is_extreme_correlation(cm);
  MaximallyExtremeReport r;
  r.extreme_in_bis = ext.verdict;
  r.rank = ext.rank;
  r.span_dim = ext.span_dim;
  r.rank_at_least_two = ext.rank >= 2;
  r.non_real = !phi.is_real(kTol);
  r.verdict = ext.verdict && r.rank_at_least_two;
  r.aqbc_violation = r.verdict && r.non_real;
  return r;
}

DichotomyResult dichotomy_decompose(const CorrelationMatrix& a) {
  if (a.rank != 2) throw Error(ErrorKind::RankNotTwo, "dichotomy needs a rank-2 correlation matrix");
  const int d = a.dim();
  const auto orbit = bloch_vectors(a);
  const auto& b = orbit.vectors;
  DichotomyResult res;
  res.affine_dim = affine_span_dim(b);
  if (res.affine_dim == 3) {
    res.kind = DichotomyResult::Kind::Extreme;
    return res;
  }
  res.kind = DichotomyResult::Kind::RandomUnitary;

  RVec n(3);
  if (res.affine_dim == 2) {
    Eigen::JacobiSVD<RMat> svd(centred_points(b), Eigen::ComputeFullU);
    n = svd.matrixU().col(2);
  } else if (res.affine_dim == 1) {
    // Two distinct points on the sphere: the bisecting plane normal.
    int other = 0;
    for (int j = 1; j < d; ++j)
      if ((b[j] - b[0]).norm() > 1e-6) {
        other = j;
        break;
      }
    const RVec sum = b[0] + b[other];
    if (sum.norm() > 1e-9) {
      n = sum.normalized();
    } else {
      RVec seed = RVec::Unit(3, 0);
      if (std::abs(b[0](0)) > 0.9) seed = RVec::Unit(3, 1);
      n = (seed - seed.dot(b[0]) * b[0]).normalized();
    }
  } else {
    n = b[0].normalized();
  }
  RVec mean = RVec::Zero(3);
  for (const auto& v : b) mean += v;
  double side = n.dot(mean);
  if (std::abs(side) < 1e-12)
    for (int k = 0; k < 3; ++k)
      if (std::abs(n(k)) > 1e-12) {
        side = n(k);
        break;
      }
  if (side < 0) n = -n;
  res.normal = n;

  // Eigenbasis of n.sigma: e1 for +1, e2 for -1.
  const auto eig = eigh(sigma_dot(n));
  Vec e1 = eig.vectors.col(1), e2 = eig.vectors.col(0);
  fix_phase(e1);
  fix_phase(e2);

  const Vec xi1 = a.xi(0);
  const RVec p1 = b[0] - n.dot(b[0]) * n;
  std::array<Vec, 2> u{Vec(d), Vec(d)};
  for (int j = 0; j < d; ++j) {
    const RVec pj = b[j] - n.dot(b[j]) * n;
    const double theta = std::atan2(n.dot(RVec(p1.head<3>().cross(pj.head<3>()))), p1.dot(pj));
    const Mat rot = std::cos(theta / 2) * Mat::Identity(2, 2) - cplx(0, std::sin(theta / 2)) * sigma_dot(n);
    cplx alpha = a.xi(j).dot(rot * xi1);
    alpha /= std::abs(alpha);
    const cplx l1 = std::polar(1.0, -theta / 2), l2 = std::polar(1.0, theta / 2);
    u[0](j) = alpha * std::conj(l1);
    u[1](j) = alpha * std::conj(l2);
  }
  res.weights = {std::norm(e1.dot(xi1)), std::norm(e2.dot(xi1))};
  for (int k = 0; k < 2; ++k) {
    res.unitaries[k] = Mat::Zero(d, d);
    for (int j = 0; j < d; ++j) res.unitaries[k](j, j) = u[k](j);
  }
  const auto s_a = schur_channel(a.matrix);
  const auto ru = random_unitary_channel(res);
  res.residual = channel_distance(s_a, ru);
  return res;
}

QuantumChannel random_unitary_channel(const DichotomyResult& d) {
  const int n = static_cast<int>(d.unitaries[0].rows());
  return QuantumChannel(n, n, {std::sqrt(d.weights[0]) * d.unitaries[0], std::sqrt(d.weights[1]) * d.unitaries[1]});
}

std::vector<AqbcSample> AqbcResult::certificates() const {
  std::vector<AqbcSample> out;
  for (const auto& s : samples)
    if (s.certified) out.push_back(s);
  return out;
}

AqbcResult aqbc_search(const UnitaryRep& rep, const AqbcConfig& config) {
  if (rep.dim() < 2) throw Error(ErrorKind::RepresentationDimensionOne, "representation must have dimension >= 2");
  const int r = rep.dim();
  const int injected = static_cast<int>(config.injected.size());
  const int total = injected + config.n_samples;
  const auto gm = gell_mann_basis(r);
  auto run = [&](int i) {
    const Vec xi = i < injected ? Vec(config.injected[i]) : random_unit_vector(r, config.seed, i, 0);
    AqbcSample s = evaluate_sample(rep, i, xi);
    if (s.certified || !config.optimize || s.reason == "real correlation matrix") return s;
    // Seeded hill climb on the affine margin of the orbit.
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(i), 1u};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss;
    Vec best = xi;
    double best_margin = affine_margin(orbit_of(rep, best), gm);
    double step = 0.1;
    for (int it = 0; it < 200 && step > 1e-6; ++it) {
      Vec trial = best;
      for (int k = 0; k < r; ++k) trial(k) += step * cplx(gauss(rng), gauss(rng));
      trial /= trial.norm();
      const double m = affine_margin(orbit_of(rep, trial), gm);
      if (m > best_margin) {
        best = trial;
        best_margin = m;
        AqbcSample t = evaluate_sample(rep, i, best);
        if (t.certified) {
          t.refined = true;
          return t;
        }
      } else {
        step *= 0.9;
      }
    }
    return s;
  };
  AqbcResult out;
  out.samples = map_indices(total, run, config.exec);
  return out;
}

double hull_volume(const std::vector<RVec>& points) {
  if (points.empty() || points[0].size() != 3) return 0.0;
  if (affine_span_dim(points) < 3) return 0.0;
  const int n = static_cast<int>(points.size());
  using V3 = Eigen::Vector3d;
  std::vector<V3> p;
  for (const auto& v : points) p.emplace_back(v(0), v(1), v(2));
  V3 c = V3::Zero();
  for (const auto& v : p) c += v;
  c /= n;
  constexpr double eps = 1e-9;
  std::vector<std::pair<V3, double>> planes;
  double volume = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        V3 normal = (p[j] - p[i]).cross(p[k] - p[i]);
        if (normal.norm() < eps) continue;
        normal.normalize();
        double off = normal.dot(p[i]);
        if (normal.dot(c) > off) {
          normal = -normal;
          off = -off;
        }
        bool face = true;
        for (int m = 0; m < n && face; ++m)
          if (normal.dot(p[m]) > off + eps) face = false;
        if (!face) continue;
        bool seen = false;
        for (const auto& [nn, oo] : planes)
          if ((nn - normal).norm() < 1e-7 && std::abs(oo - off) < 1e-7) seen = true;
        if (seen) continue;
        planes.emplace_back(normal, off);
        // Area of the planar convex polygon through every point on this face.
        const V3 ax = (p[j] - p[i]).normalized();
        const V3 ay = normal.cross(ax);
        std::vector<std::pair<double, double>> q;
        for (int m = 0; m < n; ++m)
          if (std::abs(normal.dot(p[m]) - off) <= eps) q.emplace_back(ax.dot(p[m] - p[i]), ay.dot(p[m] - p[i]));
        std::sort(q.begin(), q.end());
        auto cross = [](auto o, auto a, auto b) {
          return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
        };
        std::vector<std::pair<double, double>> hull(2 * q.size());
        size_t h = 0;
        for (size_t m = 0; m < q.size(); ++m) {
          while (h >= 2 && cross(hull[h - 2], hull[h - 1], q[m]) <= 0) --h;
          hull[h++] = q[m];
        }
        for (size_t m = q.size() - 1, lower = h + 1; m-- > 0;) {
          while (h >= lower && cross(hull[h - 2], hull[h - 1], q[m]) <= 0) --h;
          hull[h++] = q[m];
        }
        double area = 0.0;
        for (size_t m = 0; m + 1 < h; ++m)
          area += hull[m].first * hull[m + 1].second - hull[m + 1].first * hull[m].second;
        volume += std::abs(area) / 2.0 * (off - normal.dot(c)) / 3.0;
      }
  return volume;
}

std::string export_bloch_orbit(const BlochOrbit& orbit, const std::vector<std::string>& labels,
                               const std::string& group_name, ExportFormat format) {
  const int k = orbit.vectors.empty() ? 0 : static_cast<int>(orbit.vectors[0].size());
  const int affine = affine_span_dim(orbit.vectors);
  auto label_of = [&](size_t j) { return j < labels.size() ? labels[j] : std::to_string(j); };
  if (format == ExportFormat::Json) {
    nlohmann::ordered_json doc;
    doc["group"] = group_name;
    doc["rank"] = orbit.rank;
    doc["affine_span_dim"] = affine;
    if (orbit.rank == 2) doc["hull_volume"] = hull_volume(orbit.vectors);
    doc["rows"] = nlohmann::ordered_json::array();
    for (size_t j = 0; j < orbit.vectors.size(); ++j) {
      nlohmann::ordered_json row;
      row["label"] = label_of(j);
      std::vector<double> v(orbit.vectors[j].data(), orbit.vectors[j].data() + k);
      row["v"] = v;
      doc["rows"].push_back(row);
    }
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "# group: " << group_name << "\n# rank: " << orbit.rank << "\n# affine_span_dim: " << affine << "\n";
  char buf[64];
  if (orbit.rank == 2) {
    std::snprintf(buf, sizeof buf, "%.17g", hull_volume(orbit.vectors));
    out << "# hull_volume: " << buf << "\n";
  }
  out << "label";
  for (int c = 1; c <= k; ++c) out << ",v" << c;
  out << "\n";
  for (size_t j = 0; j < orbit.vectors.size(); ++j) {
    const std::string label = label_of(j);
    if (label.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : label) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      out << quoted << '"';
    } else {
      out << label;
    }
    for (int c = 0; c < k; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", orbit.vectors[j](c));
      out << "," << buf;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace qhc
