#include "qhc/group.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <regex>

#include "qhc/error.hpp"

namespace qhc {

namespace {

constexpr int kMaxExplicitOrder = 64;

// Backtracking search for elements g_1..g_k with G = <g_1> x ... x <g_k>.
// Elements of larger order are tried first.
bool decompose_abelian(const FiniteGroup& g, std::vector<char>& in_span, int span_size,
                       std::vector<CyclicFactor>& chosen) {
  const int n = g.order();
  if (span_size == n) return true;
  std::vector<int> candidates;
  for (int s = 0; s < n; ++s)
    if (!in_span[s]) candidates.push_back(s);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](int a, int b) { return g.element_order(a) > g.element_order(b); });
  for (int cand : candidates) {
    const int ord = g.element_order(cand);
    if (n % (span_size * ord) != 0) continue;
    bool trivial_meet = true;
    for (int k = 1, p = cand; k < ord; ++k, p = g.mul(p, cand))
      if (in_span[p]) { trivial_meet = false; break; }
    if (!trivial_meet) continue;
    std::vector<int> old;
    for (int s = 0; s < n; ++s)
      if (in_span[s]) old.push_back(s);
    std::vector<char> next(n, 0);
    for (int h : old)
      for (int k = 0, p = 0; k < ord; ++k, p = g.mul(p, cand)) next[g.mul(h, p)] = 1;
    chosen.push_back({cand, ord});
    if (decompose_abelian(g, next, span_size * ord, chosen)) {
      in_span = std::move(next);
      return true;
    }
    chosen.pop_back();
  }
  return false;
}

std::string cycle_label(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<char> seen(n, 0);
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (seen[i] || perm[i] == i) continue;
    out += '(';
    for (int j = i; !seen[j]; j = perm[j]) {
      seen[j] = 1;
      out += std::to_string(j + 1);
    }
    out += ')';
  }
  return out.empty() ? "e" : out;
}

int parity(const std::vector<int>& perm) {
  int inversions = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2;
}

}  // namespace

std::complex<double> unit_root(double turns) {
  turns -= std::floor(turns);
  const double quarter = turns * 4.0;
  const double k = std::round(quarter);
  if (std::abs(quarter - k) < 1e-14) {
    switch (static_cast<int>(k) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table,
                                    std::vector<std::string> labels, GroupFamily family) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw Error(ErrorKind::UnsupportedDescriptor, "group table is empty");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n)
      throw Error(ErrorKind::UnsupportedDescriptor, "group table is not square");
    for (int v : row)
      if (v < 0 || v >= n) throw Error(ErrorKind::UnsupportedDescriptor, "table entry out of range");
  }
  for (int s = 0; s < n; ++s)
    if (table[0][s] != s || table[s][0] != s)
      throw Error(ErrorKind::NoIdentity, "element 0 is not a two-sided identity");

  FiniteGroup g;
  g.inverse_.assign(n, -1);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t)
      if (table[s][t] == 0 && table[t][s] == 0) { g.inverse_[s] = t; break; }
    if (g.inverse_[s] < 0)
      throw Error(ErrorKind::NoInverse, "element " + std::to_string(s) + " has no two-sided inverse");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw Error(ErrorKind::NonAssociativeTable,
                      "(" + std::to_string(a) + "*" + std::to_string(b) + ")*" + std::to_string(c) +
                          " differs from the other bracketing");

  if (labels.empty()) {
    labels.resize(n);
    for (int s = 0; s < n; ++s) labels[s] = std::to_string(s);
  } else if (static_cast<int>(labels.size()) != n) {
    throw Error(ErrorKind::UnsupportedDescriptor, "label count differs from group order");
  }
  g.table_ = std::move(table);
  g.labels_ = std::move(labels);
  g.family_ = std::move(family);
  g.abelian_ = true;
  for (int s = 0; s < n && g.abelian_; ++s)
    for (int t = s + 1; t < n; ++t)
      if (g.table_[s][t] != g.table_[t][s]) { g.abelian_ = false; break; }
  g.init_abelian({});
  return g;
}

void FiniteGroup::init_abelian(std::vector<CyclicFactor> natural) {
  factors_.clear();
  coords_.clear();
  if (!abelian_) return;
  const int n = order();
  if (natural.empty() && n > 1) {
    std::vector<char> span(n, 0);
    span[0] = 1;
    if (!decompose_abelian(*this, span, 1, natural))
      throw Error(ErrorKind::NumericalFailure, "abelian decomposition search failed");
  }
  factors_ = std::move(natural);
  coords_.assign(n, {});
  std::vector<int> exps(factors_.size(), 0);
  for (int count = 0; count < n; ++count) {
    int elem = 0;
    for (size_t k = 0; k < factors_.size(); ++k)
      for (int e = 0; e < exps[k]; ++e) elem = mul(elem, factors_[k].generator);
    coords_[elem] = exps;
    for (int k = static_cast<int>(factors_.size()) - 1; k >= 0; --k) {
      if (++exps[k] < factors_[k].order) break;
      exps[k] = 0;
    }
  }
}

int FiniteGroup::element_order(int s) const {
  int k = 1;
  for (int p = s; p != 0; p = mul(p, s)) ++k;
  return k;
}

FiniteGroup cyclic(int n) {
  if (n < 1) throw Error(ErrorKind::UnsupportedDescriptor, "cyclic(n) needs n >= 1");
  if (n > kMaxExplicitOrder) throw Error(ErrorKind::UnsupportedDescriptor, "cyclic order above 64");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  GroupFamily fam{GroupFamily::Kind::Cyclic, n, {}, {}};
  FiniteGroup g = FiniteGroup::from_table(std::move(t), {}, fam);
  g.init_abelian(n > 1 ? std::vector<CyclicFactor>{{1, n}} : std::vector<CyclicFactor>{});
  return g;
}

FiniteGroup product(const FiniteGroup& left, const FiniteGroup& right) {
  const int a = left.order(), b = right.order();
  const int n = a * b;
  if (n > kMaxExplicitOrder * 2)
    throw Error(ErrorKind::UnsupportedDescriptor, "product order exceeds the supported cap");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int x = 0; x < n; ++x) {
    labels[x] = "(" + left.label(x / b) + "," + right.label(x % b) + ")";
    for (int y = 0; y < n; ++y)
      t[x][y] = left.mul(x / b, y / b) * b + right.mul(x % b, y % b);
  }
  GroupFamily fam{GroupFamily::Kind::Product, 0, {left.family(), right.family()}, {}};
  FiniteGroup g = FiniteGroup::from_table(std::move(t), std::move(labels), fam);
  if (g.is_abelian()) {
    std::vector<CyclicFactor> natural;
    for (auto f : left.abelian_factors()) natural.push_back({f.generator * b, f.order});
    for (auto f : right.abelian_factors()) natural.push_back({f.generator, f.order});
    g.init_abelian(std::move(natural));
  }
  return g;
}

FiniteGroup semidirect(const FiniteGroup& normal, const FiniteGroup& acting,
                       const std::vector<std::vector<int>>& action, std::string action_name) {
  const int a = normal.order(), b = acting.order();
  if (static_cast<int>(action.size()) != b)
    throw Error(ErrorKind::UnsupportedDescriptor, "action needs one automorphism per acting element");
  for (int h = 0; h < b; ++h) {
    const auto& f = action[h];
    if (static_cast<int>(f.size()) != a)
      throw Error(ErrorKind::UnsupportedDescriptor, "automorphism has wrong length");
    std::vector<int> sorted = f;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < a; ++i)
      if (sorted[i] != i) throw Error(ErrorKind::UnsupportedDescriptor, "action is not a permutation");
    for (int x = 0; x < a; ++x)
      for (int y = 0; y < a; ++y)
        if (f[normal.mul(x, y)] != normal.mul(f[x], f[y]))
          throw Error(ErrorKind::UnsupportedDescriptor, "action is not by automorphisms");
  }
  for (int x = 0; x < a; ++x)
    if (action[0][x] != x) throw Error(ErrorKind::UnsupportedDescriptor, "identity must act trivially");
  for (int h1 = 0; h1 < b; ++h1)
    for (int h2 = 0; h2 < b; ++h2)
      for (int x = 0; x < a; ++x)
        if (action[acting.mul(h1, h2)][x] != action[h1][action[h2][x]])
          throw Error(ErrorKind::UnsupportedDescriptor, "action is not a homomorphism");

  const int n = a * b;
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int x = 0; x < n; ++x) {
    const int n1 = x / b, h1 = x % b;
    labels[x] = "(" + normal.label(n1) + ";" + acting.label(h1) + ")";
    for (int y = 0; y < n; ++y) {
      const int n2 = y / b, h2 = y % b;
      t[x][y] = normal.mul(n1, action[h1][n2]) * b + acting.mul(h1, h2);
    }
  }
  GroupFamily fam{GroupFamily::Kind::Semidirect, 0, {normal.family(), acting.family()},
                  std::move(action_name)};
  return FiniteGroup::from_table(std::move(t), std::move(labels), fam);
}

FiniteGroup semidirect_swap(const FiniteGroup& square, int factor_order) {
  const int k = factor_order;
  if (k * k != square.order())
    throw Error(ErrorKind::UnsupportedDescriptor, "swap action needs a product of two equal factors");
  std::vector<std::vector<int>> action(2, std::vector<int>(square.order()));
  for (int x = 0; x < square.order(); ++x) {
    action[0][x] = x;
    action[1][x] = (x % k) * k + x / k;
  }
  return semidirect(square, cyclic(2), action, "swap");
}

std::vector<std::vector<int>> symmetric_permutations(int n) {
  if (n < 1 || n > 5) throw Error(ErrorKind::UnsupportedDescriptor, "symmetric(n) supports 1 <= n <= 5");
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> even;
  do {
    if (parity(p) == 0) even.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<int>> perms = even;
  if (n >= 2) {
    std::vector<int> swap12(n);
    std::iota(swap12.begin(), swap12.end(), 0);
    std::swap(swap12[0], swap12[1]);
    for (const auto& a : even) {
      std::vector<int> c(n);
      for (int x = 0; x < n; ++x) c[x] = swap12[a[x]];
      perms.push_back(c);
    }
  }
  return perms;
}

FiniteGroup symmetric(int n) {
  const auto perms = symmetric_permutations(n);
  const int order = static_cast<int>(perms.size());
  auto index_of = [&](const std::vector<int>& q) {
    return static_cast<int>(std::find(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::vector<int>> t(order, std::vector<int>(order));
  std::vector<std::string> labels(order);
  for (int i = 0; i < order; ++i) {
    labels[i] = cycle_label(perms[i]);
    for (int j = 0; j < order; ++j) {
      std::vector<int> c(n);
      // composition right to left: (st)(x) = s(t(x))
      for (int x = 0; x < n; ++x) c[x] = perms[i][perms[j][x]];
      t[i][j] = index_of(c);
    }
  }
  GroupFamily fam{GroupFamily::Kind::Symmetric, n, {}, {}};
  return FiniteGroup::from_table(std::move(t), std::move(labels), fam);
}

FiniteGroup dihedral(int n) {
  if (n < 1 || n > 32) throw Error(ErrorKind::UnsupportedDescriptor, "dihedral(n) supports 1 <= n <= 32");
  const int order = 2 * n;
  std::vector<std::vector<int>> t(order, std::vector<int>(order));
  std::vector<std::string> labels(order);
  for (int x = 0; x < order; ++x) {
    const int a = x % n, b = x / n;
    std::string r = a == 0 ? "" : (a == 1 ? "r" : "r^" + std::to_string(a));
    labels[x] = r + (b ? "s" : "");
    if (labels[x].empty()) labels[x] = "e";
    for (int y = 0; y < order; ++y) {
      const int c = y % n, d = y / n;
      const int k = ((a + (b ? -c : c)) % n + n) % n;
      t[x][y] = k + n * ((b + d) % 2);
    }
  }
  GroupFamily fam{GroupFamily::Kind::Dihedral, n, {}, {}};
  return FiniteGroup::from_table(std::move(t), std::move(labels), fam);
}

FiniteGroup make_group(const GroupDescriptor& descriptor) {
  return std::visit(
      [](const auto& d) -> FiniteGroup {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, CyclicDesc>) {
          return cyclic(d.n);
        } else if constexpr (std::is_same_v<T, ProductDesc>) {
          if (!d.left || !d.right) throw Error(ErrorKind::UnsupportedDescriptor, "product needs two factors");
          return product(make_group(*d.left), make_group(*d.right));
        } else if constexpr (std::is_same_v<T, SemidirectDesc>) {
          if (!d.normal || !d.acting)
            throw Error(ErrorKind::UnsupportedDescriptor, "semidirect needs normal and acting groups");
          FiniteGroup normal = make_group(*d.normal);
          FiniteGroup acting = make_group(*d.acting);
          if (d.action == "swap") {
            const auto* prod = std::get_if<ProductDesc>(&d.normal->value);
            if (!prod || acting.order() != 2)
              throw Error(ErrorKind::UnsupportedDescriptor, "swap acts by Z2 on a product of two equal factors");
            FiniteGroup f1 = make_group(*prod->left), f2 = make_group(*prod->right);
            if (!(f1 == f2)) throw Error(ErrorKind::UnsupportedDescriptor, "swap needs identical factors");
            return semidirect_swap(normal, f1.order());
          }
          if (d.action == "explicit") return semidirect(normal, acting, d.automorphisms);
          throw Error(ErrorKind::UnsupportedDescriptor, "unknown semidirect action '" + d.action + "'");
        } else if constexpr (std::is_same_v<T, SymmetricDesc>) {
          return symmetric(d.n);
        } else if constexpr (std::is_same_v<T, DihedralDesc>) {
          return dihedral(d.n);
        } else {
          if (static_cast<int>(d.table.size()) > kMaxExplicitOrder)
            throw Error(ErrorKind::UnsupportedDescriptor, "explicit tables are capped at order 64");
          return FiniteGroup::from_table(d.table, d.labels);
        }
      },
      descriptor.value);
}

FiniteGroup group_from_alias(const std::string& alias) {
  std::smatch m;
  if (alias == "d4-semidirect") return semidirect_swap(product(cyclic(2), cyclic(2)), 2);
  if (std::regex_match(alias, m, std::regex(R"(z2\^(\d+))"))) {
    const int k = std::stoi(m[1]);
    if (k < 1 || k > 6) throw Error(ErrorKind::UnsupportedDescriptor, "z2^n supports 1 <= n <= 6");
    FiniteGroup g = cyclic(2);
    for (int i = 1; i < k; ++i) g = product(g, cyclic(2));
    return g;
  }
  if (std::regex_match(alias, m, std::regex(R"(z(\d+))"))) return cyclic(std::stoi(m[1]));
  if (std::regex_match(alias, m, std::regex(R"(s(\d))"))) return symmetric(std::stoi(m[1]));
  if (std::regex_match(alias, m, std::regex(R"(d(\d+))"))) return dihedral(std::stoi(m[1]));
  throw Error(ErrorKind::UnsupportedDescriptor, "unknown group alias '" + alias + "'");
}

std::vector<int> subgroup_generated(const FiniteGroup& g, const std::vector<int>& generators) {
  if (generators.empty()) throw Error(ErrorKind::EmptyGeneratorSet, "generator set is empty");
  std::vector<char> in(g.order(), 0);
  std::vector<int> frontier{0};
  in[0] = 1;
  for (int s : generators)
    if (s < 0 || s >= g.order()) throw Error(ErrorKind::UnsupportedDescriptor, "generator out of range");
  // In a finite group closure under products already contains inverses.
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (int s : generators) {
        const int y = g.mul(x, s);
        if (!in[y]) { in[y] = 1; next.push_back(y); }
      }
    frontier = std::move(next);
  }
  std::vector<int> out;
  for (int s = 0; s < g.order(); ++s)
    if (in[s]) out.push_back(s);
  return out;
}

bool is_subgroup(const FiniteGroup& g, const std::vector<int>& elements) {
  if (elements.empty()) return false;
  std::vector<char> in(g.order(), 0);
  for (int s : elements) {
    if (s < 0 || s >= g.order()) return false;
    in[s] = 1;
  }
  if (!in[0]) return false;
  for (int s : elements) {
    if (!in[g.inv(s)]) return false;
    for (int t : elements)
      if (!in[g.mul(s, t)]) return false;
  }
  return true;
}

std::vector<std::vector<int>> left_cosets(const FiniteGroup& g, const std::vector<int>& subgroup) {
  if (!is_subgroup(g, subgroup)) throw Error(ErrorKind::NotASubgroup, "element set is not a subgroup");
  std::vector<char> used(g.order(), 0);
  std::vector<std::vector<int>> cosets;
  for (int s = 0; s < g.order(); ++s) {
    if (used[s]) continue;
    std::vector<int> c;
    for (int h : subgroup) c.push_back(g.mul(s, h));
    std::sort(c.begin(), c.end());
    for (int x : c) used[x] = 1;
    cosets.push_back(std::move(c));
  }
  return cosets;
}

ProbabilityMeasure::ProbabilityMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(ErrorKind::InvalidMeasure, "measure has no weights");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error(ErrorKind::InvalidMeasure, "measure weights must be finite and non-negative");
    sum += w;
  }
  const double dev = std::abs(sum - 1.0);
  if (dev > 1e-9)
    throw Error(ErrorKind::InvalidMeasure, "measure weights sum to " + std::to_string(sum));
  if (dev > 1e-12)
    for (double& w : weights_) w /= sum;
}

ProbabilityMeasure ProbabilityMeasure::point_mass(int order, int s) {
  std::vector<double> w(order, 0.0);
  w.at(s) = 1.0;
  return ProbabilityMeasure(std::move(w));
}

std::vector<int> ProbabilityMeasure::support(double cutoff) const {
  std::vector<int> out;
  for (int s = 0; s < size(); ++s)
    if (weights_[s] > cutoff) out.push_back(s);
  return out;
}

ProbabilityMeasure convolve(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu, const FiniteGroup& g) {
  if (mu.size() != g.order() || nu.size() != g.order())
    throw Error(ErrorKind::DimensionMismatch, "measure size differs from group order");
  std::vector<double> out(g.order(), 0.0);
  for (int s = 0; s < g.order(); ++s)
    for (int t = 0; t < g.order(); ++t) out[g.mul(s, t)] += mu[s] * nu[t];
  return ProbabilityMeasure(std::move(out));
}

ProbabilityMeasure haar(const FiniteGroup& g) {
  return ProbabilityMeasure(std::vector<double>(g.order(), 1.0 / g.order()));
}

ProbabilityMeasure convolution_power(const ProbabilityMeasure& mu, int n, const FiniteGroup& g) {
  ProbabilityMeasure out = mu;
  for (int k = 1; k < n; ++k) out = convolve(out, mu, g);
  return out;
}

std::vector<Character> characters(const FiniteGroup& g) {
  if (!g.is_abelian()) throw Error(ErrorKind::NonAbelianGroup, "characters need an abelian group");
  const auto& factors = g.abelian_factors();
  std::vector<Character> out;
  out.reserve(g.order());
  // Character a is indexed by the exponent vector a; enumerate in the same
  // mixed-radix order as the coordinates of group elements.
  std::vector<int> a(factors.size(), 0);
  for (int count = 0; count < g.order(); ++count) {
    Character chi;
    chi.values.resize(g.order());
    for (int t = 0; t < g.order(); ++t) {
      const auto& c = g.coordinates(t);
      double phase = 0.0;
      for (size_t k = 0; k < factors.size(); ++k)
        phase += static_cast<double>((a[k] * c[k]) % factors[k].order) / factors[k].order;
      chi.values[t] = unit_root(phase);
    }
    out.push_back(std::move(chi));
    for (int k = static_cast<int>(factors.size()) - 1; k >= 0; --k) {
      if (++a[k] < factors[k].order) break;
      a[k] = 0;
    }
  }
  return out;
}

}  // namespace qhc
