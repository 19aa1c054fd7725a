#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

namespace qhc {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;  // > 0, gcd(num, den) = 1
};

/// Finite sum of q * sqrt(m) * i^p with q rational, m squarefree and p in {0, 1}.
/// Arithmetic is exact; overflow raises ParseError.
class ExactValue {
 public:
  ExactValue() = default;
  static ExactValue rational(Rational q);
  static ExactValue imaginary_unit();

  ExactValue operator+(const ExactValue& o) const;
  ExactValue operator-() const;
  ExactValue operator*(const ExactValue& o) const;
  /// Division by a single nonzero monomial.
  ExactValue operator/(const ExactValue& o) const;
  /// Square root of a non-negative rational.
  ExactValue sqrt() const;

  bool is_zero() const { return terms_.empty(); }
  bool is_real() const;
  std::complex<double> to_complex() const;

 private:
  // (squarefree radicand, power of i) -> coefficient
  std::map<std::pair<std::int64_t, int>, Rational> terms_;
  void add_term(std::int64_t m, int p, Rational q);
};

/// Grammar: sums and products of decimal or integer literals, `i`, `sqrt(...)`
/// and parentheses, e.g. "i/sqrt(10)" or "(1+i)/2".  Throws ParseError.
ExactValue parse_expression(std::string_view text);

/// Comma-separated list of expressions.
std::vector<std::complex<double>> parse_complex_list(std::string_view text);

/// As parse_complex_list, rejecting non-real entries.
std::vector<double> parse_real_list(std::string_view text);

}  // namespace qhc
