#include "qhc/expr.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "qhc/error.hpp"

namespace qhc {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail("integer overflow in literal");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail("integer overflow in literal");
  return r;
}

Rational make(std::int64_t num, std::int64_t den) {
  if (den == 0) fail("division by zero");
  if (den < 0) {
    num = checked_mul(num, -1);
    den = checked_mul(den, -1);
  }
  const std::int64_t g = std::gcd(num, den);
  return g ? Rational{num / g, den / g} : Rational{0, 1};
}

Rational add(Rational a, Rational b) {
  const std::int64_t g = std::gcd(a.den, b.den);
  return make(checked_add(checked_mul(a.num, b.den / g), checked_mul(b.num, a.den / g)), checked_mul(a.den, b.den / g));
}

Rational mul(Rational a, Rational b) {
  const Rational x = make(a.num, b.den), y = make(b.num, a.den);
  return make(checked_mul(x.num, y.num), checked_mul(x.den, y.den));
}

// n = k^2 * m with m squarefree; returns (k, m).
std::pair<std::int64_t, std::int64_t> split_square(std::int64_t n) {
  std::int64_t k = 1, m = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    while (n % (p * p) == 0) {
      n /= p * p;
      k = checked_mul(k, p);
    }
    if (n % p == 0) {
      n /= p;
      m = checked_mul(m, p);
    }
  }
  return {k, checked_mul(m, n)};
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ExactValue parse_all() {
    ExactValue v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "' at position " + std::to_string(pos_));
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExactValue sum() {
    ExactValue v = product();
    for (;;) {
      if (eat('+')) v = v + product();
      else if (eat('-')) v = v + -product();
      else return v;
    }
  }

  ExactValue product() {
    ExactValue v = unary();
    for (;;) {
      if (eat('*')) v = v * unary();
      else if (eat('/')) v = v / unary();
      else return v;
    }
  }

  ExactValue unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }

  ExactValue atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    if (eat('(')) {
      ExactValue v = sum();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (s_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      if (!eat('(')) fail("expected '(' after sqrt");
      ExactValue v = sum();
      if (!eat(')')) fail("missing ')'");
      return v.sqrt();
    }
    if (s_[pos_] == 'i') {
      ++pos_;
      return ExactValue::imaginary_unit();
    }
    if (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.') return number();
    fail("unexpected '" + std::string(1, s_[pos_]) + "' at position " + std::to_string(pos_));
  }

  ExactValue number() {
    std::int64_t num = 0, den = 1;
    bool digits = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      num = checked_add(checked_mul(num, 10), s_[pos_++] - '0');
      digits = true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        num = checked_add(checked_mul(num, 10), s_[pos_++] - '0');
        den = checked_mul(den, 10);
        digits = true;
      }
    }
    if (!digits) fail("malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) neg = s_[pos_++] == '-';
      int e = 0;
      bool any = false;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        e = e * 10 + (s_[pos_++] - '0');
        any = true;
        if (e > 18) fail("exponent too large");
      }
      if (!any) fail("malformed exponent");
      for (int k = 0; k < e; ++k) {
        if (neg) den = checked_mul(den, 10);
        else num = checked_mul(num, 10);
      }
    }
    return ExactValue::rational(make(num, den));
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace

void ExactValue::add_term(std::int64_t m, int p, Rational q) {
  if (q.num == 0) return;
  const auto key = std::make_pair(m, p);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_[key] = q;
    return;
  }
  it->second = add(it->second, q);
  if (it->second.num == 0) terms_.erase(it);
}

ExactValue ExactValue::rational(Rational q) {
  ExactValue v;
  v.add_term(1, 0, make(q.num, q.den));
  return v;
}

ExactValue ExactValue::imaginary_unit() {
  ExactValue v;
  v.add_term(1, 1, {1, 1});
  return v;
}

ExactValue ExactValue::operator+(const ExactValue& o) const {
  ExactValue v = *this;
  for (const auto& [k, q] : o.terms_) v.add_term(k.first, k.second, q);
  return v;
}

ExactValue ExactValue::operator-() const {
  ExactValue v;
  for (const auto& [k, q] : terms_) v.terms_[k] = {checked_mul(q.num, -1), q.den};
  return v;
}

ExactValue ExactValue::operator*(const ExactValue& o) const {
  ExactValue v;
  for (const auto& [ka, qa] : terms_)
    for (const auto& [kb, qb] : o.terms_) {
      const auto [k, m] = split_square(checked_mul(ka.first, kb.first));
      Rational q = mul(mul(qa, qb), {k, 1});
      int p = ka.second + kb.second;
      if (p == 2) {
        p = 0;
        q.num = checked_mul(q.num, -1);
      }
      v.add_term(m, p, q);
    }
  return v;
}

ExactValue ExactValue::operator/(const ExactValue& o) const {
  if (o.terms_.empty()) fail("division by zero");
  if (o.terms_.size() != 1) fail("division is only supported by a single term such as sqrt(10) or 2*i");
  const auto& [k, q] = *o.terms_.begin();
  // 1 / (q sqrt(m) i^p) = sqrt(m) / (q m) * (-i)^p
  ExactValue inv;
  Rational c = make(q.den, checked_mul(q.num, k.first));
  if (k.second == 1) c.num = checked_mul(c.num, -1);
  inv.add_term(k.first, k.second, c);
  return *this * inv;
}

ExactValue ExactValue::sqrt() const {
  if (terms_.empty()) return {};
  if (terms_.size() != 1 || terms_.begin()->first != std::make_pair<std::int64_t, int>(1, 0))
    fail("sqrt needs a rational argument");
  const Rational q = terms_.begin()->second;
  if (q.num < 0) fail("sqrt of a negative number");
  // sqrt(a/b) = sqrt(a b) / b
  const auto [k, m] = split_square(checked_mul(q.num, q.den));
  ExactValue v;
  v.add_term(m, 0, make(k, q.den));
  return v;
}

bool ExactValue::is_real() const {
  for (const auto& [k, q] : terms_)
    if (k.second == 1) return false;
  return true;
}

std::complex<double> ExactValue::to_complex() const {
  long double re = 0.0L, im = 0.0L;
  for (const auto& [k, q] : terms_) {
    const long double x = static_cast<long double>(q.num) / q.den * std::sqrt(static_cast<long double>(k.first));
    (k.second ? im : re) += x;
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

ExactValue parse_expression(std::string_view text) { return Parser(text).parse_all(); }

std::vector<std::complex<double>> parse_complex_list(std::string_view text) {
  std::vector<std::complex<double>> out;
  size_t start = 0;
  int depth = 0;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '(') ++depth;
    if (i < text.size() && text[i] == ')') --depth;
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      out.push_back(parse_expression(text.substr(start, i - start)).to_complex());
      start = i + 1;
    }
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& z : parse_complex_list(text)) {
    if (z.imag() != 0.0) fail("expected real values");
    out.push_back(z.real());
  }
  return out;
}

}  // namespace qhc
