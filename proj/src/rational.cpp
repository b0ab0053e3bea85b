// Copyright 2026 The st2 Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace st2 {

namespace {

Integer pow10(long e) {
  Integer r = 1;
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Rational parse_decimal(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string_view::npos) {
    std::string_view es = s.substr(epos + 1);
    bool eneg = false;
    if (!es.empty() && (es[0] == '-' || es[0] == '+')) {
      eneg = es[0] == '-';
      es.remove_prefix(1);
    }
    if (!all_digits(es) || es.size() > 6)
      throw std::invalid_argument("bad exponent in number literal");
    exp10 = std::stol(std::string(es));
    if (eneg) exp10 = -exp10;
    s = s.substr(0, epos);
  }
  std::string digits;
  auto dot = s.find('.');
  if (dot == std::string_view::npos) {
    digits = std::string(s);
  } else {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<long>(fp.size());
  }
  if (!all_digits(digits)) throw std::invalid_argument("bad number literal");
  // A leading zero would make GMP read the digits as octal.
  auto nz = digits.find_first_not_of('0');
  digits = nz == std::string::npos ? "0" : digits.substr(nz);
  Rational q{Integer(digits)};
  if (exp10 > 0) q *= Rational(pow10(exp10));
  if (exp10 < 0) q /= Rational(pow10(-exp10));
  return neg ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  Rational num = parse_decimal(text.substr(0, slash));
  Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator");
  return num / den;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  if (x == 0) return Rational(0);
  int e = 0;
  double m = std::frexp(x, &e);
  // m in [0.5, 1): scale to a 53-bit integer.
  auto mi = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Rational q{Integer(mi)};
  Integer p2 = 1;
  for (int i = 0; i < std::abs(e); ++i) p2 *= 2;
  if (e > 0) q *= Rational(p2);
  if (e < 0) q /= Rational(p2);
  return q;
}

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw std::invalid_argument("rational pair must be [num, den]");
    Rational num = rational_from_json(j[0]);
    Rational den = rational_from_json(j[1]);
    if (den == 0) throw std::invalid_argument("zero denominator");
    return num / den;
  }
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) {
    double v = j.get<double>();
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return parse_rational(std::string_view(buf, res.ptr - buf));
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw std::invalid_argument("expected a rational value");
}

nlohmann::json rational_to_json(const Rational& q) {
  Integer n = boost::multiprecision::numerator(q);
  Integer d = boost::multiprecision::denominator(q);
  constexpr long long lim = std::numeric_limits<long long>::max();
  if (abs(n) < lim && d < lim)
    return nlohmann::json::array({n.convert_to<long long>(), d.convert_to<long long>()});
  return nlohmann::json::array({n.str(), d.str()});
}

std::string to_string(const Rational& q) { return q.str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(QMat& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][c];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (std::size_t k = 0; k < m[r].size(); ++k) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank_q(QMat m) {
  std::size_t cols = m.empty() ? 0 : m[0].size();
  return rref(m, cols).size();
}

std::vector<std::vector<Rational>> nullspace_q(const QMat& m, std::size_t cols) {
  QMat r = m;
  auto piv = rref(r, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : piv) is_pivot[p] = true;
  std::vector<std::vector<Rational>> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(cols);
    v[f] = 1;
    for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -r[k][f];
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::vector<Rational>> solve_q(const QMat& a, const std::vector<Rational>& b,
                                             std::size_t cols) {
  QMat aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b.at(i));
  auto piv = rref(aug, cols + 1);
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  std::vector<Rational> x(cols);
  for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = aug[k][cols];
  return x;
}

std::vector<Integer> primitive_integer(const std::vector<Rational>& v) {
  Integer l = 1;
  for (const auto& q : v) l = boost::multiprecision::lcm(l, Integer(boost::multiprecision::denominator(q)));
  std::vector<Integer> out;
  Integer g = 0;
  for (const auto& q : v) {
    Rational s = q * Rational(l);
    out.push_back(boost::multiprecision::numerator(s));
    g = boost::multiprecision::gcd(g, out.back());
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

}  // namespace st2
