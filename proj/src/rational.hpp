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

#ifndef ST2_RATIONAL_HPP_
#define ST2_RATIONAL_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <json.hpp>

namespace st2 {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

// Accepts "p", "p/q", and decimal or scientific literals ("0.25", "1e-3").
// Decimals are converted exactly, so "0.1" is 1/10 rather than its binary
// neighbour.
Rational parse_rational(std::string_view text);

// Exact value of a double.
Rational rational_from_double(double x);

// JSON forms: [num, den], integer, float (read through its shortest decimal
// spelling), or a string handled by parse_rational.
Rational rational_from_json(const nlohmann::json& j);
nlohmann::json rational_to_json(const Rational& q);

std::string to_string(const Rational& q);
double to_double(const Rational& q);

// Dense exact linear algebra, row-major.
using QMat = std::vector<std::vector<Rational>>;

std::size_t rank_q(QMat m);
// Basis of {x : m x = 0}, one vector per entry.
std::vector<std::vector<Rational>> nullspace_q(const QMat& m, std::size_t cols);
// Some solution of a x = b, or nullopt when inconsistent.
std::optional<std::vector<Rational>> solve_q(const QMat& a, const std::vector<Rational>& b,
                                             std::size_t cols);
// Scales a rational vector to a primitive integer vector.
std::vector<Integer> primitive_integer(const std::vector<Rational>& v);

}  // namespace st2

#endif  // ST2_RATIONAL_HPP_
