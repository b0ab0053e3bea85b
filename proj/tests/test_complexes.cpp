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

#include <doctest.h>

#include <random>

#include "complexes.hpp"

using namespace st2;

namespace {

FiniteHilbertComplex small_complex(std::vector<int> orders = {1, 1}) {
  FiniteHilbertComplex c;
  c.dims = {1, 2, 1};
  Mat d0(2, 1), d1(1, 2);
  d0 << 1, 1;
  d1 << 1, -1;
  c.d = {d0, d1};
  c.orders = std::move(orders);
  return c;
}

Eigen::Index rank(const Mat& m) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(1e-10);
  return lu.rank();
}

}  // namespace

TEST_CASE("hand complex") {
  auto c = small_complex();
  CHECK(validate(c).passed());
  CHECK(betti_numbers(c) == std::vector<Eigen::Index>{0, 0, 0});
  CHECK(c.total_order() == 1);
  CHECK(c.total_dim() == 4);
  CHECK(c.offset(2) == 3);
}

TEST_CASE("rumin laplacians by hand") {
  // Orders (1, 2): m = 2, a_0 = 2, a_1 = 1.
  auto c = small_complex({1, 2});
  auto lap = rumin_laplacians(c);
  REQUIRE(lap.size() == 3);
  // Delta_0 = (d0* d0)^2 = 2^2.
  CHECK(std::abs(lap[0](0, 0) - 4.0) < 1e-14);
  // Delta_1 = d1* d1 + (d0 d0*)^2, d0 d0* = [[1,1],[1,1]] squares to 2 [[1,1],[1,1]].
  Mat expect(2, 2);
  expect << 1 + 2, -1 + 2, -1 + 2, 1 + 2;
  CHECK(max_abs(lap[1] - expect) < 1e-14);
  // Delta_2 = d1 d1* = 2.
  CHECK(std::abs(lap[2](0, 0) - 2.0) < 1e-14);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(max_abs(rumin_laplacian_power(c, k, 1.0) - lap[k]) < 1e-12);
    Mat h = rumin_laplacian_power(c, k, 0.5);
    CHECK(max_abs(h * h - lap[k]) < 1e-12);
  }
}

TEST_CASE("random integer complexes are exact") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    std::vector<Eigen::Index> dims{2 + k % 3, 4, 5, 3};
    auto c = random_integer_complex(dims, {1, 2, 1}, rng);
    CHECK(validate(c).passed());
    for (std::size_t i = 0; i + 1 < c.d.size(); ++i) CHECK(max_abs(c.d[i + 1] * c.d[i]) == 0.0);
    // Betti numbers against ranks.
    auto b = betti_numbers(c);
    for (std::size_t deg = 0; deg < dims.size(); ++deg) {
      Eigen::Index r_out = deg < c.d.size() ? rank(c.d[deg]) : 0;
      Eigen::Index r_in = deg > 0 ? rank(c.d[deg - 1]) : 0;
      CHECK(b[deg] == dims[deg] - r_out - r_in);
    }
  }
}

TEST_CASE("hodge projectors") {
  std::mt19937_64 rng(3);
  auto c = random_integer_complex({3, 5, 4}, {1, 1}, rng);
  for (std::size_t k = 0; k < 3; ++k) {
    auto h = hodge_decomposition(c, k);
    for (const Mat* p : {&h.harmonic, &h.exact, &h.coexact}) CHECK(max_abs(*p * *p - *p) < 1e-10);
    CHECK(max_abs(h.exact * h.coexact) < 1e-10);
    CHECK(max_abs(h.harmonic * h.exact) < 1e-10);
  }
}

TEST_CASE("collections from complexes") {
  std::mt19937_64 rng(5);
  auto c = random_integer_complex({2, 4, 4, 2}, {1, 2, 1}, rng);
  auto coll = to_collection(c);
  CHECK(coll.ops.size() == 3);
  CHECK_NOTHROW(validate_collection(coll));
  auto grouped = to_collection(c, {{0, 2}, {1}});
  CHECK(grouped.ops.size() == 2);
  CHECK_NOTHROW(validate_collection(grouped));
  CHECK(collection_bounding_matrix(c, {{0, 2}, {1}}) == rumin_matrix());
  CHECK(collection_bounding_matrix(c) == complex_bounding_matrix({1, 2, 1}));
  CHECK_THROWS_AS(to_collection(c, {{0, 1}, {2}}), std::invalid_argument);
  CHECK_THROWS_AS(to_collection(c, {{0}, {1}}), std::invalid_argument);
  CHECK_THROWS_AS(to_collection(c, {{0, 2}, {1, 2}}), std::invalid_argument);
}

TEST_CASE("signed power and assembled formula") {
  std::mt19937_64 rng(8);
  for (auto orders : {std::vector<int>{1, 2, 1}, std::vector<int>{2, 1, 3}}) {
    auto c = random_integer_complex({2, 4, 4, 2}, orders, rng);
    for (std::size_t i = 0; i < 3; ++i)
      for (double a : {0.3, 1.0, 2.5}) CHECK(signed_power_identity_check(c, i, a).passed());
    for (double tau : {0.5, 1.0, 6.0}) CHECK(assembled_formula_check(c, tau).passed());
  }
  auto c = small_complex();
  CHECK_THROWS_AS(signed_power_identity_check(c, 5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(assembled_formula_check(c, 0), std::invalid_argument);
}

TEST_CASE("conformal factor") {
  std::mt19937_64 rng(21);
  auto c = random_integer_complex({2, 4, 4, 2}, {1, 2, 1}, rng);
  const double l = 3.0;
  ConformalFactorParams params{{l * l, l * l * l, std::pow(l, 5), std::pow(l, 6)}, {1.0, 0.5, 1.0}};
  auto res = conformal_factor_assemble(c, params, 1.0);
  CHECK(res.report.passed());
  for (double v : res.mu_scalar) CHECK(v == doctest::Approx(1 / l));
  ConformalFactorParams bad{{1, 2, 3, 4}, {1.0, 0.5, 1.0}};
  auto r2 = conformal_factor_assemble(c, bad, 1.0);
  CHECK_FALSE(r2.report.passed());
  CHECK_THROWS_AS(conformal_factor_assemble(c, {{1, 2}, {1}}, 1.0), std::invalid_argument);
}

TEST_CASE("shape errors") {
  auto c = small_complex();
  c.orders = {1};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = small_complex();
  c.d[1] = Mat::Zero(2, 2);
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = small_complex();
  c.d[1] << 1, 0;
  CHECK_FALSE(validate(c).passed());
}
