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

#include <functional>
#include <random>

#include "tropical.hpp"

using namespace st2;

namespace {

// Oracle: enumerate simple cycles by DFS from their smallest vertex and
// multiply exactly. Any cycle splits into simple cycles, so this decides the
// condition.
bool simple_cycles_decreasing(const BoundingMatrix& e) {
  const std::size_t n = e.size();
  bool ok = true;
  std::vector<bool> used(n, false);
  std::function<void(std::size_t, std::size_t, Rational)> dfs = [&](std::size_t start, std::size_t v,
                                                                   Rational prod) {
    for (std::size_t w = start; w < n && ok; ++w) {
      if (e(v, w) == 0) continue;
      Rational p = prod * e(v, w);
      if (w == start) {
        if (p >= 1) ok = false;
      } else if (!used[w]) {
        used[w] = true;
        dfs(start, w, p);
        used[w] = false;
      }
    }
  };
  for (std::size_t s = 0; s < n && ok; ++s) {
    used[s] = true;
    dfs(s, s, 1);
    used[s] = false;
  }
  return ok;
}

BoundingMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> num(0, 6), den(1, 6), zero(0, 2);
  std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n));
  for (auto& row : e)
    for (auto& v : row) v = zero(rng) == 0 ? Rational(0) : Rational(num(rng), den(rng) * 2);
  return BoundingMatrix(std::move(e));
}

}  // namespace

TEST_CASE("golden matrices satisfy the cycle condition") {
  CHECK(check_decreasing_cycle(rumin_matrix()).decreasing);
  CHECK(check_decreasing_cycle(g2_matrix()).decreasing);
  CHECK(check_decreasing_cycle(nilpotent_generic_matrix(5)).decreasing);
  CHECK(check_decreasing_cycle(carnot_matrix(5)).decreasing);
  CHECK(cone_contains(rumin_matrix(), std::vector<Rational>{1, Rational(1, 2)}));
  CHECK(cone_contains(g2_matrix(),
                      std::vector<Rational>{1, Rational(1, 3), Rational(1, 2), Rational(1, 3), 1}));
}

TEST_CASE("g2 entries by hand") {
  // (m_i - 1)/m_j on the band |i - j| <= 1 with m = (1,3,2,3,1).
  const auto& e = g2_matrix();
  CHECK(e(1, 0) == 2);
  CHECK(e(1, 1) == Rational(2, 3));
  CHECK(e(1, 2) == 1);
  CHECK(e(2, 1) == Rational(1, 3));
  CHECK(e(2, 2) == Rational(1, 2));
  CHECK(e(3, 4) == 2);
  CHECK(e(1, 3) == 0);
  CHECK(e(0, 1) == 0);
}

TEST_CASE("carnot and generic matrices") {
  auto c = carnot_matrix(5);
  CHECK(c(4, 1) == 2);  // floor(4/2)
  CHECK(c(3, 1) == 1);  // floor(3/2)
  CHECK(c(4, 2) == 1);  // floor(4/3)
  CHECK(c(2, 2) == 0);
  auto g = nilpotent_generic_matrix(5);
  CHECK(g(4, 0) == 4);
  CHECK(g(0, 4) == 0);
}

TEST_CASE("two-cycle with product 2 is rejected with witness") {
  BoundingMatrix e({{0, 2}, {1, 0}});
  auto v = check_decreasing_cycle(e);
  CHECK_FALSE(v.decreasing);
  CHECK(v.product == 2);
  CHECK(v.witness.size() == 2);
  CHECK_FALSE(cone_sample(e).has_value());
  BoundingMatrix f({{0, 2}, {2, 0}});
  CHECK_FALSE(cone_sample(f).has_value());
}

TEST_CASE("self loop at 1 is not decreasing") {
  BoundingMatrix e(std::vector<std::vector<Rational>>{{1}});
  CHECK_FALSE(check_decreasing_cycle(e).decreasing);
}

TEST_CASE("zero matrix samples to ones") {
  auto t = cone_sample(BoundingMatrix::zero(4));
  REQUIRE(t.has_value());
  for (double x : *t) CHECK(x == doctest::Approx(1.0));
}

TEST_CASE("rumin sample has t1 > t2") {
  auto t = cone_sample(rumin_matrix());
  REQUIRE(t.has_value());
  CHECK((*t)[0] > (*t)[1]);
  CHECK(cone_contains(rumin_matrix(), *t));
}

TEST_CASE("cycle verdict agrees with simple-cycle enumeration and sampling") {
  std::mt19937_64 rng(7);
  int agree = 0;
  for (int k = 0; k < 400; ++k) {
    std::size_t n = 1 + k % 6;
    BoundingMatrix e = random_matrix(rng, n);
    bool oracle = simple_cycles_decreasing(e);
    auto v = check_decreasing_cycle(e);
    CHECK(v.decreasing == oracle);
    auto t = cone_sample(e);
    CHECK(t.has_value() == oracle);
    if (t) CHECK(cone_contains(e, *t));
    if (!v.decreasing) {
      // The witness product is the exact product along the cycle.
      Rational p = 1;
      for (std::size_t i = 0; i < v.witness.size(); ++i)
        p *= e(v.witness[i], v.witness[(i + 1) % v.witness.size()]);
      CHECK(p == v.product);
      CHECK(p >= 1);
    }
    agree += v.decreasing == oracle;
  }
  CHECK(agree == 400);
}

TEST_CASE("sampling on n = 7, 8") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 60; ++k) {
    BoundingMatrix e = random_matrix(rng, 7 + k % 2);
    auto t = cone_sample(e);
    CHECK(t.has_value() == check_decreasing_cycle(e).decreasing);
    if (t) CHECK(cone_contains(e, *t));
  }
}

TEST_CASE("floating path above the exact limit") {
  const std::size_t n = kExactCycleLimit + 3;
  std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i + 1 < n; ++i) e[i + 1][i] = 3;  // chain, no cycle
  e[0][n - 1] = Rational(1, 3);
  // Cycle product 3^(n-1) / 3 > 1.
  auto v = check_decreasing_cycle(BoundingMatrix(e));
  CHECK_FALSE(v.decreasing);
  CHECK_FALSE(v.exact);
  e[0][n - 1] = Rational(1, 1);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i + 1][i] = Rational(1, 2);
  CHECK(check_decreasing_cycle(BoundingMatrix(e)).decreasing);
}

TEST_CASE("cone is a convex cone") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lam(0.01, 100);
  for (int k = 0; k < 100; ++k) {
    BoundingMatrix e = random_matrix(rng, 2 + k % 4);
    auto t = cone_sample(e);
    if (!t) continue;
    auto u = cone_sample(e, 0.3);
    REQUIRE(u.has_value());
    std::vector<double> scaled(*t), mid(t->size());
    double l = lam(rng);
    for (std::size_t i = 0; i < t->size(); ++i) {
      scaled[i] *= l;
      mid[i] = ((*t)[i] + (*u)[i]) / 2;
    }
    CHECK(cone_contains(e, scaled));
    CHECK(cone_contains(e, mid));
  }
}

TEST_CASE("prescribed order rays lie in the complex cone") {
  auto ray = prescribed_order_ray({1, 3, 2, 3, 1}, 1);
  CHECK(ray == std::vector<Rational>{1, Rational(1, 3), Rational(1, 2), Rational(1, 3), 1});
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(2, 20);
  for (int k = 0; k < 200; ++k) {
    std::vector<Rational> m;
    for (int i = 0; i < 2 + k % 6; ++i) m.push_back(Rational(num(rng), 2));
    auto eps = complex_bounding_matrix(m);
    CHECK(cone_contains(eps, prescribed_order_ray(m, Rational(num(rng), 3))));
  }
  CHECK_THROWS_AS(prescribed_order_ray({1, Rational(1, 2)}, 1), std::invalid_argument);
  CHECK_THROWS_AS(prescribed_order_ray({1}, 0), std::invalid_argument);
}

TEST_CASE("grouped matrix for the rumin grouping") {
  // Orders (1,2,1) grouped as {d0, d2}, {d1}.
  auto e = grouped_complex_bounding_matrix({1, 2, 1}, {{0, 2}, {1}});
  CHECK(e == rumin_matrix());
}

TEST_CASE("order bound with unbounded rho") {
  // factor_i = max(t_i, 1); bound = max_ij factor_i / (1 - eps_ij t_i / t_j).
  Rational b = host_order_bound(rumin_matrix(), {1, Rational(1, 2)},
                                {Rho::infinite(), Rho::infinite()});
  CHECK(b == 2);
  Rational z = host_order_bound(BoundingMatrix::zero(2), {Rational(1, 2), Rational(1, 3)},
                                {Rho::infinite(), Rho::infinite()});
  CHECK(z == 1);
  CHECK_THROWS_AS(host_order_bound(rumin_matrix(), {Rational(1, 2), 1},
                                   {Rho::infinite(), Rho::infinite()}),
                  std::invalid_argument);
}

TEST_CASE("direct sum is block diagonal") {
  auto s = bounding_direct_sum(rumin_matrix(), BoundingMatrix({{Rational(1, 2)}}));
  REQUIRE(s.size() == 3);
  CHECK(s(1, 0) == 1);
  CHECK(s(2, 2) == Rational(1, 2));
  CHECK(s(2, 0) == 0);
  CHECK(s(0, 2) == 0);
  CHECK(check_decreasing_cycle(s).decreasing);
}

TEST_CASE("json round trip and validation") {
  auto j = g2_matrix().to_json();
  CHECK(BoundingMatrix::from_json(j) == g2_matrix());
  CHECK_THROWS_AS(BoundingMatrix({{0, -1}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(BoundingMatrix({{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(cone_contains(rumin_matrix(), std::vector<Rational>{1}), std::invalid_argument);
  CHECK_THROWS_AS(cone_contains(rumin_matrix(), std::vector<Rational>{1, 0}), std::invalid_argument);
  auto parsed = BoundingMatrix::from_json(nlohmann::json::parse(R"({"entries": [[0, "1/2"], [0.25, [1, 3]]]})"));
  CHECK(parsed(0, 1) == Rational(1, 2));
  CHECK(parsed(1, 0) == Rational(1, 4));
  CHECK(parsed(1, 1) == Rational(1, 3));
}
