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

#include <cmath>

#include "symbols.hpp"

using namespace st2;

namespace {

// Along xi = t J v with |v| = 1, A_alpha acts as
// t [(1 + t^2)^{alpha - 1/2} on Jv, -(1 + t^4)^{alpha - 1/2} on v].
double ray_norm_oracle(double t, double alpha) {
  return t * std::max(std::pow(1 + t * t, alpha - 0.5), std::pow(1 + t * t * t * t, alpha - 0.5));
}

}  // namespace

TEST_CASE("character matrix eigenpairs") {
  R2 xi(3, -4);
  auto c = character_matrix_f(xi);
  CHECK(c.l1 == doctest::Approx(25.0));
  CHECK(c.l2 == doctest::Approx(625.0));
  CHECK((c.f * xi - 25.0 * xi).norm() < 1e-10);
  R2 jxi = rotation_j() * xi;
  CHECK((c.f * jxi - 625.0 * jxi).norm() < 1e-9);
  CHECK((c.e1 + c.e2 - M2::Identity()).norm() < 1e-12);
  CHECK_THROWS_AS(character_matrix_f(R2(0, 0)), std::invalid_argument);
}

TEST_CASE("a_alpha along rays against the closed form") {
  R2 v(0.6, 0.8);
  R2 jv = rotation_j() * v;
  for (double alpha : {0.0, 0.1, 0.25, 0.5})
    for (double t : {0.5, 1.0, 7.0, 300.0})
      CHECK(a_alpha_norm(t * jv, v, alpha) == doctest::Approx(ray_norm_oracle(t, alpha)).epsilon(1e-10));
}

TEST_CASE("ray slopes approach 2 alpha") {
  R2 v(1, 0);
  for (double alpha : {0.05, 0.1, 0.25}) {
    auto p = ray_profile(v, alpha, log_grid(10, 1e4, 61));
    CHECK(std::abs(p.fit.slope - 2 * alpha) <= 0.05);
  }
  auto g = log_grid(1, 100, 3);
  CHECK(g[1] == doctest::Approx(10.0));
}

TEST_CASE("naive rollup demo") {
  Report r = naive_rollup_demo({10, 100, 1000, 10000}, {0.0, 0.25});
  CHECK(r.passed());
}

TEST_CASE("oscillator truncation commutator on the interior") {
  for (double l : {1.0, -2.0, 4.0}) {
    OscillatorTruncation tr{32, l, 8};
    Mat c = commutator(tr.x(), tr.y()) - tr.z();
    Mat inner = interior(c, tr.size(), tr.n, 1, 1);
    CHECK(max_abs(inner) < 1e-10 * std::abs(l) * tr.size());
    CHECK(is_hermitian(cd(0, 1) * tr.x()));
  }
}

TEST_CASE("rumin symbols compose to zero and are Rockland") {
  for (double l : {1.0, 2.0, -1.0}) {
    OscillatorTruncation tr{24, l, 6};
    auto s = rumin_symbol_matrices(tr);
    CHECK(s.d0.rows() == 2 * tr.size());
    CHECK(s.d1.cols() == 2 * tr.size());
    CHECK(max_abs(interior(s.d1 * s.d0, tr.size(), tr.n, 2, 1)) < 1e-8);
    CHECK(max_abs(interior(s.d2 * s.d1, tr.size(), tr.n, 1, 2)) < 1e-8);
    Report r = rockland_check(tr);
    CAPTURE(l);
    CHECK(r.passed());
  }
}
