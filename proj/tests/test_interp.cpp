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
#include <random>

#include "experiments.hpp"
#include "opcalc.hpp"

using namespace st2;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(a + (b - a) * k / (n - 1));
  return v;
}

// |[A |A|^{-1 + alpha}, T] B^{-beta}| by the functional calculus in the
// original basis.
double n_oracle(const InterpolationInput& in, double alpha, double beta) {
  Mat f = hfunc(in.a, [&](double x) { return (x > 0 ? 1.0 : -1.0) * std::pow(std::abs(x), alpha); });
  Mat w = hfunc(in.b, [&](double x) { return std::pow(x, -beta); });
  return opnorm(commutator(f, in.t) * w);
}

}  // namespace

TEST_CASE("interpolation region on random commuting pairs") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 3; ++k) {
    auto in = random_interpolation_input(12, rng, linspace(0, 0.95, 6), linspace(0, 1.9, 6));
    Report r = interpolation_region(in);
    CHECK(r.passed());
    const auto& grid = r.all_series().at("grid");
    for (const auto& row : grid.rows) {
      double n = n_oracle(in, row[0], row[1]);
      CHECK(row[2] == doctest::Approx(n).epsilon(1e-9));
      // The line supremum includes y = 0.
      CHECK(row[3] >= std::exp(row[0] * row[0]) * n * (1 - 1e-9));
    }
  }
}

TEST_CASE("coarse y pass is a lower estimate of the full line supremum") {
  std::mt19937_64 rng(8);
  auto in = random_interpolation_input(10, rng, linspace(0, 0.95, 5), linspace(0, 1.9, 5));
  auto full = in;
  full.y_stride = 1;
  Report rc = interpolation_region(in), rf = interpolation_region(full);
  CHECK(rc.passed());
  CHECK(rf.passed());
  const auto& c = rc.all_series().at("grid").rows;
  const auto& f = rf.all_series().at("grid").rows;
  REQUIRE(c.size() == f.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    CHECK(c[k][2] == f[k][2]);
    CHECK(c[k][3] <= f[k][3] * (1 + 1e-12));
  }
}

TEST_CASE("interpolation region input errors") {
  std::mt19937_64 rng(1);
  auto in = random_interpolation_input(6, rng, linspace(0, 0.9, 4), linspace(0, 1, 3));
  auto bad = in;
  bad.b = random_hermitian(6, rng);
  CHECK_THROWS_AS(interpolation_region(bad), std::invalid_argument);
  bad = in;
  bad.alpha_grid = {0, 0.5};
  CHECK_THROWS_AS(interpolation_region(bad), std::invalid_argument);
  bad = in;
  bad.alpha_grid = {0.5, 0.2, 0.9};
  CHECK_THROWS_AS(interpolation_region(bad), std::invalid_argument);
  bad = in;
  bad.y_stride = 0;
  CHECK_THROWS_AS(interpolation_region(bad), std::invalid_argument);
}

TEST_CASE("kernel of A is sign-completed") {
  std::mt19937_64 rng(3);
  auto in = random_interpolation_input(8, rng, linspace(0, 0.9, 4), linspace(0, 1, 3));
  Eigh e = eigh(in.a);
  RVec vals = e.values;
  vals(0) = 0;
  in.a = e.vectors * vals.cast<cd>().asDiagonal() * e.vectors.adjoint();
  in.a = (in.a + in.a.adjoint()) / 2.0;
  Mat bb = e.vectors.adjoint() * in.b * e.vectors;
  in.b = e.vectors * Mat(bb.diagonal().asDiagonal()) * e.vectors.adjoint();
  in.b = (in.b + in.b.adjoint()) / 2.0;
  Report r = interpolation_region(in);
  CHECK(r.data()["delta"].get<double>() > 0);
  CHECK(r.passed());
}
