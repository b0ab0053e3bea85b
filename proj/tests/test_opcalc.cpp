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

#include "opcalc.hpp"

using namespace st2;

namespace {

Mat diag(std::initializer_list<double> v) {
  Mat m = Mat::Zero(v.size(), v.size());
  Eigen::Index k = 0;
  for (double x : v) m(k, k) = x, ++k;
  return m;
}

Mat sigma(char w) {
  Mat p = Mat::Zero(2, 2);
  if (w == 'x') p << 0, 1, 1, 0;
  if (w == 'y') p << 0, cd(0, -1), cd(0, 1), 0;
  if (w == 'z') p << 1, 0, 0, -1;
  return p;
}

Mat number_op(int n) {
  Mat m = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = k;
  return m;
}

Mat shift(int n) {
  Mat s = Mat::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) s(k + 1, k) = 1;
  return s;
}

}  // namespace

TEST_CASE("signed and absolute powers on diagonals") {
  Mat d = diag({-4, 0, 9});
  CHECK(max_abs(signed_power(d, 0.5) - diag({-2, 0, 3})) < 1e-14);
  CHECK(max_abs(abs_power(d, 0.5) - diag({2, 0, 3})) < 1e-14);
  CHECK(max_abs(signed_power(d, 1.0) - d) < 1e-13);
  CHECK_THROWS_AS(signed_power(d, 0.0), std::invalid_argument);
  Mat nh = Mat::Zero(2, 2);
  nh(0, 1) = 1;
  CHECK_THROWS_AS(signed_power(nh, 1.0), std::invalid_argument);
}

TEST_CASE("clifford generators") {
  for (int n = 1; n <= 7; ++n)
    for (bool graded : {false, true}) {
      auto cg = clifford_generators(n, graded);
      REQUIRE(static_cast<int>(cg.gammas.size()) == n);
      const Eigen::Index dim = cg.gammas[0].rows();
      CHECK(dim == (1 << (graded ? (n + 1) / 2 : n / 2)));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Mat ac = anticommutator(cg.gammas[i], cg.gammas[j]);
          CHECK(max_abs(ac - (i == j ? 2.0 : 0.0) * identity(dim)) < 1e-14);
        }
      if (graded) {
        REQUIRE(cg.grading.has_value());
        CHECK(max_abs(*cg.grading * *cg.grading - identity(dim)) < 1e-14);
        for (const auto& g : cg.gammas) CHECK(max_abs(anticommutator(g, *cg.grading)) < 1e-14);
      }
    }
}

TEST_CASE("assembly of two pauli operators by hand") {
  // sign(3 sx) 3^{1/2} + 2 sy squares to (3 + 4) 1.
  OperatorCollection c;
  c.ops = {3.0 * sigma('x'), 2.0 * sigma('y')};
  Mat d = assemble(c, {0.5, 1.0});
  CHECK(max_abs(d * d - 7.0 * identity(2)) < 1e-13);
  CHECK(max_abs(delta_form(c, {0.5, 1.0}) - 7.0 * identity(2)) < 1e-13);
}

TEST_CASE("assembly identity on random collections") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> td(0.1, 1.0);
  for (int k = 1; k <= 5; ++k)
    for (bool graded : {false, true}) {
      auto c = random_anticommuting_collection(k, 6, rng, graded);
      validate_collection(c);
      std::vector<double> t;
      for (int j = 0; j < k; ++j) t.push_back(td(rng));
      Mat d = assemble(c, t);
      CHECK(is_hermitian(d));
      CHECK(max_abs(d * d - delta_form(c, t)) / static_cast<double>(c.dim()) < 1e-10);
      if (graded) CHECK(max_abs(anticommutator(d, *c.grading)) < 1e-10);
      CollectionSpectra spectra = collection_spectra(c);
      CHECK(max_abs(assemble(spectra, t) - d) < 1e-12);
      CHECK(max_abs(delta_form(spectra, t) - delta_form(c, t)) < 1e-12);
    }
}

TEST_CASE("collection validation names failures") {
  OperatorCollection c;
  c.ops = {sigma('x'), sigma('x')};
  CHECK_THROWS_AS(validate_collection(c), std::invalid_argument);
  CHECK_THROWS_AS(assemble(c, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(collection_spectra(c), std::invalid_argument);
  auto d = anticommute_defect(c);
  CHECK(d.j == 0);
  CHECK(d.k == 1);
  c.ops = {sigma('x'), Mat::Identity(3, 3)};
  CHECK_THROWS_AS(validate_collection(c), std::invalid_argument);
  c.ops = {sigma('x')};
  c.grading = sigma('x');
  CHECK_THROWS_AS(validate_collection(c), std::invalid_argument);
  c.grading = sigma('z');
  CHECK_NOTHROW(validate_collection(c));
}

TEST_CASE("bounded transform") {
  Mat d = diag({-2, 0, 1, 5});
  Mat f = bounded_transform(d);
  for (int k = 0; k < 4; ++k) {
    double x = d(k, k).real();
    CHECK(f(k, k).real() == doctest::Approx(x / std::sqrt(1 + x * x)).epsilon(1e-15));
  }
  std::mt19937_64 rng(1);
  for (int k = 0; k < 10; ++k) {
    Mat h = 10.0 * random_hermitian(20, rng);
    Mat fh = bounded_transform(h);
    Mat inv = (identity(20) + h * h).inverse();
    CHECK(max_abs(fh * fh - identity(20) + inv) < 1e-12);
  }
}

TEST_CASE("sww inequality holds with the gamma constant") {
  std::mt19937_64 rng(2);
  for (double m : {1.0, 1.5, 3.0}) {
    Mat d = 5.0 * random_hermitian(16, rng);
    Mat a = cd(0, 1) * random_hermitian(16, rng);
    Report r = sww_inequality_check(d, a, m);
    CHECK(r.passed());
    if (m == 1.0) {
      // Gamma(1/2) / (pi^{1/2} Gamma(1)) = 1.
      CHECK(r.data()["C"].get<double>() == doctest::Approx(r.data()["M"].get<double>()));
    }
  }
  Mat d = diag({1, 2});
  CHECK_THROWS_AS(sww_inequality_check(d, identity(2), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sww_inequality_check(d, cd(0, 1) * identity(2), 0.5), std::invalid_argument);
}

TEST_CASE("commutator order diagnostic on the number operator") {
  // [N, S N^{1/2}] = S N^{1/2}, of norm ~ n^{1/2}; the weight 1 + N^{1/2}
  // bounds it.
  std::vector<LadderLevel> ladder;
  for (int n : {16, 32, 64, 128}) {
    LadderLevel lv;
    lv.coll.ops = {number_op(n)};
    lv.a = shift(n) * abs_power(number_op(n), 0.5);
    lv.size = n;
    ladder.push_back(lv);
  }
  Report bounded = commutator_order_diagnostic(ladder, 0, {0.5});
  CHECK(bounded.passed());
  CHECK(bounded.data()["reduced"][0]["needed"].get<bool>());
  Report raw = commutator_order_diagnostic(ladder, 0, {0.0});
  CHECK_FALSE(raw.passed());
  CHECK(raw.fits().at("slope").slope == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("summability on the integer lattice") {
  // |k| over Z^2: N(L) ~ pi L^2, so mu_k ~ k^{-1/2} and p = 2.
  std::vector<double> eigs;
  for (int a = -60; a <= 60; ++a)
    for (int b = -60; b <= 60; ++b)
      if (a * a + b * b <= 3600) eigs.push_back(std::sqrt(static_cast<double>(a * a + b * b)));
  Report r = summability_fit(eigs, 2.0);
  CHECK(r.passed());
  CHECK_THROWS_AS(summability_fit({1, 2, 3}, 1.0), std::invalid_argument);
  std::vector<double> k;
  for (int i = 1; i <= 2000; ++i) k.push_back(i);
  CHECK(counting_exponent(k, 2000).slope == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("external products follow the parity rules") {
  std::mt19937_64 rng(9);
  auto ga = random_anticommuting_collection(2, 2, rng, true);
  auto gb = random_anticommuting_collection(3, 2, rng, true);
  auto ua = random_anticommuting_collection(3, 2, rng, false);
  auto ub = random_anticommuting_collection(1, 3, rng, false);
  auto gg = external_product(ga, gb);
  CHECK(gg.ops.size() == 5);
  CHECK(gg.grading.has_value());
  CHECK(gg.dim() == ga.dim() * gb.dim());
  CHECK_NOTHROW(validate_collection(gg));
  auto gu = external_product(ga, ub);
  CHECK_NOTHROW(validate_collection(gu));
  auto ug = external_product(ub, gb);
  CHECK_NOTHROW(validate_collection(ug));
  auto uu = external_product(ua, ub);
  CHECK(uu.dim() == 2 * ua.dim() * ub.dim());
  CHECK(uu.grading.has_value());
  CHECK_NOTHROW(validate_collection(uu));
  auto ds = direct_sum(ga, gb);
  CHECK(ds.ops.size() == 5);
  CHECK(ds.dim() == ga.dim() + gb.dim());
  CHECK_NOTHROW(validate_collection(ds));
}

TEST_CASE("conformal check with trivial action is bounded") {
  std::vector<ConformalLevel> ladder;
  for (int n : {8, 16, 32, 64}) {
    ConformalLevel lv;
    lv.coll.ops = {number_op(n)};
    lv.u = identity(n);
    lv.mu = 2.0 * identity(n);
    lv.size = n;
    ladder.push_back(lv);
  }
  // U D U* - mu D mu* = -3 N^t, relative to (1 + N)^t: bounded.
  Report r = conformal_guess_check(ladder, {0.5}, {{1.0}});
  CHECK(r.passed());
  ladder[0].mu = Mat::Zero(8, 8);
  CHECK_THROWS_AS(conformal_guess_check(ladder, {0.5}, {{1.0}}), std::invalid_argument);
}

TEST_CASE("interpolation inequality constant") {
  RVec d(4);
  d << 0, 1, 3, 10;
  auto same = interpolation_inequality({d}, {0.5}, 1.0, {0.5}, 1.0);
  CHECK(same.constant == doctest::Approx(1.0));
  CHECK(same.min_eigenvalue >= 0);
  auto weaker = interpolation_inequality({d}, {0.25}, 1.0, {0.5}, 1.0);
  CHECK(weaker.constant <= 1.0 + 1e-12);
  CHECK(weaker.min_eigenvalue >= 0);
  CHECK_THROWS_AS(interpolation_inequality({d}, {1.0}, 1.0, {0.5}, 1.0), std::invalid_argument);
}

TEST_CASE("random unitary is unitary") {
  std::mt19937_64 rng(4);
  Mat u = random_unitary(30, rng);
  CHECK(max_abs(u.adjoint() * u - identity(30)) < 1e-12);
}
