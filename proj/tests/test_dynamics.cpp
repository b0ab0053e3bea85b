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

#include "dynamics.hpp"

using namespace st2;

TEST_CASE("unipotent integer matrices") {
  CHECK(nilpotency_step({{1, 1}, {0, 1}}) == 1);
  CHECK(nilpotency_step({{1, 0}, {0, 1}}) == 0);
  CHECK(nilpotency_step({{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}) == 2);
  CHECK_FALSE(nilpotency_step({{2, 1}, {1, 1}}).has_value());
  for (long n : {-7L, -1L, 0L, 3L, 12L}) CHECK(int_power({{1, 1}, {0, 1}}, n) == IMat{{1, n}, {0, 1}});
  // sl3 unipotent: A^{-n} e3 = (n(n+1)/2, -n, 1).
  IMat a{{1, 1, 0}, {0, 1, 1}, {0, 0, 1}};
  for (long n = 1; n <= 20; ++n) CHECK(int_apply(int_power(a, -n), {0, 0, 1}) == IVec{n * (n + 1) / 2, -n, 1});
  CHECK_THROWS_AS(int_power({{2, 0}, {0, 1}}, -1), std::domain_error);
}

TEST_CASE("torus truncation indexing and dirac") {
  TorusTruncation tr(2, 3);
  CHECK(tr.modes() == 49);
  for (long m = 0; m < tr.modes(); ++m) CHECK(tr.mode_index(tr.mode(m)) == m);
  CHECK(tr.mode_index({4, 0}) == -1);
  Mat d(tr.dirac());
  CHECK(is_hermitian(d));
  // D^2 = |y|^2 with the identity Gram matrix.
  Mat d2 = d * d;
  for (long m = 0; m < tr.modes(); ++m) {
    IVec y = tr.mode(m);
    for (Eigen::Index s = 0; s < tr.spinor_dim(); ++s) {
      Eigen::Index i = m * tr.spinor_dim() + s;
      CHECK(std::abs(d2(i, i) - static_cast<double>(y[0] * y[0] + y[1] * y[1])) < 1e-12);
    }
  }
}

TEST_CASE("noncommutative torus commutator norms") {
  RMat th(2, 2), gram(2, 2);
  th << 0, 0.3, -0.3, 0;
  gram << 2, 0.5, 0.5, 1;
  TorusTruncation tr(2, 12, th, gram);
  IMat shear{{1, 1}, {0, 1}};
  for (long n = 0; n <= 5; ++n) {
    NcNorm v = nctorus_commutator_norm(tr, {0, 1}, shear, n);
    REQUIRE_FALSE(v.overflow);
    // |V A^n x| with A^n x = (n, 1): (n,1) Gram (n,1)^T.
    double expect = std::sqrt(2.0 * n * n + 1.0 * n + 1.0);
    CHECK(v.closed_form == doctest::Approx(expect).epsilon(1e-12));
    CHECK(v.matrix == doctest::Approx(expect).epsilon(1e-10));
  }
  CHECK(nctorus_commutator_norm(tr, {0, 1}, shear, 40).overflow);
}

TEST_CASE("classical torus commutator for a single mode") {
  // alpha_n(e^{2 pi i x}) = e^{2 pi i (x - n y)}; |[D, f]| = |grad f| = 2 pi (1 + n^2)^{1/2}.
  TrigPoly ex{{{{1, 0}, cd(1)}}};
  for (long n : {0L, 1L, 3L, 6L}) {
    auto c = classical_torus_commutator(ex, n, 16);
    CHECK_FALSE(c.overflow);
    CHECK(c.norm == doctest::Approx(2 * M_PI * std::sqrt(1.0 + n * n)).epsilon(1e-9));
    CHECK(c.dx_sup == doctest::Approx(2 * M_PI).epsilon(1e-9));
  }
  CHECK(classical_torus_commutator(ex, 20, 16).overflow);
  Report r = classical_torus_bound(ex, {0, 1, 2, 3, 4}, 16);
  CHECK(r.passed());
}

TEST_CASE("crossed product shear diagnostic") {
  IMat shear{{1, 1}, {0, 1}};
  Report bounded = crossed_shear_diagnostic(shear, {0, 1}, {4, 6, 8, 10}, 1.0);
  CHECK(bounded.data()["bounded"].get<bool>());
  Report raw = crossed_shear_diagnostic(shear, {0, 1}, {4, 6, 8, 10}, 0.0);
  CHECK_FALSE(raw.data()["bounded"].get<bool>());
  CHECK(raw.data()["slope"].get<double>() > 0.8);
}

TEST_CASE("crossed collection anticommutes") {
  CrossedTruncation ct{2, TorusTruncation(2, 2), {{1, 1}, {0, 1}}};
  auto coll = crossed_collection(ct);
  CHECK(coll.ops.size() == 2);
  CHECK_NOTHROW(validate_collection(coll));
}

TEST_CASE("mobius classification and sups") {
  Eigen::Matrix2cd par, ell, lox, id;
  par << 1, 1, 0, 1;
  ell << std::polar(1.0, 0.4), 0, 0, std::polar(1.0, -0.4);
  lox << 3, 0, 0, 1.0 / 3;
  id << 1, 0, 0, 1;
  CHECK(mobius_classify(par) == MobiusKind::kParabolic);
  CHECK(mobius_classify(ell) == MobiusKind::kElliptic);
  CHECK(mobius_classify(lox) == MobiusKind::kLoxodromic);
  CHECK(mobius_classify(id) == MobiusKind::kIdentity);
  // z -> 9z: derivative 9, sup of 9 (1 + |z|^2) / (1 + 81 |z|^2) is 9 at z = 0.
  CHECK(mobius_closed_form(MobiusKind::kLoxodromic, 3.0, 1) == doctest::Approx(9.0));
  CHECK(mobius_grid_sup(lox, 1, 201) == doctest::Approx(9.0).epsilon(0.01));
  // z -> z + 1: (1 + |z|^2)/(1 + |z + 1|^2) peaks at (3 + sqrt 5)/2.
  CHECK(mobius_closed_form(MobiusKind::kParabolic, 1, 1) == doctest::Approx((3 + std::sqrt(5.0)) / 2));
  CHECK(mobius_grid_sup(par, 1, 201) == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(0.01));
  CHECK(mobius_grid_sup(ell, 5, 101) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("adjoint growth degrees") {
  std::vector<double> grid;
  for (int k = 0; k <= 30; ++k) grid.push_back(std::pow(10.0, 2.0 * k / 30));
  auto h = StructureConstants::of(GradedNilpotentAlgebra::heisenberg());
  auto a = adjoint_growth(h, {1, 0, 0}, grid);
  CHECK(a.top_power == 1);
  CHECK(a.fitted_degree == doctest::Approx(1.0).epsilon(0.15));
  CHECK(adjoint_growth(h, {0, 0, 1}, grid).top_power == 0);
  // Ad_{exp te} f = f + t h - t^2 e.
  auto s = adjoint_growth(StructureConstants::sl2(), {0, 1, 0}, grid);
  CHECK(s.top_power == 2);
  CHECK(s.fitted_degree == doctest::Approx(2.0).epsilon(0.1));
  CHECK_THROWS_AS(adjoint_growth(StructureConstants::sl2(), {1, 0, 0}, grid), std::domain_error);
}
