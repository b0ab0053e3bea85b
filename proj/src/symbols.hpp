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

#ifndef ST2_SYMBOLS_HPP_
#define ST2_SYMBOLS_HPP_

#include <vector>

#include <Eigen/Dense>

#include "linalg.hpp"
#include "report.hpp"

namespace st2 {

using R2 = Eigen::Vector2d;
using M2 = Eigen::Matrix2d;

// Rotation by a quarter turn; the second frame vector is J applied to the first.
M2 rotation_j();

struct CharacterF {
  M2 f;
  M2 e1, e2;     // eigenprojections onto span xi and span J xi
  double l1, l2;  // |xi|^2, |xi|^4
};

// F(xi) = xi xi* + |xi|^2 (J xi)(J xi)*. Throws on xi = 0.
CharacterF character_matrix_f(const R2& xi);

// A_alpha(xi) = (xi (Jv)* + v (J xi)*)(1 + F(xi))^{-1/2 + alpha}.
M2 a_alpha(const R2& xi, const R2& v, double alpha);
double a_alpha_norm(const R2& xi, const R2& v, double alpha);

struct RayProfile {
  std::vector<double> t;
  std::vector<double> norm;
  Fit fit;
};

// |A_alpha(t J v)| along t_grid, with a log-log fit over the whole grid.
RayProfile ray_profile(const R2& v, double alpha, const std::vector<double>& t_grid);
std::vector<double> log_grid(double lo, double hi, int n);

// Sup of |A_alpha| over polar grids of the disc of radius T for each T in
// the ladder and unit v on a circle grid; slope fitted on the upper half.
Report naive_rollup_demo(const std::vector<double>& ladder, const std::vector<double>& alphas);

// Hermite basis adapted to lambda: X = s(a - a^+), Y = i sign(lambda) s(a + a^+),
// Z = i lambda, s = (|lambda|/2)^{1/2}, so [X, Y] = Z.
struct OscillatorTruncation {
  int n = 64;
  double lambda = 1;
  int padding = 8;

  int size() const { return n + padding; }
  Mat x() const;
  Mat y() const;
  Mat z() const;
};

struct RuminSymbols {
  Mat d0;  // (X, Y)^T
  Mat d1;  // [[Z + XY, -X^2], [Y^2, Z - YX]]
  Mat d2;  // (Y, -X)
};

// Blocks on the padded space.
RuminSymbols rumin_symbol_matrices(const OscillatorTruncation& tr);

// Compresses an operator on (padded)^copies to the interior indices.
Mat interior(const Mat& m, int padded, int n, int copies_rows, int copies_cols);

// Composition residuals, smallest interior singular values, cohomology
// dimensions of the interior-compressed Laplacians (eigenvalues below
// 1e-6 times the largest), and the padded-versus-unpadded difference.
Report rockland_check(const OscillatorTruncation& tr);

}  // namespace st2

#endif  // ST2_SYMBOLS_HPP_
