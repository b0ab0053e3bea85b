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

#ifndef ST2_LINALG_HPP_
#define ST2_LINALG_HPP_

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace st2 {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Relative tolerance used by is_hermitian: |H - H*| <= tol * dim * max|H_ij|.
inline constexpr double kHermitianTol = 1e-12;

// Eigenvalues at or below this fraction of the spectral radius are treated as
// exact zeros by the functional calculus.
inline constexpr double kKernelRel = 1e-11;

struct Eigh {
  RVec values;  // ascending
  Mat vectors;
};

bool is_hermitian(const Mat& h, double tol = kHermitianTol);
// Throws std::invalid_argument naming `what` when h is not Hermitian.
void require_hermitian(const Mat& h, const std::string& what);

Eigh eigh(const Mat& h);
double kernel_threshold(const RVec& eigenvalues);

Mat hfunc(const Eigh& e, const std::function<double(double)>& f);
Mat hfunc(const Mat& h, const std::function<double(double)>& f);
Mat hfunc_c(const Eigh& e, const std::function<cd(double)>& f);

Mat commutator(const Mat& a, const Mat& b);
Mat anticommutator(const Mat& a, const Mat& b);
double opnorm(const Mat& a);
RVec singular_values(const Mat& a);  // descending
double max_abs(const Mat& a);
Mat kron(const Mat& a, const Mat& b);
Mat identity(Eigen::Index n);
double min_eigenvalue(const Mat& h);

struct Fit {
  double slope = 0;
  double intercept = 0;
  double stderr_slope = 0;
  int points = 0;
};

Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y);
// Least squares of log y against log x. Nonpositive samples are skipped.
// With upper_half, only the larger half of the x values is used.
Fit loglog_fit(const std::vector<double>& x, const std::vector<double>& y,
               bool upper_half = false);

}  // namespace st2

#endif  // ST2_LINALG_HPP_
