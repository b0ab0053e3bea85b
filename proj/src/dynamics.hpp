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

#ifndef ST2_DYNAMICS_HPP_
#define ST2_DYNAMICS_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "linalg.hpp"
#include "nilpotent.hpp"
#include "opcalc.hpp"
#include "rational.hpp"
#include "report.hpp"

namespace st2 {

using IMat = std::vector<std::vector<long>>;
using IVec = std::vector<long>;

// Minimal s with (A - 1)^{s+1} = 0, or nullopt when A is not unipotent.
std::optional<int> nilpotency_step(const IMat& a);
IMat int_power(const IMat& a, long n);  // n < 0 needs det A = +-1
IVec int_apply(const IMat& a, const IVec& x);

// Fourier modes [-K, K]^d tensored with a spinor space carrying
// c_i = Sum_j V_ij gamma_j, V = Gram^{1/2}, so that D = Sum_i y_i c_i.
class TorusTruncation {
 public:
  TorusTruncation(int d, int cutoff, RMat theta = {}, RMat gram = {});

  int d() const { return d_; }
  int cutoff() const { return k_; }
  const RMat& theta() const { return theta_; }
  const RMat& v() const { return v_; }
  Eigen::Index modes() const { return modes_; }
  Eigen::Index spinor_dim() const { return c_.front().rows(); }
  Eigen::Index dim() const { return modes_ * spinor_dim(); }

  long mode_index(const IVec& y) const;  // -1 outside the window
  IVec mode(long index) const;

  Eigen::SparseMatrix<cd> dirac() const;
  // Truncated l_Theta(x): delta_z -> e^{pi i <Theta x, z>} delta_{z + x}.
  Eigen::SparseMatrix<cd> translation(const IVec& x) const;
  const std::vector<Mat>& generators() const { return c_; }

 private:
  int d_;
  int k_;
  RMat theta_;
  RMat v_;
  std::vector<Mat> c_;
  Eigen::Index modes_;
};

// Operator norm by power iteration on A* A.
double sparse_norm(const Eigen::SparseMatrix<cd>& a, int max_iter = 500, double tol = 1e-15);

struct NcNorm {
  double matrix = 0;       // norm of [D, l(A^n x)] on the truncation
  double closed_form = 0;  // |V A^n x|
  bool overflow = false;   // A^n x leaves the window
};

NcNorm nctorus_commutator_norm(const TorusTruncation& tr, const IVec& x, const IMat& a, long n);

// Trigonometric polynomial Sum c_k e^{2 pi i k.theta} on T^2.
struct TrigPoly {
  std::vector<std::pair<std::array<long, 2>, cd>> terms;
};

struct TorusCommutator {
  double norm = 0;          // sup over the torus of |[D, alpha_n(a)]|
  double dx_sup = 0;        // |d_x a|_inf
  double grad_sup = 0;      // sup (|d_x a|^2 + |d_y a|^2)^{1/2}
  bool overflow = false;    // alpha_n(a) has modes outside [-K, K]^2
};

// alpha_n(a)(x, y) = a(x - n y, y) and D = -i(gamma_1 d_x + gamma_2 d_y).
// [D, alpha_n(a)] is multiplication by a matrix function, so its norm is the
// sup of the pointwise norm, taken on a grid resolving every mode.
TorusCommutator classical_torus_commutator(const TrigPoly& a, long n, int cutoff);

// Two-sided bound |n||d_x a| - C|grad a| <= norm <= |n||d_x a| + C|grad a|
// with the analytic C = sqrt(2), plus the smallest C fitting the samples.
Report classical_torus_bound(const TrigPoly& a, const std::vector<long>& ns, int cutoff);

struct CrossedTruncation {
  int window = 0;  // group window [-W, W]
  TorusTruncation base;
  IMat a;
};

// (M_N (x) gamma, 1 (x) D) on l^2([-W, W]) (x) base, ungraded (x) graded rule
// when the base spinor space is graded, else doubled by C^2.
OperatorCollection crossed_collection(const CrossedTruncation& ct);
// Regular representation of l(x): block n carries l(A^{-n} x).
Mat crossed_element(const CrossedTruncation& ct, const IVec& x);

// max_{|n| <= W} |[D, l(A^{-n} x)]| / (1 + |n|^eps21) over the ladder
// W = K; fitted on the upper half.
Report crossed_shear_diagnostic(const IMat& a, const IVec& x, const std::vector<int>& ladder,
                                double eps21, double slope_tol = 0.05);

enum class MobiusKind { kIdentity, kElliptic, kParabolic, kLoxodromic };
std::string to_string(MobiusKind k);

MobiusKind mobius_classify(const Eigen::Matrix2cd& g, double tol = 1e-12);

// Closed forms for the normal forms [[1,1],[0,1]], diag(lambda, 1/lambda).
double mobius_closed_form(MobiusKind kind, cd lambda, long n);

// Sup over the Riemann sphere of |tau'(z)| (1 + |z|^2) / (1 + |tau z|^2),
// tau = g^n, on a Cartesian box and a log-polar grid plus z = infinity.
double mobius_grid_sup(const Eigen::Matrix2cd& g, long n, int grid = 401);

struct StructureConstants {
  int dim = 0;
  std::vector<GradedNilpotentAlgebra::Constant> c;  // both orders
  static StructureConstants of(const GradedNilpotentAlgebra& g);
  static StructureConstants sl2();  // basis h, e, f
};

struct AdjointGrowth {
  double fitted_degree = 0;
  int top_power = 0;  // largest n with ad_X^n != 0
  std::vector<double> t;
  std::vector<double> norms;
};

// |Ad_{exp tX}| = |Sum_n t^n/n! ad_X^n| on t_grid. Throws when ad_X is not
// nilpotent.
AdjointGrowth adjoint_growth(const StructureConstants& g, const std::vector<Rational>& x,
                             const std::vector<double>& t_grid);

}  // namespace st2

#endif  // ST2_DYNAMICS_HPP_
