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

#ifndef ST2_OPCALC_HPP_
#define ST2_OPCALC_HPP_

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "report.hpp"

namespace st2 {

struct OperatorCollection {
  std::vector<Mat> ops;
  std::optional<Mat> grading;
  double anticommute_tol = 1e-10;

  Eigen::Index dim() const;
};

struct AnticommuteDefect {
  double max_defect = 0;  // max entry of D_j D_k + D_k D_j, or of the grading relations
  int j = -1;
  int k = -1;  // k == -1 with j >= 0 flags the grading relation for D_j
};

AnticommuteDefect anticommute_defect(const OperatorCollection& c);
// Checks shapes, Hermiticity, anticommutation and grading relations. Throws
// std::invalid_argument naming the worst offender.
void validate_collection(const OperatorCollection& c);

struct CliffordGenerators {
  int n = 0;
  std::vector<Mat> gammas;
  std::optional<Mat> grading;
};

// Jordan-Wigner construction from Pauli matrices. The default module is
// irreducible, of dimension 2^floor(n/2). With graded = true the module has
// dimension 2^ceil(n/2) and carries a grading anticommuting with all gammas.
CliffordGenerators clifford_generators(int n, bool graded = false);

// sign(D)|D|^t, with sign(0) = 0.
Mat signed_power(const Mat& d, double t);
// |D|^t for t > 0; kernel maps to 0.
Mat abs_power(const Mat& d, double t);
// D_j = U (gamma_j (x) H_j) U* with random diagonal H_j (about a tenth of the
// entries zero) and a random unitary U; dimension is the Clifford module size
// times `block`.
OperatorCollection random_anticommuting_collection(int count, Eigen::Index block,
                                                   std::mt19937_64& rng, bool graded = false);
Mat random_unitary(Eigen::Index n, std::mt19937_64& rng);
Mat random_hermitian(Eigen::Index n, std::mt19937_64& rng);

// Sum_j |D_j|^{2 t_j}.
Mat delta_form(const OperatorCollection& c, const std::vector<double>& t);
// Sum_j sign(D_j)|D_j|^{t_j}. Throws on anticommutation violations above the
// collection tolerance.
Mat assemble(const OperatorCollection& c, const std::vector<double>& t);
// Eigendecompositions of a validated collection, reusable across exponents.
struct CollectionSpectra {
  std::vector<Eigh> eig;
  std::vector<double> thr;
};
CollectionSpectra collection_spectra(const OperatorCollection& c);
Mat delta_form(const CollectionSpectra& s, const std::vector<double>& t);
Mat assemble(const CollectionSpectra& s, const std::vector<double>& t);
// D (1 + D^2)^{-1/2}.
Mat bounded_transform(const Mat& d);

// Checks C(1+D^2)^{-1/2m} +/- [F_D, a] >= 0 with
// C = M pi^{-1/2} Gamma(1/2m) / Gamma(1/2 + 1/2m), M = |[D,a](1+D^2)^{-1/2+1/2m}|.
// Also checks the singular value bound mu_{2k-1}([F,a]) <= C mu_k((1+D^2)^{-1/2m}).
Report sww_inequality_check(const Mat& d, const Mat& a, double m, double psd_tol = 1e-10);

struct LadderLevel {
  OperatorCollection coll;
  Mat a;
  double size = 0;
};

// For each level computes |[D_i, a](1 + Sum_j |D_j|^{eps_ij})^{-1}| and fits
// the log-log slope on the upper half of the ladder. Each positive eps_ij is
// also lowered by `delta` (clamped at 0) to show which entries are needed.
Report commutator_order_diagnostic(const std::vector<LadderLevel>& ladder, std::size_t i,
                                   const std::vector<double>& eps_row,
                                   double slope_tol = 0.05, double delta = 0.25);

// Fits mu_k((1 + x)^{-1}) ~ c k^{-1/p} over the upper half of k, where x runs
// over the supplied nonnegative spectrum.
Report summability_fit(std::vector<double> spectrum, double claimed_p,
                       double rel_tol = 0.05);

// Fits log N(L) against log L on [L_max/2, L_max], N(L) = #{x <= L}.
Fit counting_exponent(std::vector<double> spectrum, double lambda_max, int samples = 24);

// Tensor products with the parity rules: graded x graded, graded x ungraded,
// ungraded x graded, and ungraded x ungraded (which doubles by C^2).
OperatorCollection external_product(const OperatorCollection& a, const OperatorCollection& b);
OperatorCollection direct_sum(const OperatorCollection& a, const OperatorCollection& b);

struct ConformalLevel {
  OperatorCollection coll;
  Mat u;   // unitary or partial isometry
  Mat mu;  // invertible
  double size = 0;
  // Optional index subset on which differences are compared (interior).
  std::vector<Eigen::Index> interior;
};

Report conformal_guess_check(const std::vector<ConformalLevel>& ladder,
                             const std::vector<double>& t,
                             const std::vector<std::vector<double>>& eps,
                             double slope_tol = 0.05);

// Smallest eigenvalue of C (1 + Delta^t)^tau - (1 + Delta^s)^sigma for a
// commuting diagonal family; returns the smallest admissible C and the
// minimal eigenvalue after scaling it by (1 + margin).
struct InterpolationBound {
  double constant = 0;
  double min_eigenvalue = 0;
};
InterpolationBound interpolation_inequality(const std::vector<RVec>& diag_ops,
                                            const std::vector<double>& s, double sigma,
                                            const std::vector<double>& t, double tau,
                                            double margin = 1e-9);

// Interpolation region verifier.
struct InterpolationInput {
  Mat a;  // Hermitian
  Mat b;  // positive definite, commuting with a
  Mat t;
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  double y_max = 6.0;
  int y_samples = 201;
  // First pass on every stride-th sample; lines that decide a violation are
  // redone on all samples.
  int y_stride = 4;
  double slack = 1e-9;
  double commute_tol = 1e-9;
};
Report interpolation_region(const InterpolationInput& in);

}  // namespace st2

#endif  // ST2_OPCALC_HPP_
