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

#ifndef ST2_NILPOTENT_HPP_
#define ST2_NILPOTENT_HPP_

#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "opcalc.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "tropical.hpp"

namespace st2 {

// Nilpotent Lie algebra in a basis adapted to the lower central series:
// basis vectors are grouped by layer 1..s, layer j spanning g_j / g_{j+1}.
class GradedNilpotentAlgebra {
 public:
  struct Constant {
    int a, b, c;
    Rational value;  // [e_a, e_b] contains value * e_c
  };

  GradedNilpotentAlgebra() = default;
  // `brackets` lists [e_a, e_b] for a < b; antisymmetry fills the rest.
  GradedNilpotentAlgebra(std::vector<int> layer_dims, std::vector<Constant> brackets,
                         bool carnot, std::string name = "");

  static GradedNilpotentAlgebra from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  // Builds the algebra spanned by exact matrices, which then also serve as
  // its faithful representation. Basis order must follow the layers.
  static GradedNilpotentAlgebra from_matrix_basis(const std::vector<QMat>& basis,
                                                  std::vector<int> layer_dims, bool carnot,
                                                  std::string name = "");

  static GradedNilpotentAlgebra abelian(int n);
  static GradedNilpotentAlgebra heisenberg();
  // Standard filiform algebra of dimension n: [e1, e_i] = e_{i+1}, with
  // e1, e2 in layer 1 and one basis vector in each later layer.
  static GradedNilpotentAlgebra filiform(int n);
  // Strictly upper triangular n x n matrices, graded by superdiagonal.
  static GradedNilpotentAlgebra upper_triangular(int n);

  int dim() const { return dim_; }
  int step() const { return static_cast<int>(layer_dims_.size()); }
  bool carnot() const { return carnot_; }
  const std::string& name() const { return name_; }
  const std::vector<int>& layer_dims() const { return layer_dims_; }
  int layer_of(int basis_index) const { return layer_of_[basis_index]; }
  std::vector<std::string> labels() const;  // "(j,k)"
  int homogeneous_dimension() const;
  const std::vector<Constant>& constants() const { return consts_; }
  const std::vector<QMat>& representation() const { return rep_; }

  template <class T>
  std::vector<T> bracket(const std::vector<T>& x, const std::vector<T>& y) const;

  // Antisymmetry, Jacobi, filtration, lower central series dimensions and, if
  // flagged Carnot, grading and generation by layer 1. Exact arithmetic.
  Report validate() const;

 private:
  int dim_ = 0;
  std::vector<int> layer_dims_;
  std::vector<int> layer_of_;
  std::vector<Constant> consts_;  // all nonzero (a, b, c), both orders
  std::vector<double> consts_d_;
  bool carnot_ = false;
  std::string name_;
  std::vector<QMat> rep_;
};

// log(exp X exp Y) through the Dynkin form of the series, to order 6.
template <class T>
std::vector<T> bch_multiply(const GradedNilpotentAlgebra& g, const std::vector<T>& x,
                            const std::vector<T>& y);

// Sum over words of length n of |c_w| / n; used by the bound certificate.
double bch_coefficient_mass(int n);

enum class Chart {
  kExponential,
  // (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab'); Heisenberg only.
  kSecondKind,
};

std::vector<Rational> second_kind_to_exponential(const std::vector<Rational>& p);
std::vector<Rational> exponential_to_second_kind(const std::vector<Rational>& p);

class WeightFamily {
 public:
  // The default Clifford module has dimension 2^ceil(dim/2) and is graded;
  // graded = false gives the irreducible module, 2^floor(dim/2).
  WeightFamily(GradedNilpotentAlgebra g, Chart chart = Chart::kExponential, bool graded = true);

  const GradedNilpotentAlgebra& algebra() const { return g_; }
  Chart chart() const { return chart_; }
  int steps() const { return g_.step(); }
  Eigen::Index module_dim() const { return gammas_.gammas.front().rows(); }
  const CliffordGenerators& clifford() const { return gammas_; }

  // l_j(x) = Sum_k x_{j,k} gamma_{j,k}; j is 1-based.
  Mat ell(int j, const std::vector<double>& coords) const;
  // |l_j(x)|, i.e. the Euclidean norm of layer j of x.
  double layer_norm(int j, const std::vector<double>& coords) const;
  Rational layer_norm_sq(int j, const std::vector<Rational>& coords) const;

  template <class T>
  std::vector<T> multiply(const std::vector<T>& g, const std::vector<T>& h) const;

 private:
  GradedNilpotentAlgebra g_;
  Chart chart_;
  CliffordGenerators gammas_;
};

struct DefectPair {
  double raw = 0;
  double normalized = 0;
};

// Per layer i: |l_i(gh) - l_i(h)| and that divided by
// 1 + Sum_{j : eps_ij > 0} |l_j(h)|^{eps_ij}.
std::vector<DefectPair> translation_defect(const WeightFamily& w, const std::vector<double>& g,
                                           const std::vector<double>& h, const RMat& eps);

// Bound on |l_i(gh) - l_i(h)| for eps_ij = max(i-j, 0) assembled from the
// structure constants, the BCH coefficient mass and power-mean inequalities.
// Valid on integer points.
std::vector<double> generic_bound_certificate(const WeightFamily& w,
                                              const std::vector<double>& g,
                                              const std::vector<double>& h);

struct LatticeSampling {
  long enumerate_limit = 2000000;  // enumerate the whole ball up to this many points
  long random_points = 20000;      // otherwise: axes and coordinate planes plus these
  std::uint64_t seed = 1;
};

std::vector<std::vector<double>> lattice_ball(int dim, double radius,
                                              const LatticeSampling& opt = {});

struct TranslationBoundOptions {
  std::vector<double> radii{5, 10, 20, 40};
  std::vector<std::vector<double>> g_samples;  // defaults to basis vectors
  double slope_tol = 0.05;
  double delta = 0.25;
  bool cross_check = true;
  LatticeSampling sampling;
};

Report verify_translation_bound(const WeightFamily& w, const BoundingMatrix& eps,
                                const TranslationBoundOptions& opt = {});

struct LatticeTruncation {
  std::vector<std::vector<double>> points;  // chart coordinates, integer valued
  OperatorCollection coll;                  // (M_{l_j}) on l^2(points) x V
  int module_dim = 0;

  // Left translation by g, rows and columns touching points whose image
  // leaves the ball are masked when `masked`.
  Mat translation(const WeightFamily& w, const std::vector<double>& g, bool masked) const;
  std::size_t index_of(const std::vector<double>& p) const;  // npos when absent

  std::map<std::vector<long>, std::size_t> index;
  // Translation images that were not lattice points (exponential chart).
  mutable long dropped = 0;
};

LatticeTruncation lattice_truncation(const WeightFamily& w, double radius,
                                     std::size_t max_points = 4000);

struct WeightCounting {
  std::vector<double> spectrum;  // Sum_j |l_j(h)|^{t_j} over the ball
  double lambda_max = 0;         // complete below this value
  Fit fit;
};

// Counting exponent of Sum_j |l_j(h)|^{t_j} over integer points. Every point
// outside the ball has a value at least lambda_max, the minimum over the
// shell R < |h| <= R + 1.
WeightCounting weight_counting(const WeightFamily& w, const std::vector<double>& t,
                               double radius);

// Exact checks of l_j(delta_t g) = t^j l_j(g) and of delta_t commuting with
// the group law on random rational samples; the assembled symbol
// Sum sign(l_j)|l_j|^{tau/j} scaling by t^{-tau}; and U_t M U_t* = t^{-j} M
// pointwise.
Report dilation_scaling_check(const WeightFamily& w, double tau, const Rational& t,
                              int samples, std::uint64_t seed);

}  // namespace st2

#endif  // ST2_NILPOTENT_HPP_
