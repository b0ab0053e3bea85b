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

#ifndef ST2_COMPLEXES_HPP_
#define ST2_COMPLEXES_HPP_

#include <optional>
#include <random>
#include <vector>

#include "opcalc.hpp"
#include "report.hpp"
#include "tropical.hpp"

namespace st2 {

struct FiniteHilbertComplex {
  std::vector<Eigen::Index> dims;  // n + 1 spaces
  std::vector<Mat> d;              // n differentials, d[i]: H_i -> H_{i+1}
  std::vector<int> orders;         // n orders m_i >= 1

  std::size_t length() const { return d.size(); }
  Eigen::Index total_dim() const;
  Eigen::Index offset(std::size_t degree) const;
  int total_order() const;              // m = prod m_i
  int exponent(std::size_t i) const;    // a_i = m / m_i
};

// Shapes, orders and d_{i+1} d_i = 0 (max entry reported).
Report validate(const FiniteHilbertComplex& c, double tol = 0.0);

// Delta_i = (d_i* d_i)^{a_i} + (d_{i-1} d_{i-1}*)^{a_{i-1}} on H_i.
std::vector<Mat> rumin_laplacians(const FiniteHilbertComplex& c);
// (Delta_k)^beta on the orthogonal complement of the harmonic space, as
// (d_k* d_k)^{a_k beta} + (d_{k-1} d_{k-1}*)^{a_{k-1} beta}. The two summands
// have orthogonal supports, and powering them separately keeps the dynamic
// range at that of d* d.
Mat rumin_laplacian_power(const FiniteHilbertComplex& c, std::size_t k, double beta);

using Partition = std::vector<std::vector<std::size_t>>;

// D_l = Sum_{i in group l} d_i + d_i* on the total space, graded by degree
// parity. An empty partition means singletons.
OperatorCollection to_collection(const FiniteHilbertComplex& c, const Partition& groups = {});
BoundingMatrix collection_bounding_matrix(const FiniteHilbertComplex& c,
                                          const Partition& groups = {});

// D_i |D_i|^alpha against d_i Delta_i^{alpha/2a_i} + d_i* Delta_{i+1}^{alpha/2a_i}.
Report signed_power_identity_check(const FiniteHilbertComplex& c, std::size_t i, double alpha);

// assemble(to_collection(c), tau/m) against
// Sum_i d_i Delta_i^{(tau-m_i)/2m} + d_i* Delta_{i+1}^{(tau-m_i)/2m}.
Report assembled_formula_check(const FiniteHilbertComplex& c, double tau);

struct HodgeDecomposition {
  Mat harmonic, exact, coexact;  // orthogonal projectors on H_i
  Eigen::Index betti = 0;
};
HodgeDecomposition hodge_decomposition(const FiniteHilbertComplex& c, std::size_t degree);
std::vector<Eigen::Index> betti_numbers(const FiniteHilbertComplex& c);

struct ConformalFactorParams {
  std::vector<double> lambda;  // one positive scalar per degree, n + 1 entries
  std::vector<double> s;       // exponent vector, one entry per differential
};

struct ConformalResult {
  Mat mu;                          // Hodge form, acting on the total space
  std::vector<double> mu_scalar;   // (lambda_{j+1}^{-1} lambda_j)^{tau s_j}
  std::vector<std::size_t> degenerate_blocks;  // differentials with d_j = 0
  Report report;
};

// Builds mu from the per-degree factors c_j = lambda_j / lambda_{j+1}: the
// block of H_j on Ran d_j* and the block of H_{j+1} on Ran d_j both get
// c_j^{tau s_j / 2}; harmonic parts get 1. Checks the compatibility
// condition, agreement of the scalar forms, and the equivariance identity for
// the rescaled complex c_j d_j.
ConformalResult conformal_factor_assemble(const FiniteHilbertComplex& c,
                                          const ConformalFactorParams& params, double tau);

// Random complex with small integer entries, so d_{i+1} d_i = 0 holds exactly
// in floating point. Each d_i for i > 0 is a random integer combination of
// the rows spanning the left null space of d_{i-1}.
FiniteHilbertComplex random_integer_complex(const std::vector<Eigen::Index>& dims,
                                            const std::vector<int>& orders, std::mt19937_64& rng,
                                            int entry_bound = 3);

}  // namespace st2

#endif  // ST2_COMPLEXES_HPP_
