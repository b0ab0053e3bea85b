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

#ifndef ST2_TROPICAL_HPP_
#define ST2_TROPICAL_HPP_

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linalg.hpp"
#include "rational.hpp"

namespace st2 {

class BoundingMatrix {
 public:
  BoundingMatrix() = default;
  // Throws on negative entries or a non-square shape. Missing labels default
  // to "1".."n".
  explicit BoundingMatrix(std::vector<std::vector<Rational>> entries,
                          std::vector<std::string> labels = {});

  static BoundingMatrix zero(std::size_t n);
  static BoundingMatrix from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t size() const { return e_.size(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return e_[i][j]; }
  const std::vector<std::vector<Rational>>& entries() const { return e_; }
  const std::vector<std::string>& labels() const { return labels_; }
  RMat to_double() const;

  bool operator==(const BoundingMatrix& o) const { return e_ == o.e_; }

 private:
  std::vector<std::vector<Rational>> e_;
  std::vector<std::string> labels_;
};

// Componentwise bound for host_order_bound: either a finite value >= 1 or
// unbounded.
struct Rho {
  bool unbounded = true;
  Rational value = 1;
  static Rho infinite() { return {}; }
  static Rho finite(Rational v) { return {false, std::move(v)}; }
};

struct CycleVerdict {
  bool decreasing = true;
  std::vector<std::size_t> witness;  // vertex sequence, first vertex not repeated
  Rational product = 0;              // exact product along the witness
  double log_product = 0;
  bool exact = true;  // false when the floating path was used
};

// Exact walk-product recursion for n <= kExactCycleLimit, log-space recursion
// with tolerance kCycleTol per edge above that.
inline constexpr std::size_t kExactCycleLimit = 12;
inline constexpr double kCycleTol = 1e-12;

CycleVerdict check_decreasing_cycle(const BoundingMatrix& eps);

bool cone_contains(const BoundingMatrix& eps, const std::vector<Rational>& t);
bool cone_contains(const BoundingMatrix& eps, const std::vector<double>& t);

// Point of the cone with max component 1, or nullopt when the cone is empty.
std::optional<std::vector<double>> cone_sample(const BoundingMatrix& eps,
                                               double margin = 1e-3);

std::vector<Rational> prescribed_order_ray(const std::vector<Rational>& m,
                                           const Rational& tau);

BoundingMatrix complex_bounding_matrix(const std::vector<Rational>& m,
                                       int adjacency_band = 1);

// Bounding matrix of a complex whose differentials are grouped. Each group
// must hold differentials of one common order. Entry (l, k) is
// (m_l - 1) / m_k when some member of group l is within the band of some
// member of group k.
BoundingMatrix grouped_complex_bounding_matrix(
    const std::vector<Rational>& m, const std::vector<std::vector<std::size_t>>& groups,
    int adjacency_band = 1);

Rational host_order_bound(const BoundingMatrix& eps, const std::vector<Rational>& t,
                          const std::vector<Rho>& rho);

BoundingMatrix bounding_direct_sum(const BoundingMatrix& a, const BoundingMatrix& b);

// eps_ij = max(i - j, 0) on s indices.
BoundingMatrix nilpotent_generic_matrix(int s);
// eps_ij = floor((i - 1) / j) for i > j, zero otherwise.
BoundingMatrix carnot_matrix(int s);
BoundingMatrix rumin_matrix();
BoundingMatrix g2_matrix();

}  // namespace st2

#endif  // ST2_TROPICAL_HPP_
