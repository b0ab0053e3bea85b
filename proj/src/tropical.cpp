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

#include "tropical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace st2 {

BoundingMatrix::BoundingMatrix(std::vector<std::vector<Rational>> entries,
                               std::vector<std::string> labels)
    : e_(std::move(entries)), labels_(std::move(labels)) {
  const std::size_t n = e_.size();
  for (const auto& row : e_) {
    if (row.size() != n) throw std::invalid_argument("bounding matrix is not square");
    for (const auto& v : row)
      if (v < 0) throw std::invalid_argument("bounding matrix has a negative entry");
  }
  if (labels_.empty())
    for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i + 1));
  if (labels_.size() != n)
    throw std::invalid_argument("bounding matrix labels do not match its size");
}

BoundingMatrix BoundingMatrix::zero(std::size_t n) {
  return BoundingMatrix(std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)));
}

BoundingMatrix BoundingMatrix::from_json(const nlohmann::json& j) {
  if (!j.contains("entries") || !j["entries"].is_array())
    throw std::invalid_argument("bounding matrix JSON needs an \"entries\" array");
  std::vector<std::vector<Rational>> rows;
  for (const auto& r : j["entries"]) {
    if (!r.is_array()) throw std::invalid_argument("bounding matrix rows must be arrays");
    std::vector<Rational> row;
    for (const auto& v : r) row.push_back(rational_from_json(v));
    rows.push_back(std::move(row));
  }
  std::vector<std::string> labels;
  if (j.contains("labels"))
    for (const auto& l : j["labels"]) labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
  return BoundingMatrix(std::move(rows), std::move(labels));
}

nlohmann::json BoundingMatrix::to_json() const {
  nlohmann::json j;
  j["labels"] = labels_;
  j["entries"] = nlohmann::json::array();
  for (const auto& row : e_) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& v : row) r.push_back(rational_to_json(v));
    j["entries"].push_back(std::move(r));
  }
  return j;
}

RMat BoundingMatrix::to_double() const {
  const auto n = static_cast<Eigen::Index>(size());
  RMat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = st2::to_double(e_[i][j]);
  return m;
}

namespace {

// Max-times walk recursion. W_L(i, j) is the best product over walks of
// length L from i to j; a cycle with product >= 1 exists iff some W_L(i, i),
// L <= n, reaches 1. Closed walks split into simple cycles, so one of the
// pieces of the best closed walk is a violating simple cycle.
template <class Weight, class Mul, class Violates>
std::optional<std::vector<std::size_t>> find_heavy_closed_walk(
    std::size_t n, const std::vector<std::vector<std::optional<Weight>>>& w, Mul mul,
    Violates violates) {
  using Row = std::vector<std::optional<Weight>>;
  std::vector<std::vector<std::vector<int>>> pred;  // pred[L](i, j)
  std::vector<Row> cur = w;
  pred.push_back(std::vector<std::vector<int>>(n, std::vector<int>(n, -1)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (w[i][j]) pred[0][i][j] = static_cast<int>(i);
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t i = 0; i < n; ++i) {
      if (cur[i][i] && violates(*cur[i][i], len)) {
        std::vector<std::size_t> walk(len + 1);
        walk[len] = i;
        for (std::size_t step = len; step >= 1; --step)
          walk[step - 1] = static_cast<std::size_t>(pred[step - 1][i][walk[step]]);
        return walk;
      }
    }
    if (len == n) break;
    std::vector<Row> next(n, Row(n));
    std::vector<std::vector<int>> p(n, std::vector<int>(n, -1));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (!cur[i][k]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (!w[k][j]) continue;
          Weight cand = mul(*cur[i][k], *w[k][j]);
          if (!next[i][j] || cand > *next[i][j]) {
            next[i][j] = cand;
            p[i][j] = static_cast<int>(k);
          }
        }
      }
    cur = std::move(next);
    pred.push_back(std::move(p));
  }
  return std::nullopt;
}

// Splits a closed walk (first == last) into simple cycles.
std::vector<std::vector<std::size_t>> split_cycles(const std::vector<std::size_t>& walk) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> stack;
  for (std::size_t v : walk) {
    auto it = std::find(stack.begin(), stack.end(), v);
    if (it != stack.end()) {
      out.emplace_back(it, stack.end());
      stack.erase(it + 1, stack.end());
    } else {
      stack.push_back(v);
    }
  }
  return out;
}

Rational cycle_product(const BoundingMatrix& eps, const std::vector<std::size_t>& c) {
  Rational p = 1;
  for (std::size_t k = 0; k < c.size(); ++k) p *= eps(c[k], c[(k + 1) % c.size()]);
  return p;
}

}  // namespace

CycleVerdict check_decreasing_cycle(const BoundingMatrix& eps) {
  const std::size_t n = eps.size();
  CycleVerdict v;
  std::optional<std::vector<std::size_t>> walk;
  if (n <= kExactCycleLimit) {
    std::vector<std::vector<std::optional<Rational>>> w(n, std::vector<std::optional<Rational>>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (eps(i, j) > 0) w[i][j] = eps(i, j);
    walk = find_heavy_closed_walk<Rational>(
        n, w, [](const Rational& a, const Rational& b) { return Rational(a * b); },
        [](const Rational& x, std::size_t) { return x >= 1; });
  } else {
    v.exact = false;
    std::vector<std::vector<std::optional<double>>> w(n, std::vector<std::optional<double>>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (eps(i, j) > 0) w[i][j] = std::log(to_double(eps(i, j)));
    walk = find_heavy_closed_walk<double>(
        n, w, [](double a, double b) { return a + b; },
        [](double x, std::size_t len) { return x >= -kCycleTol * static_cast<double>(len); });
  }
  if (!walk) return v;
  v.decreasing = false;
  double best = -std::numeric_limits<double>::infinity();
  for (auto& c : split_cycles(*walk)) {
    Rational p = cycle_product(eps, c);
    double lp = std::log(to_double(p));
    if (lp > best) {
      best = lp;
      v.witness = c;
      v.product = p;
      v.log_product = lp;
    }
  }
  return v;
}

bool cone_contains(const BoundingMatrix& eps, const std::vector<Rational>& t) {
  const std::size_t n = eps.size();
  if (t.size() != n) throw std::invalid_argument("cone_contains: dimension mismatch");
  for (const auto& x : t)
    if (x <= 0) throw std::invalid_argument("cone_contains: nonpositive component");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!(eps(i, j) * t[i] < t[j])) return false;
  return true;
}

bool cone_contains(const BoundingMatrix& eps, const std::vector<double>& t) {
  std::vector<Rational> q;
  q.reserve(t.size());
  for (double x : t) {
    if (!(x > 0)) throw std::invalid_argument("cone_contains: nonpositive component");
    q.push_back(rational_from_double(x));
  }
  return cone_contains(eps, q);
}

std::optional<std::vector<double>> cone_sample(const BoundingMatrix& eps, double margin) {
  if (!(margin > 0)) throw std::invalid_argument("cone_sample: margin must be positive");
  const std::size_t n = eps.size();
  if (!check_decreasing_cycle(eps).decreasing) return std::nullopt;
  RMat e = eps.to_double();
  for (int attempt = 0; attempt < 80; ++attempt, margin *= 0.5) {
    // Longest-path potentials: s_j >= s_i + log eps_ij + margin.
    std::vector<double> s(n, 0.0);
    bool settled = false;
    for (std::size_t pass = 0; pass <= n && !settled; ++pass) {
      settled = true;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (e(i, j) <= 0) continue;
          double want = s[i] + std::log(e(i, j)) + margin;
          if (want > s[j]) {
            s[j] = want;
            settled = false;
          }
        }
    }
    if (!settled) continue;  // margin too large for some cycle
    double top = *std::max_element(s.begin(), s.end());
    std::vector<double> t(n);
    for (std::size_t j = 0; j < n; ++j) t[j] = std::exp(s[j] - top);
    for (double& x : t)
      if (x <= 0) x = std::numeric_limits<double>::min();
    if (cone_contains(eps, t)) return t;
  }
  throw std::runtime_error("cone_sample: no margin produced a certified point");
}

std::vector<Rational> prescribed_order_ray(const std::vector<Rational>& m,
                                           const Rational& tau) {
  if (tau <= 0) throw std::invalid_argument("prescribed_order_ray: tau must be positive");
  std::vector<Rational> t;
  for (const auto& mj : m) {
    if (mj < 1) throw std::invalid_argument("prescribed_order_ray: orders must be >= 1");
    t.push_back(tau / mj);
  }
  return t;
}

BoundingMatrix complex_bounding_matrix(const std::vector<Rational>& m, int band) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n));
  for (const auto& mj : m)
    if (mj < 1) throw std::invalid_argument("complex_bounding_matrix: orders must be >= 1");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long d = static_cast<long>(i) - static_cast<long>(j);
      if (std::abs(d) <= band) e[i][j] = (m[i] - 1) / m[j];
    }
  return BoundingMatrix(std::move(e));
}

BoundingMatrix grouped_complex_bounding_matrix(
    const std::vector<Rational>& m, const std::vector<std::vector<std::size_t>>& groups,
    int band) {
  const std::size_t g = groups.size();
  std::vector<Rational> gm(g);
  for (std::size_t l = 0; l < g; ++l) {
    if (groups[l].empty()) throw std::invalid_argument("grouping has an empty group");
    gm[l] = m.at(groups[l][0]);
    for (auto i : groups[l])
      if (m.at(i) != gm[l]) throw std::invalid_argument("grouping mixes distinct orders");
  }
  std::vector<std::vector<Rational>> e(g, std::vector<Rational>(g));
  for (std::size_t l = 0; l < g; ++l)
    for (std::size_t k = 0; k < g; ++k) {
      bool adjacent = false;
      for (auto i : groups[l])
        for (auto j : groups[k])
          adjacent |= std::abs(static_cast<long>(i) - static_cast<long>(j)) <= band;
      if (adjacent) e[l][k] = (gm[l] - 1) / gm[k];
    }
  return BoundingMatrix(std::move(e));
}

Rational host_order_bound(const BoundingMatrix& eps, const std::vector<Rational>& t,
                          const std::vector<Rho>& rho) {
  const std::size_t n = eps.size();
  if (t.size() != n || rho.size() != n)
    throw std::invalid_argument("host_order_bound: dimension mismatch");
  if (!cone_contains(eps, t))
    throw std::invalid_argument("host_order_bound: t is outside the cone");
  Rational best = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Rho& r = rho[i];
    if (!r.unbounded && r.value < 1)
      throw std::invalid_argument("host_order_bound: rho components must be >= 1");
    if (t[i] > 1 && !r.unbounded && !(t[i] < r.value))
      throw std::invalid_argument("host_order_bound: t_i must lie below rho_i");
    Rational factor;
    if (r.unbounded) {
      factor = t[i];
    } else if (r.value == t[i]) {
      factor = 1;  // only reachable with rho_i = t_i = 1
    } else {
      factor = (r.value - 1) / (r.value - t[i]) * t[i];
    }
    if (factor < 1) factor = 1;
    for (std::size_t j = 0; j < n; ++j) {
      Rational v = factor / (1 - eps(i, j) * t[i] / t[j]);
      if (v > best) best = v;
    }
  }
  return best;
}

BoundingMatrix bounding_direct_sum(const BoundingMatrix& a, const BoundingMatrix& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<Rational>> e(n + m, std::vector<Rational>(n + m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e[i][j] = a(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) e[n + i][n + j] = b(i, j);
  std::vector<std::string> labels;
  for (const auto& l : a.labels()) labels.push_back("a." + l);
  for (const auto& l : b.labels()) labels.push_back("b." + l);
  return BoundingMatrix(std::move(e), std::move(labels));
}

BoundingMatrix nilpotent_generic_matrix(int s) {
  if (s < 1) throw std::invalid_argument("step must be >= 1");
  std::vector<std::vector<Rational>> e(s, std::vector<Rational>(s));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) e[i][j] = std::max(i - j, 0);
  return BoundingMatrix(std::move(e));
}

BoundingMatrix carnot_matrix(int s) {
  if (s < 1) throw std::invalid_argument("step must be >= 1");
  std::vector<std::vector<Rational>> e(s, std::vector<Rational>(s));
  for (int i = 1; i <= s; ++i)
    for (int j = 1; j < i; ++j) e[i - 1][j - 1] = (i - 1) / j;
  return BoundingMatrix(std::move(e));
}

BoundingMatrix rumin_matrix() {
  return BoundingMatrix({{0, 0}, {1, Rational(1, 2)}});
}

BoundingMatrix g2_matrix() {
  return complex_bounding_matrix({1, 3, 2, 3, 1});
}

}  // namespace st2
