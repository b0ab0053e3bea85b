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

#include "complexes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace st2 {

Eigen::Index FiniteHilbertComplex::total_dim() const {
  Eigen::Index n = 0;
  for (auto k : dims) n += k;
  return n;
}

Eigen::Index FiniteHilbertComplex::offset(std::size_t degree) const {
  Eigen::Index n = 0;
  for (std::size_t k = 0; k < degree; ++k) n += dims[k];
  return n;
}

int FiniteHilbertComplex::total_order() const {
  int m = 1;
  for (int o : orders) m *= o;
  return m;
}

int FiniteHilbertComplex::exponent(std::size_t i) const { return total_order() / orders.at(i); }

namespace {

void check_shapes(const FiniteHilbertComplex& c) {
  if (c.dims.size() != c.d.size() + 1)
    throw std::invalid_argument("complex: need one more space than differentials");
  if (c.orders.size() != c.d.size())
    throw std::invalid_argument("complex: one order per differential");
  for (int o : c.orders)
    if (o < 1) throw std::invalid_argument("complex: orders must be >= 1");
  for (std::size_t i = 0; i < c.d.size(); ++i)
    if (c.d[i].rows() != c.dims[i + 1] || c.d[i].cols() != c.dims[i])
      throw std::invalid_argument("complex: differential " + std::to_string(i) +
                                  " has the wrong shape");
}

Mat mat_power(const Mat& m, int k) {
  Mat r = identity(m.rows());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

// Delta^beta with kernel mapped to 0 (so negative beta gives the
// pseudo-inverse power and beta = 0 the support projection).
Mat pseudo_power(const Mat& delta, double beta) {
  Mat h = 0.5 * (delta + delta.adjoint());
  Eigh e = eigh(h);
  double thr = std::max(kernel_threshold(e.values), 1e-13);
  return hfunc(e, [&](double x) { return x <= thr ? 0.0 : std::pow(x, beta); });
}

Mat embed(const FiniteHilbertComplex& c, std::size_t to, std::size_t from, const Mat& block) {
  const Eigen::Index n = c.total_dim();
  Mat m = Mat::Zero(n, n);
  m.block(c.offset(to), c.offset(from), block.rows(), block.cols()) = block;
  return m;
}

Mat diff_total(const FiniteHilbertComplex& c, std::size_t i) {
  return embed(c, i + 1, i, c.d[i]) + embed(c, i, i + 1, c.d[i].adjoint());
}

struct RangeBasis {
  Mat range;    // orthonormal basis of Ran d
  Mat corange;  // orthonormal basis of Ran d*
};

RangeBasis ranges(const Mat& d) {
  RangeBasis rb;
  if (d.size() == 0) {
    rb.range = Mat::Zero(d.rows(), 0);
    rb.corange = Mat::Zero(d.cols(), 0);
    return rb;
  }
  Eigen::JacobiSVD<Mat> svd(d, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& sv = svd.singularValues();
  Eigen::Index r = 0;
  double tol = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  while (r < sv.size() && sv(r) > tol) ++r;
  rb.range = svd.matrixU().leftCols(r);
  rb.corange = svd.matrixV().leftCols(r);
  return rb;
}

}  // namespace

Report validate(const FiniteHilbertComplex& c, double tol) {
  check_shapes(c);
  Report r("complex-validate", "Ran(d_{i-1}) in ker(d_i)");
  double worst = 0;
  int at = -1;
  for (std::size_t i = 0; i + 1 < c.d.size(); ++i) {
    double v = max_abs(c.d[i + 1] * c.d[i]);
    if (v > worst) {
      worst = v;
      at = static_cast<int>(i);
    }
  }
  r.check_le("d_squared", worst, tol,
             worst > tol ? Json{{"degree", at}, {"max_entry", worst}} : Json(nullptr));
  return r;
}

std::vector<Mat> rumin_laplacians(const FiniteHilbertComplex& c) {
  check_shapes(c);
  std::vector<Mat> out;
  for (std::size_t i = 0; i < c.dims.size(); ++i) {
    Mat lap = Mat::Zero(c.dims[i], c.dims[i]);
    if (i < c.d.size()) lap += mat_power(c.d[i].adjoint() * c.d[i], c.exponent(i));
    if (i > 0) lap += mat_power(c.d[i - 1] * c.d[i - 1].adjoint(), c.exponent(i - 1));
    out.push_back(0.5 * (lap + lap.adjoint()));
  }
  return out;
}

Mat rumin_laplacian_power(const FiniteHilbertComplex& c, std::size_t k, double beta) {
  check_shapes(c);
  if (k >= c.dims.size()) throw std::invalid_argument("rumin_laplacian_power: bad degree");
  Mat out = Mat::Zero(c.dims[k], c.dims[k]);
  if (k < c.d.size()) out += pseudo_power(c.d[k].adjoint() * c.d[k], c.exponent(k) * beta);
  if (k > 0) out += pseudo_power(c.d[k - 1] * c.d[k - 1].adjoint(), c.exponent(k - 1) * beta);
  return out;
}

namespace {

Partition normalise_partition(const FiniteHilbertComplex& c, const Partition& groups) {
  if (groups.empty()) {
    Partition p;
    for (std::size_t i = 0; i < c.d.size(); ++i) p.push_back({i});
    return p;
  }
  std::set<std::size_t> seen;
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("partition has an empty group");
    for (auto i : g) {
      if (i >= c.d.size()) throw std::invalid_argument("partition index out of range");
      if (!seen.insert(i).second) throw std::invalid_argument("partition groups overlap");
      if (c.orders[i] != c.orders[g[0]])
        throw std::invalid_argument("partition mixes distinct orders");
    }
  }
  if (seen.size() != c.d.size())
    throw std::invalid_argument("partition does not cover every differential");
  return groups;
}

}  // namespace

OperatorCollection to_collection(const FiniteHilbertComplex& c, const Partition& groups) {
  check_shapes(c);
  Partition p = normalise_partition(c, groups);
  OperatorCollection out;
  const Eigen::Index n = c.total_dim();
  for (const auto& g : p) {
    Mat d = Mat::Zero(n, n);
    for (auto i : g) d += diff_total(c, i);
    out.ops.push_back(d);
  }
  Mat gr = Mat::Zero(n, n);
  for (std::size_t k = 0; k < c.dims.size(); ++k)
    gr.block(c.offset(k), c.offset(k), c.dims[k], c.dims[k]) =
        (k % 2 == 0 ? 1.0 : -1.0) * identity(c.dims[k]);
  out.grading = gr;
  return out;
}

BoundingMatrix collection_bounding_matrix(const FiniteHilbertComplex& c,
                                          const Partition& groups) {
  check_shapes(c);
  std::vector<Rational> m;
  for (int o : c.orders) m.push_back(o);
  if (groups.empty()) return complex_bounding_matrix(m);
  return grouped_complex_bounding_matrix(m, normalise_partition(c, groups));
}

Report signed_power_identity_check(const FiniteHilbertComplex& c, std::size_t i, double alpha) {
  check_shapes(c);
  if (i >= c.d.size()) throw std::invalid_argument("signed_power_identity_check: bad index");
  Report r("signed-power-identity", "D_i|D_i|^a = d_i Lap_i^{a/2a_i} + d_i* Lap_{i+1}^{a/2a_i}");
  Mat di = diff_total(c, i);
  Eigh e = eigh(di);
  double thr = std::max(kernel_threshold(e.values), 1e-13);
  Mat lhs = hfunc(e, [&](double x) {
    return std::abs(x) <= thr ? 0.0 : (x > 0 ? 1.0 : -1.0) * std::pow(std::abs(x), 1 + alpha);
  });
  double beta = alpha / (2.0 * c.exponent(i));
  Mat p0 = rumin_laplacian_power(c, i, beta), p1 = rumin_laplacian_power(c, i + 1, beta);
  Mat rhs = embed(c, i + 1, i, c.d[i] * p0) + embed(c, i, i + 1, c.d[i].adjoint() * p1);
  double diff = max_abs(lhs - rhs);
  // d_i annihilates the (d_{i-1} d_{i-1}*)-summand only up to rounding of
  // the product, so differences are measured against |d_i| |Lap^beta| too.
  double scale = std::max({1.0, max_abs(lhs), max_abs(c.d[i]) * std::max(max_abs(p0), max_abs(p1))});
  r.data()["alpha"] = alpha;
  r.data()["index"] = i;
  r.check_le("max_entry_difference", diff / scale, 1e-10 * static_cast<double>(c.total_dim()));
  return r;
}

Report assembled_formula_check(const FiniteHilbertComplex& c, double tau) {
  check_shapes(c);
  if (!(tau > 0)) throw std::invalid_argument("assembled_formula_check: tau must be positive");
  Report r("assembled-formula", "D_t = Sum d_i Lap_i^{(tau-m_i)/2m} + d_i* Lap_{i+1}^{(tau-m_i)/2m}");
  OperatorCollection coll = to_collection(c);
  std::vector<double> t;
  for (int o : c.orders) t.push_back(tau / o);
  Mat lhs = assemble(coll, t);
  const double m = c.total_order();
  Mat rhs = Mat::Zero(c.total_dim(), c.total_dim());
  double scale = std::max(1.0, max_abs(lhs));
  for (std::size_t i = 0; i < c.d.size(); ++i) {
    double beta = (tau - c.orders[i]) / (2 * m);
    Mat p0 = rumin_laplacian_power(c, i, beta), p1 = rumin_laplacian_power(c, i + 1, beta);
    rhs += embed(c, i + 1, i, c.d[i] * p0);
    rhs += embed(c, i, i + 1, c.d[i].adjoint() * p1);
    scale = std::max(scale, max_abs(c.d[i]) * std::max(max_abs(p0), max_abs(p1)));
  }
  r.data()["tau"] = tau;
  r.check_le("max_entry_difference", max_abs(lhs - rhs) / scale,
             1e-10 * static_cast<double>(c.total_dim()));
  return r;
}

HodgeDecomposition hodge_decomposition(const FiniteHilbertComplex& c, std::size_t degree) {
  check_shapes(c);
  if (degree >= c.dims.size()) throw std::invalid_argument("hodge_decomposition: bad degree");
  const Eigen::Index n = c.dims[degree];
  HodgeDecomposition h;
  h.exact = Mat::Zero(n, n);
  h.coexact = Mat::Zero(n, n);
  if (degree > 0) {
    Mat u = ranges(c.d[degree - 1]).range;
    h.exact = u * u.adjoint();
  }
  if (degree < c.d.size()) {
    Mat v = ranges(c.d[degree]).corange;
    h.coexact = v * v.adjoint();
  }
  h.harmonic = identity(n) - h.exact - h.coexact;
  h.betti = static_cast<Eigen::Index>(std::llround(h.harmonic.trace().real()));
  return h;
}

std::vector<Eigen::Index> betti_numbers(const FiniteHilbertComplex& c) {
  std::vector<Eigen::Index> b;
  for (std::size_t k = 0; k < c.dims.size(); ++k) b.push_back(hodge_decomposition(c, k).betti);
  return b;
}

ConformalResult conformal_factor_assemble(const FiniteHilbertComplex& c,
                                          const ConformalFactorParams& params, double tau) {
  check_shapes(c);
  const std::size_t n = c.d.size();
  if (params.lambda.size() != n + 1 || params.s.size() != n)
    throw std::invalid_argument("conformal_factor_assemble: parameters have the wrong length");
  for (double l : params.lambda)
    if (!(l > 0)) throw std::invalid_argument("conformal_factor_assemble: lambda must be positive");
  ConformalResult out;
  out.report = Report("conformal-factor", "lambda_{j-1}^{s_{j-1}} lambda_{j+1}^{s_j} = lambda_j^{s_j+s_{j-1}}");
  Report& r = out.report;

  std::vector<double> cj(n);
  for (std::size_t j = 0; j < n; ++j) cj[j] = params.lambda[j] / params.lambda[j + 1];

  // Compatibility, in logarithms.
  Json bad = Json::array();
  double worst = 0;
  for (std::size_t j = 1; j < n; ++j) {
    double lhs = params.s[j - 1] * std::log(params.lambda[j - 1]) + params.s[j] * std::log(params.lambda[j + 1]);
    double rhs = (params.s[j] + params.s[j - 1]) * std::log(params.lambda[j]);
    double gap = std::abs(lhs - rhs);
    worst = std::max(worst, gap);
    if (gap > 1e-12 * std::max(1.0, std::abs(rhs))) bad.push_back(j);
  }
  const bool compatible = bad.empty();
  r.check("compatibility", compatible, worst, 1e-12, "<=",
          compatible ? Json(nullptr) : Json{{"failing_j", bad}});

  const Eigen::Index total = c.total_dim();
  Mat mu = identity(total);
  Mat harmonic = Mat::Zero(total, total);
  for (std::size_t k = 0; k <= n; ++k) {
    auto h = hodge_decomposition(c, k);
    harmonic.block(c.offset(k), c.offset(k), c.dims[k], c.dims[k]) = h.harmonic;
  }
  for (std::size_t j = 0; j < n; ++j) {
    out.mu_scalar.push_back(std::pow(cj[j], tau * params.s[j]));
    RangeBasis rb = ranges(c.d[j]);
    if (rb.range.cols() == 0) {
      out.degenerate_blocks.push_back(j);
      continue;  // nu block left as the identity
    }
    double f = std::pow(cj[j], tau * params.s[j] / 2);
    mu.block(c.offset(j), c.offset(j), c.dims[j], c.dims[j]) +=
        (f - 1) * rb.corange * rb.corange.adjoint();
    mu.block(c.offset(j + 1), c.offset(j + 1), c.dims[j + 1], c.dims[j + 1]) +=
        (f - 1) * rb.range * rb.range.adjoint();
  }
  out.mu = mu;
  r.data()["mu_scalar"] = out.mu_scalar;
  r.data()["degenerate_blocks"] = out.degenerate_blocks;

  if (compatible) {
    double spread = 0;
    for (double v : out.mu_scalar) spread = std::max(spread, std::abs(v - out.mu_scalar[0]));
    r.check_le("scalar_forms_agree", spread, 1e-10 * std::max(1.0, out.mu_scalar[0]));
    Mat off = identity(total) - harmonic;
    double sq = max_abs(mu * mu - out.mu_scalar[0] * off - harmonic);
    r.check_le("hodge_square_equals_scalar", sq, 1e-10 * std::max(1.0, out.mu_scalar[0]));
  }

  // U d_j U* = c_j d_j realised by rescaling; compare with mu D mu*.
  FiniteHilbertComplex scaled = c;
  for (std::size_t j = 0; j < n; ++j) scaled.d[j] = cj[j] * c.d[j];
  std::vector<double> t;
  for (double s : params.s) t.push_back(tau * s);
  Mat lhs = assemble(to_collection(scaled), t);
  Mat base = assemble(to_collection(c), t);
  Mat rhs = mu * base * mu.adjoint();
  double gap = max_abs(lhs - rhs) / std::max(1.0, max_abs(lhs));
  r.check_le("equivariance_identity", gap, 1e-10 * static_cast<double>(total));
  return out;
}

FiniteHilbertComplex random_integer_complex(const std::vector<Eigen::Index>& dims,
                                            const std::vector<int>& orders, std::mt19937_64& rng,
                                            int entry_bound) {
  if (dims.size() != orders.size() + 1)
    throw std::invalid_argument("random_integer_complex: one more dim than orders");
  FiniteHilbertComplex c;
  c.dims = dims;
  c.orders = orders;
  std::uniform_int_distribution<int> ent(-entry_bound, entry_bound);
  std::vector<std::vector<Integer>> prev;  // previous differential, exact
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const std::size_t rows = dims[i + 1], cols = dims[i];
    std::vector<std::vector<Integer>> di(rows, std::vector<Integer>(cols));
    if (i == 0) {
      for (auto& row : di)
        for (auto& v : row) v = ent(rng);
    } else {
      // Rows spanning the left null space of the previous differential.
      QMat prev_t(prev[0].size(), std::vector<Rational>(prev.size()));
      for (std::size_t a = 0; a < prev.size(); ++a)
        for (std::size_t b = 0; b < prev[a].size(); ++b) prev_t[b][a] = Rational(prev[a][b]);
      auto null = nullspace_q(prev_t, prev.size());
      std::vector<std::vector<Integer>> p;
      for (const auto& v : null) p.push_back(primitive_integer(v));
      for (std::size_t a = 0; a < rows; ++a)
        for (const auto& prow : p) {
          int coef = ent(rng);
          for (std::size_t b = 0; b < cols; ++b) di[a][b] += coef * prow[b];
        }
    }
    Mat m(rows, cols);
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t b = 0; b < cols; ++b) m(a, b) = di[a][b].convert_to<double>();
    c.d.push_back(m);
    prev = std::move(di);
  }
  return c;
}

}  // namespace st2
