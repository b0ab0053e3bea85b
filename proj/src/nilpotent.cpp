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

#include "nilpotent.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <limits>
#include <stdexcept>
#include <type_traits>

namespace st2 {

namespace {

std::string label(int layer, int k) {
  return "(" + std::to_string(layer) + "," + std::to_string(k) + ")";
}

}  // namespace

GradedNilpotentAlgebra::GradedNilpotentAlgebra(std::vector<int> layer_dims,
                                               std::vector<Constant> brackets, bool carnot,
                                               std::string name)
    : layer_dims_(std::move(layer_dims)), carnot_(carnot), name_(std::move(name)) {
  if (layer_dims_.empty()) throw std::invalid_argument("algebra: no layers");
  for (int d : layer_dims_)
    if (d < 1) throw std::invalid_argument("algebra: every layer needs a positive dimension");
  for (std::size_t j = 0; j < layer_dims_.size(); ++j)
    for (int k = 0; k < layer_dims_[j]; ++k) layer_of_.push_back(static_cast<int>(j) + 1);
  dim_ = static_cast<int>(layer_of_.size());

  std::map<std::tuple<int, int, int>, Rational> table;
  for (const auto& c : brackets) {
    if (c.a < 0 || c.b < 0 || c.c < 0 || c.a >= dim_ || c.b >= dim_ || c.c >= dim_)
      throw std::invalid_argument("algebra: structure constant index out of range");
    if (c.value == 0) continue;
    if (c.a == c.b) throw std::invalid_argument("algebra: [e_a, e_a] must vanish");
    int a = std::min(c.a, c.b), b = std::max(c.a, c.b);
    Rational v = c.a < c.b ? c.value : Rational(-c.value);
    auto key = std::make_tuple(a, b, c.c);
    auto it = table.find(key);
    if (it != table.end() && it->second != v)
      throw std::invalid_argument("algebra: structure constants are not antisymmetric");
    table[key] = v;
  }
  for (const auto& [key, v] : table) {
    auto [a, b, c] = key;
    consts_.push_back({a, b, c, v});
    consts_.push_back({b, a, c, -v});
  }
  for (const auto& c : consts_) consts_d_.push_back(to_double(c.value));
}

std::vector<std::string> GradedNilpotentAlgebra::labels() const {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < layer_dims_.size(); ++j)
    for (int k = 0; k < layer_dims_[j]; ++k) out.push_back(label(static_cast<int>(j) + 1, k + 1));
  return out;
}

int GradedNilpotentAlgebra::homogeneous_dimension() const {
  int h = 0;
  for (std::size_t j = 0; j < layer_dims_.size(); ++j)
    h += static_cast<int>(j + 1) * layer_dims_[j];
  return h;
}

template <class T>
std::vector<T> GradedNilpotentAlgebra::bracket(const std::vector<T>& x,
                                               const std::vector<T>& y) const {
  std::vector<T> out(dim_, T(0));
  for (std::size_t n = 0; n < consts_.size(); ++n) {
    const auto& c = consts_[n];
    if (x[c.a] == 0 || y[c.b] == 0) continue;
    if constexpr (std::is_same_v<T, Rational>)
      out[c.c] += c.value * x[c.a] * y[c.b];
    else
      out[c.c] += consts_d_[n] * x[c.a] * y[c.b];
  }
  return out;
}

template std::vector<Rational> GradedNilpotentAlgebra::bracket(const std::vector<Rational>&,
                                                               const std::vector<Rational>&) const;
template std::vector<double> GradedNilpotentAlgebra::bracket(const std::vector<double>&,
                                                             const std::vector<double>&) const;

namespace {

// Flat index of the (layer, k) pair, both 1-based.
int flat_index(const std::vector<int>& dims, int layer, int k) {
  if (layer < 1 || layer > static_cast<int>(dims.size()) || k < 1 || k > dims[layer - 1])
    throw std::invalid_argument("algebra: basis label " + label(layer, k) + " out of range");
  int off = 0;
  for (int j = 0; j + 1 < layer; ++j) off += dims[j];
  return off + k - 1;
}

std::pair<int, int> read_label(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("algebra: basis labels are [layer, k] pairs");
  return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

GradedNilpotentAlgebra GradedNilpotentAlgebra::from_json(const nlohmann::json& j) {
  if (!j.contains("layers")) throw std::invalid_argument("algebra JSON needs \"layers\"");
  auto dims = j["layers"].get<std::vector<int>>();
  if (j.contains("step") && j["step"].get<int>() != static_cast<int>(dims.size()))
    throw std::invalid_argument("algebra JSON: step does not match the number of layers");
  std::vector<Constant> consts;
  if (j.contains("brackets"))
    for (const auto& br : j["brackets"]) {
      auto [xl, xk] = read_label(br.at("x"));
      auto [yl, yk] = read_label(br.at("y"));
      for (const auto& term : br.at("value")) {
        auto [el, ek] = read_label(term.at("e"));
        consts.push_back({flat_index(dims, xl, xk), flat_index(dims, yl, yk),
                          flat_index(dims, el, ek), rational_from_json(term.at("c"))});
      }
    }
  GradedNilpotentAlgebra g(dims, std::move(consts), j.value("carnot", false),
                           j.value("name", std::string()));
  if (j.contains("representation")) {
    for (const auto& m : j["representation"]) {
      QMat q;
      for (const auto& row : m) {
        std::vector<Rational> r;
        for (const auto& v : row) r.push_back(rational_from_json(v));
        q.push_back(std::move(r));
      }
      g.rep_.push_back(std::move(q));
    }
    if (static_cast<int>(g.rep_.size()) != g.dim_)
      throw std::invalid_argument("algebra JSON: representation needs one matrix per basis vector");
  }
  return g;
}

nlohmann::json GradedNilpotentAlgebra::to_json() const {
  nlohmann::json j;
  if (!name_.empty()) j["name"] = name_;
  j["step"] = step();
  j["layers"] = layer_dims_;
  j["carnot"] = carnot_;
  auto lab = [&](int idx) {
    int layer = layer_of_[idx];
    int first = flat_index(layer_dims_, layer, 1);
    return nlohmann::json::array({layer, idx - first + 1});
  };
  std::map<std::pair<int, int>, nlohmann::json> grouped;
  for (const auto& c : consts_) {
    if (c.a > c.b) continue;
    grouped[{c.a, c.b}].push_back({{"e", lab(c.c)}, {"c", rational_to_json(c.value)}});
  }
  j["brackets"] = nlohmann::json::array();
  for (auto& [ab, terms] : grouped)
    j["brackets"].push_back({{"x", lab(ab.first)}, {"y", lab(ab.second)}, {"value", terms}});
  if (!rep_.empty()) {
    j["representation"] = nlohmann::json::array();
    for (const auto& m : rep_) {
      nlohmann::json jm = nlohmann::json::array();
      for (const auto& row : m) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& v : row) r.push_back(rational_to_json(v));
        jm.push_back(std::move(r));
      }
      j["representation"].push_back(std::move(jm));
    }
  }
  return j;
}

namespace {

QMat qmul(const QMat& a, const QMat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  QMat out(n, std::vector<Rational>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (b[l][j] != 0) out[i][j] += a[i][l] * b[l][j];
    }
  return out;
}

std::vector<Rational> flatten(const QMat& m) {
  std::vector<Rational> v;
  for (const auto& row : m) v.insert(v.end(), row.begin(), row.end());
  return v;
}

}  // namespace

GradedNilpotentAlgebra GradedNilpotentAlgebra::from_matrix_basis(const std::vector<QMat>& basis,
                                                                 std::vector<int> layer_dims,
                                                                 bool carnot, std::string name) {
  const std::size_t n = basis.size();
  if (n == 0) throw std::invalid_argument("from_matrix_basis: empty basis");
  if (static_cast<std::size_t>(std::accumulate(layer_dims.begin(), layer_dims.end(), 0)) != n)
    throw std::invalid_argument("from_matrix_basis: layer dimensions do not sum to the basis size");
  const std::size_t entries = basis[0].size() * basis[0].size();
  // Columns are the flattened basis matrices.
  QMat cols(entries, std::vector<Rational>(n));
  for (std::size_t b = 0; b < n; ++b) {
    auto f = flatten(basis[b]);
    if (f.size() != entries) throw std::invalid_argument("from_matrix_basis: shape mismatch");
    for (std::size_t e = 0; e < entries; ++e) cols[e][b] = f[e];
  }
  if (rank_q(cols) != n) throw std::invalid_argument("from_matrix_basis: basis is dependent");
  std::vector<Constant> consts;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      QMat ab = qmul(basis[a], basis[b]), ba = qmul(basis[b], basis[a]);
      for (std::size_t i = 0; i < ab.size(); ++i)
        for (std::size_t j = 0; j < ab[i].size(); ++j) ab[i][j] -= ba[i][j];
      auto sol = solve_q(cols, flatten(ab), n);
      if (!sol) throw std::invalid_argument("from_matrix_basis: span is not closed under brackets");
      for (std::size_t c = 0; c < n; ++c)
        if ((*sol)[c] != 0)
          consts.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c), (*sol)[c]});
    }
  GradedNilpotentAlgebra g(std::move(layer_dims), std::move(consts), carnot, std::move(name));
  g.rep_ = basis;
  return g;
}

namespace {

QMat unit(std::size_t n, std::size_t i, std::size_t j, Rational v = 1) {
  QMat m(n, std::vector<Rational>(n));
  m[i][j] = v;
  return m;
}

}  // namespace

GradedNilpotentAlgebra GradedNilpotentAlgebra::abelian(int n) {
  if (n < 1) throw std::invalid_argument("abelian: n must be >= 1");
  std::vector<QMat> basis;
  for (int k = 0; k < n; ++k) basis.push_back(unit(n + 1, 0, k + 1));
  return from_matrix_basis(basis, {n}, true, "abelian" + std::to_string(n));
}

GradedNilpotentAlgebra GradedNilpotentAlgebra::heisenberg() {
  std::vector<QMat> basis{unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)};
  return from_matrix_basis(basis, {2, 1}, true, "heisenberg");
}

GradedNilpotentAlgebra GradedNilpotentAlgebra::filiform(int n) {
  if (n < 3) throw std::invalid_argument("filiform: dimension must be >= 3");
  const auto sz = static_cast<std::size_t>(n);
  std::vector<QMat> basis;
  QMat e1(sz, std::vector<Rational>(sz));
  for (std::size_t k = 1; k + 1 < sz; ++k) e1[k][k + 1] = 1;
  basis.push_back(e1);
  // e_i -> s_i E_{1,i} with alternating signs, so that [e1, e_i] = e_{i+1}.
  Rational sign = 1;
  for (std::size_t i = 1; i < sz; ++i) {
    basis.push_back(unit(sz, 0, i, sign));
    sign = -sign;
  }
  std::vector<int> dims{2};
  for (int j = 3; j <= n; ++j) dims.push_back(1);
  return from_matrix_basis(basis, dims, true, "filiform" + std::to_string(n));
}

GradedNilpotentAlgebra GradedNilpotentAlgebra::upper_triangular(int n) {
  if (n < 2) throw std::invalid_argument("upper_triangular: n must be >= 2");
  const auto sz = static_cast<std::size_t>(n);
  std::vector<QMat> basis;
  std::vector<int> dims;
  for (std::size_t d = 1; d < sz; ++d) {
    for (std::size_t i = 0; i + d < sz; ++i) basis.push_back(unit(sz, i, i + d));
    dims.push_back(static_cast<int>(sz - d));
  }
  return from_matrix_basis(basis, dims, true, "n" + std::to_string(n));
}

Report GradedNilpotentAlgebra::validate() const {
  Report r("algebra.validate", "[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0");
  auto e = [&](int i) {
    std::vector<Rational> v(dim_);
    v[i] = 1;
    return v;
  };
  auto nonzero = [](const std::vector<Rational>& v) {
    return std::any_of(v.begin(), v.end(), [](const Rational& q) { return q != 0; });
  };
  // Antisymmetry holds by construction; recheck on the stored table.
  long antisym_bad = 0;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) {
      auto s = bracket(e(a), e(b));
      auto t = bracket(e(b), e(a));
      for (int c = 0; c < dim_; ++c)
        if (s[c] + t[c] != 0) ++antisym_bad;
    }
  r.check_le("antisymmetry", static_cast<double>(antisym_bad), 0);

  long jacobi_bad = 0;
  Json jacobi_datum = nullptr;
  for (int a = 0; a < dim_; ++a)
    for (int b = a + 1; b < dim_; ++b)
      for (int c = b + 1; c < dim_; ++c) {
        auto t1 = bracket(e(a), bracket(e(b), e(c)));
        auto t2 = bracket(e(b), bracket(e(c), e(a)));
        auto t3 = bracket(e(c), bracket(e(a), e(b)));
        for (int k = 0; k < dim_; ++k) t1[k] += t2[k] + t3[k];
        if (nonzero(t1)) {
          if (jacobi_bad == 0) jacobi_datum = {{"triple", {a, b, c}}};
          ++jacobi_bad;
        }
      }
  r.check("jacobi", jacobi_bad == 0, static_cast<double>(jacobi_bad), 0, "<=", jacobi_datum);

  long filt_bad = 0, grade_bad = 0;
  for (const auto& c : consts_) {
    if (layer_of_[c.c] < layer_of_[c.a] + layer_of_[c.b]) ++filt_bad;
    if (layer_of_[c.c] != layer_of_[c.a] + layer_of_[c.b]) ++grade_bad;
  }
  r.check_le("filtration", static_cast<double>(filt_bad), 0);

  // Lower central series: g_1 = g, g_{k+1} = [g, g_k], by exact rank.
  std::vector<std::vector<Rational>> span;
  for (int i = 0; i < dim_; ++i) span.push_back(e(i));
  Json lcs = Json::array();
  bool lcs_ok = true;
  for (int k = 1; k <= step() + 1; ++k) {
    int expect = 0;
    for (int j = k; j <= step(); ++j) expect += layer_dims_[j - 1];
    QMat m;
    for (const auto& v : span) m.push_back(v);
    auto rk = static_cast<int>(m.empty() ? 0 : rank_q(m));
    lcs.push_back({{"k", k}, {"dim", rk}, {"expected", expect}});
    if (rk != expect) lcs_ok = false;
    std::vector<std::vector<Rational>> next;
    for (int a = 0; a < dim_; ++a)
      for (const auto& v : span) {
        auto w = bracket(e(a), v);
        if (nonzero(w)) next.push_back(std::move(w));
      }
    span = std::move(next);
  }
  r.data()["lower_central_series"] = lcs;
  r.check("lower_central_series", lcs_ok, lcs_ok ? 0 : 1, 0, "==", lcs_ok ? Json(nullptr) : lcs);

  if (carnot_) {
    r.check_le("carnot.grading", static_cast<double>(grade_bad), 0);
    bool gen_ok = true;
    Json gen = Json::array();
    for (int n = 1; n < step(); ++n) {
      QMat m;
      for (int a = 0; a < dim_; ++a) {
        if (layer_of_[a] != 1) continue;
        for (int b = 0; b < dim_; ++b)
          if (layer_of_[b] == n) m.push_back(bracket(e(a), e(b)));
      }
      auto rk = static_cast<int>(m.empty() ? 0 : rank_q(m));
      gen.push_back({{"n", n}, {"rank", rk}, {"expected", layer_dims_[n]}});
      if (rk != layer_dims_[n]) gen_ok = false;
    }
    r.data()["carnot_generation"] = gen;
    r.check("carnot.generation", gen_ok, gen_ok ? 0 : 1, 0, "==", gen_ok ? Json(nullptr) : gen);
  }

  if (!rep_.empty()) {
    // The representation must be a homomorphism and injective.
    long rep_bad = 0;
    for (int a = 0; a < dim_; ++a)
      for (int b = a + 1; b < dim_; ++b) {
        QMat ab = qmul(rep_[a], rep_[b]), ba = qmul(rep_[b], rep_[a]);
        auto br = bracket(e(a), e(b));
        for (std::size_t i = 0; i < ab.size(); ++i)
          for (std::size_t j = 0; j < ab[i].size(); ++j) {
            Rational v = ab[i][j] - ba[i][j];
            for (int c = 0; c < dim_; ++c)
              if (br[c] != 0) v -= br[c] * rep_[c][i][j];
            if (v != 0) ++rep_bad;
          }
      }
    QMat cols;
    for (const auto& m : rep_) cols.push_back(flatten(m));
    r.check_le("representation.homomorphism", static_cast<double>(rep_bad), 0);
    r.check("representation.faithful", rank_q(cols) == static_cast<std::size_t>(dim_),
            static_cast<double>(rank_q(cols)), dim_, "==");
  }
  return r;
}

// BCH through the Dynkin-Specht-Wever projection of the coefficients of
// log(e^X e^Y) in the free associative algebra.

namespace {

constexpr int kMaxBchOrder = 6;

using Poly = std::map<std::pair<int, unsigned>, Rational>;  // (length, bits): bit k set = Y at k

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      int len = wa.first + wb.first;
      if (len > kMaxBchOrder) continue;
      out[{len, wa.second | (wb.second << wa.first)}] += ca * cb;
    }
  return out;
}

struct BchTable {
  // coeff[n] lists (bits, c_w / n) for words of length n.
  std::vector<std::vector<std::pair<unsigned, Rational>>> coeff;
  std::vector<std::vector<std::pair<unsigned, double>>> coeff_d;
  std::vector<double> mass;
};

const BchTable& bch_table() {
  static const BchTable table = [] {
    Poly w;
    Rational fact_p = 1;
    for (int p = 0; p <= kMaxBchOrder; ++p) {
      if (p > 0) fact_p *= p;
      Rational fact_q = 1;
      for (int q = 0; p + q <= kMaxBchOrder; ++q) {
        if (q > 0) fact_q *= q;
        if (p + q == 0) continue;
        w[{p + q, ((1u << q) - 1u) << p}] += Rational(1) / (fact_p * fact_q);
      }
    }
    Poly log, power = w;
    for (int k = 1; k <= kMaxBchOrder; ++k) {
      Rational c = Rational(k % 2 == 1 ? 1 : -1) / k;
      for (const auto& [word, v] : power) log[word] += c * v;
      power = poly_mul(power, w);
    }
    BchTable t;
    t.coeff.resize(kMaxBchOrder + 1);
    t.coeff_d.resize(kMaxBchOrder + 1);
    t.mass.assign(kMaxBchOrder + 1, 0.0);
    for (const auto& [word, v] : log) {
      if (v == 0) continue;
      Rational c = v / word.first;
      t.coeff[word.first].push_back({word.second, c});
      t.coeff_d[word.first].push_back({word.second, to_double(c)});
      t.mass[word.first] += std::abs(to_double(c));
    }
    return t;
  }();
  return table;
}

}  // namespace

double bch_coefficient_mass(int n) {
  if (n < 1 || n > kMaxBchOrder) throw std::invalid_argument("bch_coefficient_mass: order out of range");
  return bch_table().mass[n];
}

template <class T>
std::vector<T> bch_multiply(const GradedNilpotentAlgebra& g, const std::vector<T>& x,
                            const std::vector<T>& y) {
  const int s = g.step();
  if (s > kMaxBchOrder)
    throw std::invalid_argument("bch_multiply: step " + std::to_string(s) +
                                " exceeds the tabulated order 6");
  if (static_cast<int>(x.size()) != g.dim() || static_cast<int>(y.size()) != g.dim())
    throw std::invalid_argument("bch_multiply: coordinate vectors have the wrong length");
  const auto& table = bch_table();
  std::vector<T> out(g.dim());
  for (int i = 0; i < g.dim(); ++i) out[i] = x[i] + y[i];
  // Left-normed brackets of every word, built prefix by prefix.
  std::vector<std::vector<std::vector<T>>> val(s + 1);
  val[1] = {x, y};
  for (int len = 2; len <= s; ++len) {
    val[len].resize(std::size_t{1} << len);
    for (unsigned bits = 0; bits < (1u << len); ++bits) {
      unsigned prefix = bits & ((1u << (len - 1)) - 1u);
      bool last_y = (bits >> (len - 1)) & 1u;
      val[len][bits] = g.bracket(val[len - 1][prefix], last_y ? y : x);
    }
    if constexpr (std::is_same_v<T, Rational>) {
      for (const auto& [bits, c] : table.coeff[len])
        for (int i = 0; i < g.dim(); ++i)
          if (val[len][bits][i] != 0) out[i] += c * val[len][bits][i];
    } else {
      for (const auto& [bits, c] : table.coeff_d[len])
        for (int i = 0; i < g.dim(); ++i) out[i] += c * val[len][bits][i];
    }
  }
  return out;
}

template std::vector<Rational> bch_multiply(const GradedNilpotentAlgebra&,
                                            const std::vector<Rational>&,
                                            const std::vector<Rational>&);
template std::vector<double> bch_multiply(const GradedNilpotentAlgebra&, const std::vector<double>&,
                                          const std::vector<double>&);

std::vector<Rational> second_kind_to_exponential(const std::vector<Rational>& p) {
  if (p.size() != 3) throw std::invalid_argument("second-kind chart is three dimensional");
  return {p[0], p[1], p[2] - p[0] * p[1] / 2};
}

std::vector<Rational> exponential_to_second_kind(const std::vector<Rational>& p) {
  if (p.size() != 3) throw std::invalid_argument("second-kind chart is three dimensional");
  return {p[0], p[1], p[2] + p[0] * p[1] / 2};
}

WeightFamily::WeightFamily(GradedNilpotentAlgebra g, Chart chart, bool graded)
    : g_(std::move(g)), chart_(chart), gammas_(clifford_generators(g_.dim(), graded)) {
  if (chart_ == Chart::kSecondKind) {
    std::vector<Rational> e1{1, 0, 0}, e2{0, 1, 0};
    bool ok = g_.layer_dims() == std::vector<int>{2, 1};
    if (ok) ok = g_.bracket(e1, e2) == std::vector<Rational>{0, 0, 1};
    if (!ok)
      throw std::invalid_argument(
          "second-kind chart needs the Heisenberg algebra with [e1, e2] = e3");
  }
}

Mat WeightFamily::ell(int j, const std::vector<double>& coords) const {
  if (j < 1 || j > g_.step()) throw std::invalid_argument("ell: layer out of range");
  Mat out = Mat::Zero(module_dim(), module_dim());
  for (int i = 0; i < g_.dim(); ++i)
    if (g_.layer_of(i) == j && coords[i] != 0) out += coords[i] * gammas_.gammas[i];
  return out;
}

double WeightFamily::layer_norm(int j, const std::vector<double>& coords) const {
  double s = 0;
  for (int i = 0; i < g_.dim(); ++i)
    if (g_.layer_of(i) == j) s += coords[i] * coords[i];
  return std::sqrt(s);
}

Rational WeightFamily::layer_norm_sq(int j, const std::vector<Rational>& coords) const {
  Rational s = 0;
  for (int i = 0; i < g_.dim(); ++i)
    if (g_.layer_of(i) == j) s += coords[i] * coords[i];
  return s;
}

template <class T>
std::vector<T> WeightFamily::multiply(const std::vector<T>& g, const std::vector<T>& h) const {
  if (chart_ == Chart::kSecondKind) return {g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1]};
  return bch_multiply(g_, g, h);
}

template std::vector<Rational> WeightFamily::multiply(const std::vector<Rational>&,
                                                      const std::vector<Rational>&) const;
template std::vector<double> WeightFamily::multiply(const std::vector<double>&,
                                                    const std::vector<double>&) const;

namespace {

std::vector<double> layer_norms(const WeightFamily& w, const std::vector<double>& x) {
  std::vector<double> out(w.steps());
  for (int j = 1; j <= w.steps(); ++j) out[j - 1] = w.layer_norm(j, x);
  return out;
}

std::vector<double> difference_norms(const WeightFamily& w, const std::vector<double>& gh,
                                     const std::vector<double>& h) {
  std::vector<double> out(w.steps(), 0.0);
  const auto& alg = w.algebra();
  for (int i = 0; i < alg.dim(); ++i) {
    double d = gh[i] - h[i];
    out[alg.layer_of(i) - 1] += d * d;
  }
  for (auto& v : out) v = std::sqrt(v);
  return out;
}

double normalizer(const RMat& eps, int i, const std::vector<double>& hn) {
  double n = 1;
  for (Eigen::Index j = 0; j < eps.cols(); ++j)
    if (eps(i, j) > 0) n += std::pow(hn[j], eps(i, j));
  return n;
}

}  // namespace

std::vector<DefectPair> translation_defect(const WeightFamily& w, const std::vector<double>& g,
                                           const std::vector<double>& h, const RMat& eps) {
  if (eps.rows() != w.steps() || eps.cols() != w.steps())
    throw std::invalid_argument("translation_defect: bounding matrix size must equal the step");
  auto gh = w.multiply(g, h);
  auto raw = difference_norms(w, gh, h);
  auto hn = layer_norms(w, h);
  std::vector<DefectPair> out(w.steps());
  for (int i = 0; i < w.steps(); ++i) out[i] = {raw[i], raw[i] / normalizer(eps, i, hn)};
  return out;
}

namespace {

double bracket_constant(const GradedNilpotentAlgebra& g) {
  double s = 0;
  for (const auto& c : g.constants()) s += to_double(c.value * c.value);
  return std::sqrt(s);
}

double truncated_norm(const WeightFamily& w, const std::vector<double>& x, int m) {
  double s = 0;
  for (int j = 1; j <= m; ++j) s += std::pow(w.layer_norm(j, x), 2);
  return std::sqrt(s);
}

}  // namespace

std::vector<double> generic_bound_certificate(const WeightFamily& w,
                                              const std::vector<double>& g,
                                              const std::vector<double>& h) {
  if (w.chart() != Chart::kExponential)
    throw std::invalid_argument("generic_bound_certificate: exponential chart only");
  const double c = bracket_constant(w.algebra());
  const int s = w.steps();
  std::vector<double> out(s);
  // Layer i of z_n only sees layers <= i - n + 1 of X and Y. On integer points
  // each truncated norm is 0 or >= 1, so mixed powers are bounded by the top
  // power.
  for (int i = 1; i <= s; ++i) {
    double bound = w.layer_norm(i, g);
    for (int m = 1; m < i; ++m) {
      const int k = i - m;
      double xm = truncated_norm(w, g, m);
      double ysum = 0;
      for (int j = 1; j <= m; ++j) ysum += std::pow(w.layer_norm(j, h), k);
      double pm = k >= 2 ? std::pow(static_cast<double>(m), k / 2.0 - 1) : 1.0;
      bound += bch_coefficient_mass(k + 1) * std::pow(c, k) * std::pow(xm, k) * pm * ysum;
    }
    out[i - 1] = bound;
  }
  return out;
}

namespace {

// Visits integer points of the ball, coordinates in lexicographic order.
void enumerate_ball(int dim, long r2, std::vector<long>& cur, int pos, long used,
                    std::vector<std::vector<double>>& out) {
  if (pos == dim) {
    out.emplace_back(cur.begin(), cur.end());
    return;
  }
  long rem = r2 - used;
  long lim = static_cast<long>(std::floor(std::sqrt(static_cast<double>(rem))));
  while (lim * lim > rem) --lim;
  while ((lim + 1) * (lim + 1) <= rem) ++lim;
  for (long v = -lim; v <= lim; ++v) {
    cur[pos] = v;
    enumerate_ball(dim, r2, cur, pos + 1, used + v * v, out);
  }
  cur[pos] = 0;
}

double ball_volume(int dim, double r) {
  return std::pow(M_PI, dim / 2.0) / std::tgamma(dim / 2.0 + 1) * std::pow(r, dim);
}

}  // namespace

std::vector<std::vector<double>> lattice_ball(int dim, double radius, const LatticeSampling& opt) {
  if (dim < 1 || radius < 0) throw std::invalid_argument("lattice_ball: bad arguments");
  const long r2 = static_cast<long>(std::floor(radius * radius + 1e-9));
  std::vector<std::vector<double>> out;
  double estimate = ball_volume(dim, radius + std::sqrt(dim) / 2);
  if (estimate <= static_cast<double>(opt.enumerate_limit)) {
    std::vector<long> cur(dim, 0);
    enumerate_ball(dim, r2, cur, 0, 0, out);
    return out;
  }
  // Points with at most two nonzero coordinates, then a seeded random fill.
  const long lim = static_cast<long>(std::floor(radius));
  out.emplace_back(dim, 0.0);
  for (int a = 0; a < dim; ++a)
    for (long u = -lim; u <= lim; ++u) {
      if (u == 0) continue;
      std::vector<double> p(dim, 0.0);
      p[a] = static_cast<double>(u);
      out.push_back(p);
      for (int b = a + 1; b < dim; ++b)
        for (long v = -lim; v <= lim; ++v) {
          if (v == 0 || u * u + v * v > r2) continue;
          p[b] = static_cast<double>(v);
          out.push_back(p);
          p[b] = 0;
        }
    }
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<long> coord(-lim, lim);
  long added = 0, attempts = 0;
  while (added < opt.random_points && attempts < 200 * opt.random_points) {
    ++attempts;
    std::vector<double> p(dim);
    long n2 = 0;
    for (auto& v : p) {
      long c = coord(rng);
      v = static_cast<double>(c);
      n2 += c * c;
    }
    if (n2 > r2) continue;
    out.push_back(std::move(p));
    ++added;
  }
  return out;
}

Report verify_translation_bound(const WeightFamily& w, const BoundingMatrix& eps,
                                const TranslationBoundOptions& opt) {
  const int s = w.steps();
  if (static_cast<int>(eps.size()) != s)
    throw std::invalid_argument("verify_translation_bound: bounding matrix size must equal the step");
  if (opt.radii.size() < 4)
    throw std::invalid_argument("verify_translation_bound: ladder needs at least 4 radii");
  Report rep("nilpotent.translation_bound",
             "(l_i(gh) - l_i(h))(1 + Sum_j |l_j(h)|^{eps_ij})^{-1}");
  rep.set_ladder(opt.radii);
  const RMat e = eps.to_double();
  auto gs = opt.g_samples;
  if (gs.empty())
    for (int k = 0; k < w.algebra().dim(); ++k) {
      std::vector<double> v(w.algebra().dim(), 0.0);
      v[k] = 1;
      gs.push_back(v);
    }

  // Variant 0 is eps itself; then one variant per positive entry lowered by delta.
  std::vector<RMat> variants{e};
  std::vector<std::pair<int, int>> lowered;
  if (opt.cross_check)
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j)
        if (e(i, j) > 0) {
          RMat v = e;
          v(i, j) = std::max(0.0, e(i, j) - opt.delta);
          variants.push_back(v);
          lowered.push_back({i, j});
        }

  // sup[variant][g][layer][radius]
  const std::size_t nr = opt.radii.size();
  std::vector<std::vector<std::vector<std::vector<double>>>> sup(
      variants.size(),
      std::vector<std::vector<std::vector<double>>>(
          gs.size(), std::vector<std::vector<double>>(s, std::vector<double>(nr, 0.0))));
  for (std::size_t r = 0; r < nr; ++r) {
    auto pts = lattice_ball(w.algebra().dim(), opt.radii[r], opt.sampling);
    for (std::size_t gi = 0; gi < gs.size(); ++gi)
      for (const auto& h : pts) {
        auto gh = w.multiply(gs[gi], h);
        auto raw = difference_norms(w, gh, h);
        auto hn = layer_norms(w, h);
        for (std::size_t v = 0; v < variants.size(); ++v)
          for (int i = 0; i < s; ++i) {
            double val = raw[i] / normalizer(variants[v], i, hn);
            auto& slot = sup[v][gi][i][r];
            slot = std::max(slot, val);
          }
      }
    rep.data()["points"].push_back(pts.size());
  }

  auto slope_of = [&](const std::vector<double>& ys) {
    if (*std::max_element(ys.begin(), ys.end()) <= 1e-300) return Fit{};
    return loglog_fit(opt.radii, ys, true);
  };
  auto& series = rep.series("sup");
  series.columns = {"radius"};
  for (std::size_t gi = 0; gi < gs.size(); ++gi)
    for (int i = 0; i < s; ++i)
      series.columns.push_back("g" + std::to_string(gi) + ".l" + std::to_string(i + 1));
  for (std::size_t r = 0; r < nr; ++r) {
    std::vector<double> row{opt.radii[r]};
    for (std::size_t gi = 0; gi < gs.size(); ++gi)
      for (int i = 0; i < s; ++i) row.push_back(sup[0][gi][i][r]);
    series.rows.push_back(std::move(row));
  }
  Json per_layer = Json::array();
  for (int i = 0; i < s; ++i) {
    double worst = -1e300;
    std::size_t worst_g = 0;
    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
      Fit f = slope_of(sup[0][gi][i]);
      if (f.slope > worst) {
        worst = f.slope;
        worst_g = gi;
      }
    }
    Fit f = slope_of(sup[0][worst_g][i]);
    rep.add_fit("layer" + std::to_string(i + 1), f);
    per_layer.push_back({{"layer", i + 1}, {"slope", worst}, {"g", gs[worst_g]}});
    rep.check_le("bounded.layer" + std::to_string(i + 1), worst, opt.slope_tol,
                 Json{{"g", gs[worst_g]}, {"sup", sup[0][worst_g][i]}});
  }
  rep.data()["slopes"] = per_layer;

  Json cross = Json::array();
  for (std::size_t v = 1; v < variants.size(); ++v) {
    auto [i, j] = lowered[v - 1];
    double worst = -1e300;
    for (std::size_t gi = 0; gi < gs.size(); ++gi)
      worst = std::max(worst, slope_of(sup[v][gi][i]).slope);
    cross.push_back({{"i", i + 1},
                     {"j", j + 1},
                     {"lowered_to", variants[v](i, j)},
                     {"slope", worst},
                     {"needed", worst > opt.slope_tol}});
  }
  rep.data()["cross_check"] = cross;
  return rep;
}

std::size_t LatticeTruncation::index_of(const std::vector<double>& p) const {
  std::vector<long> key;
  for (double v : p) {
    double r = std::round(v);
    if (std::abs(v - r) > 1e-9) return static_cast<std::size_t>(-1);
    key.push_back(static_cast<long>(r));
  }
  auto it = index.find(key);
  return it == index.end() ? static_cast<std::size_t>(-1) : it->second;
}

LatticeTruncation lattice_truncation(const WeightFamily& w, double radius,
                                     std::size_t max_points) {
  if (radius < 1) throw std::invalid_argument("lattice_truncation: radius must be >= 1");
  LatticeTruncation lt;
  LatticeSampling all;
  all.enumerate_limit = static_cast<long>(max_points) * 4;
  if (ball_volume(w.algebra().dim(), radius + std::sqrt(w.algebra().dim()) / 2) > all.enumerate_limit)
    throw std::invalid_argument("lattice_truncation: ball too large for a dense truncation");
  lt.points = lattice_ball(w.algebra().dim(), radius, all);
  if (lt.points.size() > max_points)
    throw std::invalid_argument("lattice_truncation: ball has more than max_points points");
  for (std::size_t p = 0; p < lt.points.size(); ++p) {
    std::vector<long> key;
    for (double v : lt.points[p]) key.push_back(static_cast<long>(v));
    lt.index[key] = p;
  }
  lt.module_dim = static_cast<int>(w.module_dim());
  const auto np = static_cast<Eigen::Index>(lt.points.size());
  const Eigen::Index md = lt.module_dim;
  for (int j = 1; j <= w.steps(); ++j) {
    Mat m = Mat::Zero(np * md, np * md);
    for (Eigen::Index p = 0; p < np; ++p) m.block(p * md, p * md, md, md) = w.ell(j, lt.points[p]);
    lt.coll.ops.push_back(std::move(m));
  }
  if (w.clifford().grading) lt.coll.grading = kron(identity(np), *w.clifford().grading);
  return lt;
}

Mat LatticeTruncation::translation(const WeightFamily& w, const std::vector<double>& g,
                                   bool masked) const {
  const auto np = static_cast<Eigen::Index>(points.size());
  const Eigen::Index md = module_dim;
  std::vector<double> ginv(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) ginv[i] = -g[i];
  if (w.chart() == Chart::kSecondKind) ginv[2] = -g[2] + g[0] * g[1];
  std::vector<bool> boundary(np, false);
  std::vector<std::size_t> image(np);
  for (Eigen::Index p = 0; p < np; ++p) {
    image[p] = index_of(w.multiply(g, points[p]));
    if (image[p] == static_cast<std::size_t>(-1)) {
      boundary[p] = true;
      auto img = w.multiply(g, points[p]);
      bool integral = std::all_of(img.begin(), img.end(),
                                  [](double v) { return std::abs(v - std::round(v)) <= 1e-9; });
      if (!integral) ++dropped;
    }
    if (index_of(w.multiply(ginv, points[p])) == static_cast<std::size_t>(-1)) boundary[p] = true;
  }
  Mat t = Mat::Zero(np * md, np * md);
  for (Eigen::Index p = 0; p < np; ++p) {
    if (image[p] == static_cast<std::size_t>(-1)) continue;
    auto q = static_cast<Eigen::Index>(image[p]);
    if (masked && (boundary[p] || boundary[q])) continue;
    t.block(q * md, p * md, md, md) = identity(md);
  }
  return t;
}

WeightCounting weight_counting(const WeightFamily& w, const std::vector<double>& t,
                               double radius) {
  if (static_cast<int>(t.size()) != w.steps())
    throw std::invalid_argument("weight_counting: need one order per layer");
  LatticeSampling all;
  all.enumerate_limit = 50000000;
  auto pts = lattice_ball(w.algebra().dim(), radius + 1, all);
  WeightCounting wc;
  wc.lambda_max = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    double n2 = 0;
    for (double v : p) n2 += v * v;
    double lam = 0;
    for (int j = 1; j <= w.steps(); ++j) lam += std::pow(w.layer_norm(j, p), t[j - 1]);
    if (n2 <= radius * radius + 1e-9)
      wc.spectrum.push_back(lam);
    else
      wc.lambda_max = std::min(wc.lambda_max, lam);
  }
  wc.fit = counting_exponent(wc.spectrum, wc.lambda_max);
  return wc;
}

Report dilation_scaling_check(const WeightFamily& w, double tau, const Rational& t, int samples,
                              std::uint64_t seed) {
  const auto& alg = w.algebra();
  if (!alg.carnot()) throw std::domain_error("dilation_scaling_check: algebra is not Carnot");
  if (t <= 0) throw std::invalid_argument("dilation_scaling_check: t must be positive");
  if (!(tau > 0)) throw std::invalid_argument("dilation_scaling_check: tau must be positive");
  Report rep("nilpotent.dilation", "delta_t exp(X_1, X_2, ...) = exp(t X_1, t^2 X_2, ...)");
  auto dilate = [&](const std::vector<Rational>& x, const Rational& s) {
    std::vector<Rational> out(x);
    for (int i = 0; i < alg.dim(); ++i) {
      Rational f = 1;
      for (int k = 0; k < alg.layer_of(i); ++k) f *= s;
      out[i] *= f;
    }
    return out;
  };
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  auto sample = [&] {
    std::vector<Rational> x(alg.dim());
    for (auto& v : x) v = Rational(num(rng), den(rng));
    return x;
  };
  const Rational tinv = 1 / t;
  long ell_bad = 0, hom_bad = 0, pull_bad = 0;
  double symbol_err = 0;
  const double td = to_double(t);
  for (int n = 0; n < samples; ++n) {
    auto g = sample(), h = sample();
    auto dg = dilate(g, t);
    for (int j = 1; j <= w.steps(); ++j) {
      Rational tj = 1, tinvj = 1;
      for (int k = 0; k < j; ++k) {
        tj *= t;
        tinvj *= tinv;
      }
      if (w.layer_norm_sq(j, dg) != tj * tj * w.layer_norm_sq(j, g)) ++ell_bad;
      for (int i = 0; i < alg.dim(); ++i)
        if (alg.layer_of(i) == j && dg[i] != tj * g[i]) ++ell_bad;
      auto pg = dilate(g, tinv);
      for (int i = 0; i < alg.dim(); ++i)
        if (alg.layer_of(i) == j && pg[i] != tinvj * g[i]) ++pull_bad;
    }
    if (w.multiply(dg, dilate(h, t)) != dilate(w.multiply(g, h), t)) ++hom_bad;

    std::vector<double> gd(alg.dim()), pd(alg.dim());
    auto pg = dilate(g, tinv);
    for (int i = 0; i < alg.dim(); ++i) {
      gd[i] = to_double(g[i]);
      pd[i] = to_double(pg[i]);
    }
    Mat sg = Mat::Zero(w.module_dim(), w.module_dim()), sp = sg;
    for (int j = 1; j <= w.steps(); ++j) {
      if (w.layer_norm(j, gd) == 0) continue;
      sg += signed_power(w.ell(j, gd), tau / j);
      sp += signed_power(w.ell(j, pd), tau / j);
    }
    double scale = std::max(1.0, max_abs(sg));
    symbol_err = std::max(symbol_err, max_abs(sp - std::pow(td, -tau) * sg) / scale);
  }
  rep.check_le("weights.scale_exactly", static_cast<double>(ell_bad), 0);
  rep.check_le("group_law.commutes_with_dilation", static_cast<double>(hom_bad), 0);
  rep.check_le("pullback.scales_by_t^-j", static_cast<double>(pull_bad), 0);
  rep.check_le("assembled_symbol.scales_by_t^-tau", symbol_err, 1e-12);
  rep.data()["t"] = to_string(t);
  rep.data()["tau"] = tau;
  rep.data()["samples"] = samples;
  return rep;
}

}  // namespace st2
