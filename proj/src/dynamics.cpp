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

#include "dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace st2 {

namespace {

using IntMat = std::vector<std::vector<Integer>>;

IntMat to_integer(const IMat& a) {
  IntMat m;
  for (const auto& row : a) {
    if (row.size() != a.size()) throw std::invalid_argument("integer matrix is not square");
    std::vector<Integer> r;
    for (long v : row) r.emplace_back(v);
    m.push_back(std::move(r));
  }
  return m;
}

IntMat mul(const IntMat& a, const IntMat& b) {
  const std::size_t n = a.size();
  IntMat out(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

bool is_zero(const IntMat& a) {
  for (const auto& row : a)
    for (const auto& v : row)
      if (v != 0) return false;
  return true;
}

IMat to_long(const IntMat& a) {
  IMat out;
  for (const auto& row : a) {
    IVec r;
    for (const auto& v : row) {
      if (v > Integer(std::numeric_limits<long>::max()) ||
          v < Integer(std::numeric_limits<long>::min()))
        throw std::overflow_error("integer matrix power overflows 64 bits");
      r.push_back(v.convert_to<long>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::optional<int> nilpotency_step(const IMat& a) {
  IntMat n = to_integer(a);
  const std::size_t d = n.size();
  if (d == 0) return 0;
  for (std::size_t i = 0; i < d; ++i) n[i][i] -= 1;
  IntMat p = n;
  for (std::size_t k = 1; k <= d; ++k) {
    if (is_zero(p)) return static_cast<int>(k) - 1;
    p = mul(p, n);
  }
  return std::nullopt;
}

IMat int_power(const IMat& a, long n) {
  IntMat base = to_integer(a);
  const std::size_t d = base.size();
  if (n < 0) {
    // Exact inverse; integral only when det = +-1.
    QMat q(d, std::vector<Rational>(d));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) q[i][j] = Rational(base[i][j]);
    IntMat inv(d, std::vector<Integer>(d));
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<Rational> e(d);
      e[j] = 1;
      auto col = solve_q(q, e, d);
      if (!col) throw std::domain_error("int_power: matrix is singular");
      for (std::size_t i = 0; i < d; ++i) {
        if (denominator((*col)[i]) != 1)
          throw std::domain_error("int_power: inverse is not integral");
        inv[i][j] = numerator((*col)[i]);
      }
    }
    base = inv;
    n = -n;
  }
  IntMat out(d, std::vector<Integer>(d));
  for (std::size_t i = 0; i < d; ++i) out[i][i] = 1;
  while (n > 0) {
    if (n & 1) out = mul(out, base);
    base = mul(base, base);
    n >>= 1;
  }
  return to_long(out);
}

IVec int_apply(const IMat& a, const IVec& x) {
  IVec out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) out[i] += a[i][j] * x[j];
  return out;
}

TorusTruncation::TorusTruncation(int d, int cutoff, RMat theta, RMat gram)
    : d_(d), k_(cutoff), theta_(std::move(theta)) {
  if (d < 1 || cutoff < 1) throw std::invalid_argument("torus truncation: bad dimension or cutoff");
  if (theta_.size() == 0) theta_ = RMat::Zero(d, d);
  if (gram.size() == 0) gram = RMat::Identity(d, d);
  if (theta_.rows() != d || theta_.cols() != d || gram.rows() != d || gram.cols() != d)
    throw std::invalid_argument("torus truncation: Theta and Gram must be d x d");
  if ((theta_ + theta_.transpose()).cwiseAbs().maxCoeff() > 1e-14)
    throw std::invalid_argument("torus truncation: Theta must be antisymmetric");
  Eigen::SelfAdjointEigenSolver<RMat> es(gram);
  if (es.eigenvalues().minCoeff() <= 0)
    throw std::invalid_argument("torus truncation: Gram matrix must be positive definite");
  v_ = es.operatorSqrt();
  auto cg = clifford_generators(d, false);
  for (int i = 0; i < d; ++i) {
    Mat c = Mat::Zero(cg.gammas[0].rows(), cg.gammas[0].cols());
    for (int j = 0; j < d; ++j) c += v_(i, j) * cg.gammas[j];
    c_.push_back(c);
  }
  modes_ = 1;
  for (int i = 0; i < d; ++i) modes_ *= 2 * cutoff + 1;
}

long TorusTruncation::mode_index(const IVec& y) const {
  long idx = 0;
  for (int i = 0; i < d_; ++i) {
    if (y[i] < -k_ || y[i] > k_) return -1;
    idx = idx * (2 * k_ + 1) + (y[i] + k_);
  }
  return idx;
}

IVec TorusTruncation::mode(long index) const {
  IVec y(d_);
  for (int i = d_ - 1; i >= 0; --i) {
    y[i] = index % (2 * k_ + 1) - k_;
    index /= 2 * k_ + 1;
  }
  return y;
}

Eigen::SparseMatrix<cd> TorusTruncation::dirac() const {
  const Eigen::Index s = spinor_dim();
  std::vector<Eigen::Triplet<cd>> trip;
  for (long m = 0; m < modes_; ++m) {
    IVec y = mode(m);
    Mat block = Mat::Zero(s, s);
    for (int i = 0; i < d_; ++i) block += static_cast<double>(y[i]) * c_[i];
    for (Eigen::Index r = 0; r < s; ++r)
      for (Eigen::Index c = 0; c < s; ++c)
        if (block(r, c) != cd(0)) trip.emplace_back(m * s + r, m * s + c, block(r, c));
  }
  Eigen::SparseMatrix<cd> out(dim(), dim());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::SparseMatrix<cd> TorusTruncation::translation(const IVec& x) const {
  const Eigen::Index s = spinor_dim();
  std::vector<Eigen::Triplet<cd>> trip;
  RVec tx = theta_ * Eigen::Map<const Eigen::Matrix<long, Eigen::Dynamic, 1>>(x.data(), d_)
                         .cast<double>();
  for (long m = 0; m < modes_; ++m) {
    IVec z = mode(m);
    IVec zx(z);
    for (int i = 0; i < d_; ++i) zx[i] += x[i];
    long target = mode_index(zx);
    if (target < 0) continue;
    double phase = 0;
    for (int i = 0; i < d_; ++i) phase += tx(i) * static_cast<double>(z[i]);
    cd f = std::polar(1.0, M_PI * phase);
    for (Eigen::Index r = 0; r < s; ++r) trip.emplace_back(target * s + r, m * s + r, f);
  }
  Eigen::SparseMatrix<cd> out(dim(), dim());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

double sparse_norm(const Eigen::SparseMatrix<cd>& a, int max_iter, double tol) {
  if (a.nonZeros() == 0) return 0;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  Vec v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cd(nd(rng), nd(rng));
  v.normalize();
  double prev = 0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = a.adjoint() * (a * v);
    double lam = w.norm();
    if (lam == 0) return 0;
    v = w / lam;
    if (std::abs(lam - prev) <= tol * lam) return std::sqrt(lam);
    prev = lam;
  }
  return std::sqrt(prev);
}

NcNorm nctorus_commutator_norm(const TorusTruncation& tr, const IVec& x, const IMat& a, long n) {
  if (static_cast<int>(x.size()) != tr.d() || static_cast<int>(a.size()) != tr.d())
    throw std::invalid_argument("nctorus_commutator_norm: dimension mismatch");
  IVec y = int_apply(int_power(a, n), x);
  NcNorm out;
  RVec yd(tr.d());
  for (int i = 0; i < tr.d(); ++i) yd(i) = static_cast<double>(y[i]);
  out.closed_form = (tr.v() * yd).norm();
  long inf = 0;
  for (long v : y) inf = std::max(inf, std::abs(v));
  out.overflow = inf > tr.cutoff();
  if (inf > 2L * tr.cutoff()) return out;
  Eigen::SparseMatrix<cd> d = tr.dirac(), l = tr.translation(y);
  Eigen::SparseMatrix<cd> c = d * l - l * d;
  c.prune(cd(0), 0);
  out.matrix = sparse_norm(c);
  return out;
}

namespace {

struct Derivs {
  cd dx, dy;
};

Derivs trig_derivs(const TrigPoly& a, long n, double x, double y) {
  // alpha_n(a) has modes (k1, k2 - n k1).
  Derivs d{0, 0};
  for (const auto& [k, c] : a.terms) {
    double m1 = static_cast<double>(k[0]), m2 = static_cast<double>(k[1] - n * k[0]);
    cd e = c * std::polar(1.0, 2 * M_PI * (m1 * x + m2 * y));
    d.dx += cd(0, 2 * M_PI * m1) * e;
    d.dy += cd(0, 2 * M_PI * m2) * e;
  }
  return d;
}

// Norm of -i(gamma_1 u + gamma_2 v) with Pauli gammas.
double pointwise_norm(cd u, cd v) {
  Eigen::Matrix2cd m;
  m << 0, u - cd(0, 1) * v, u + cd(0, 1) * v, 0;
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

TorusCommutator classical_torus_commutator(const TrigPoly& a, long n, int cutoff) {
  TorusCommutator out;
  long maxmode = 0;
  for (const auto& [k, c] : a.terms) {
    long m1 = k[0], m2 = k[1] - n * k[0];
    maxmode = std::max({maxmode, std::abs(m1), std::abs(m2), std::abs(k[1])});
    if (std::abs(m1) > cutoff || std::abs(m2) > cutoff) out.overflow = true;
  }
  // 16 samples per shortest wavelength along each axis.
  const long g = std::max<long>(64, 16 * (maxmode + 1));
  for (long i = 0; i < g; ++i)
    for (long j = 0; j < g; ++j) {
      double x = static_cast<double>(i) / g, y = static_cast<double>(j) / g;
      Derivs d = trig_derivs(a, n, x, y);
      out.norm = std::max(out.norm, pointwise_norm(d.dx, d.dy));
      Derivs d0 = trig_derivs(a, 0, x, y);
      out.dx_sup = std::max(out.dx_sup, std::abs(d0.dx));
      out.grad_sup = std::max(out.grad_sup, std::sqrt(std::norm(d0.dx) + std::norm(d0.dy)));
    }
  return out;
}

Report classical_torus_bound(const TrigPoly& a, const std::vector<long>& ns, int cutoff) {
  Report rep("dynamics.classical_torus",
             "[D, alpha_n(a)] = gamma_1 phi*_{-n}(d_x a) + gamma_2(phi*_{-n}(d_y a) - n phi*_{-n}(d_x a))");
  const double c_analytic = std::sqrt(2.0);
  double c_fit = 0;
  bool overflow = false;
  auto& s = rep.series("norms");
  s.columns = {"n", "norm", "n_dx_sup"};
  double dx = 0, grad = 0;
  for (long n : ns) {
    auto tc = classical_torus_commutator(a, n, cutoff);
    overflow = overflow || tc.overflow;
    dx = tc.dx_sup;
    grad = tc.grad_sup;
    double lead = std::abs(static_cast<double>(n)) * tc.dx_sup;
    if (tc.grad_sup > 0) c_fit = std::max(c_fit, std::abs(tc.norm - lead) / tc.grad_sup);
    s.rows.push_back({static_cast<double>(n), tc.norm, lead});
    rep.check_le("upper.n" + std::to_string(n), tc.norm, lead + c_analytic * tc.grad_sup + 1e-9);
    rep.check_ge("lower.n" + std::to_string(n), tc.norm, lead - c_analytic * tc.grad_sup - 1e-9);
  }
  rep.data()["dx_sup"] = dx;
  rep.data()["grad_sup"] = grad;
  rep.data()["c_analytic"] = c_analytic;
  rep.data()["c_fitted"] = c_fit;
  rep.data()["overflow"] = overflow;
  return rep;
}

OperatorCollection crossed_collection(const CrossedTruncation& ct) {
  const int w = ct.window;
  if (w < 1) throw std::invalid_argument("crossed_collection: window must be >= 1");
  if (static_cast<int>(ct.a.size()) != ct.base.d())
    throw std::invalid_argument("crossed_collection: action has the wrong size");
  OperatorCollection group;
  Mat nmat = Mat::Zero(2 * w + 1, 2 * w + 1);
  for (int n = -w; n <= w; ++n) nmat(n + w, n + w) = n;
  group.ops.push_back(nmat);
  OperatorCollection base;
  base.ops.push_back(Mat(ct.base.dirac()));
  auto cg = clifford_generators(ct.base.d(), false);
  if (cg.grading) base.grading = kron(identity(ct.base.modes()), *cg.grading);
  return external_product(group, base);
}

Mat crossed_element(const CrossedTruncation& ct, const IVec& x) {
  const int w = ct.window;
  const Eigen::Index bd = ct.base.dim();
  const bool doubled = !clifford_generators(ct.base.d(), false).grading.has_value();
  Mat out = Mat::Zero((2 * w + 1) * bd, (2 * w + 1) * bd);
  for (int n = -w; n <= w; ++n) {
    IVec y = int_apply(int_power(ct.a, -n), x);
    out.block((n + w) * bd, (n + w) * bd, bd, bd) = Mat(ct.base.translation(y));
  }
  return doubled ? kron(out, identity(2)) : out;
}

Report crossed_shear_diagnostic(const IMat& a, const IVec& x, const std::vector<int>& ladder,
                                double eps21, double slope_tol) {
  if (ladder.size() < 4) throw std::invalid_argument("crossed_shear_diagnostic: ladder needs 4 levels");
  auto s = nilpotency_step(a);
  if (!s) throw std::domain_error("crossed_shear_diagnostic: action is not unipotent");
  Report rep("dynamics.crossed_shear", "(M_l (x) 1, 1 (x) D), eps = [[0,0],[s,0]]");
  std::vector<double> sizes, sups;
  auto& ser = rep.series("ladder");
  ser.columns = {"W", "sup", "argmax_n"};
  bool overflow = false;
  for (int w : ladder) {
    TorusTruncation tr(static_cast<int>(x.size()), w);
    double best = 0;
    long arg = 0;
    for (long n = -w; n <= w; ++n) {
      auto nc = nctorus_commutator_norm(tr, x, a, -n);
      overflow = overflow || nc.overflow;
      double v = nc.matrix / (1 + std::pow(std::abs(static_cast<double>(n)), eps21));
      if (v > best) {
        best = v;
        arg = n;
      }
    }
    sizes.push_back(w);
    sups.push_back(best);
    ser.rows.push_back({static_cast<double>(w), best, static_cast<double>(arg)});
  }
  rep.set_ladder(sizes);
  Fit f = loglog_fit(sizes, sups, true);
  rep.add_fit("sup", f);
  rep.data()["step"] = *s;
  rep.data()["eps21"] = eps21;
  rep.data()["slope"] = f.slope;
  rep.data()["overflow"] = overflow;
  rep.data()["bounded"] = f.slope <= slope_tol;
  return rep;
}

std::string to_string(MobiusKind k) {
  switch (k) {
    case MobiusKind::kIdentity: return "identity";
    case MobiusKind::kElliptic: return "elliptic";
    case MobiusKind::kParabolic: return "parabolic";
    case MobiusKind::kLoxodromic: return "loxodromic";
  }
  return "unknown";
}

MobiusKind mobius_classify(const Eigen::Matrix2cd& g, double tol) {
  if (std::abs(g.determinant() - cd(1)) > tol)
    throw std::domain_error("mobius_classify: determinant must be 1");
  cd tr = g.trace();
  double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= tol * scale ||
      (g + Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= tol * scale)
    return MobiusKind::kIdentity;
  if (std::abs(tr - cd(2)) <= tol * scale || std::abs(tr + cd(2)) <= tol * scale)
    return MobiusKind::kParabolic;
  if (std::abs(tr.imag()) <= tol * scale && std::abs(tr.real()) < 2) return MobiusKind::kElliptic;
  return MobiusKind::kLoxodromic;
}

double mobius_closed_form(MobiusKind kind, cd lambda, long n) {
  const double nn = static_cast<double>(n);
  switch (kind) {
    case MobiusKind::kIdentity:
    case MobiusKind::kElliptic: return 1.0;
    case MobiusKind::kParabolic:
      return 0.5 * (nn * nn + std::abs(nn) * std::sqrt(nn * nn + 4) + 2);
    case MobiusKind::kLoxodromic: {
      double l = std::pow(std::abs(lambda), 2 * nn);
      return std::max(l, 1 / l);
    }
  }
  return 0;
}

double mobius_grid_sup(const Eigen::Matrix2cd& g, long n, int grid) {
  Eigen::Matrix2cd t = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd base = n >= 0 ? g : Eigen::Matrix2cd(g.inverse());
  for (long k = 0; k < std::abs(n); ++k) t = t * base;
  const cd a = t(0, 0), b = t(0, 1), c = t(1, 0), d = t(1, 1);
  auto jac = [&](cd z) {
    cd den = c * z + d;
    if (std::abs(den) == 0) return 0.0;
    cd tz = (a * z + b) / den;
    return (1 + std::norm(z)) / (std::norm(den) * (1 + std::norm(tz)));
  };
  double best = 0;
  // z = infinity: J(inf) = lim |z|^2 / (|cz + d|^2 (1 + |tau z|^2)).
  if (std::abs(c) > 0)
    best = 1 / (std::norm(c) * (1 + std::norm(a / c)));
  else
    best = 1 / std::norm(a);  // tau z ~ (a/d) z and ad = 1
  const double span = 2 * t.cwiseAbs().maxCoeff() + 4;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      double x = -span + 2 * span * i / (grid - 1), y = -span + 2 * span * j / (grid - 1);
      best = std::max(best, jac(cd(x, y)));
    }
  const double norm2 = std::max(1.0, t.squaredNorm());
  const double lo = std::log(1e-3 / norm2), hi = std::log(1e3 * norm2);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      double r = std::exp(lo + (hi - lo) * i / (grid - 1));
      double phi = 2 * M_PI * j / grid;
      best = std::max(best, jac(std::polar(r, phi)));
    }
  return best;
}

StructureConstants StructureConstants::of(const GradedNilpotentAlgebra& g) {
  return {g.dim(), g.constants()};
}

StructureConstants StructureConstants::sl2() {
  // [h, e] = 2e, [h, f] = -2f, [e, f] = h with basis (h, e, f).
  StructureConstants s;
  s.dim = 3;
  auto add = [&](int a, int b, int c, int v) {
    s.c.push_back({a, b, c, Rational(v)});
    s.c.push_back({b, a, c, Rational(-v)});
  };
  add(0, 1, 1, 2);
  add(0, 2, 2, -2);
  add(1, 2, 0, 1);
  return s;
}

AdjointGrowth adjoint_growth(const StructureConstants& g, const std::vector<Rational>& x,
                             const std::vector<double>& t_grid) {
  const int n = g.dim;
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("adjoint_growth: wrong length");
  QMat ad(n, std::vector<Rational>(n));
  for (const auto& c : g.c) ad[c.c][c.b] += c.value * x[c.a];
  std::vector<QMat> powers{QMat(n, std::vector<Rational>(n))};
  for (int i = 0; i < n; ++i) powers[0][i][i] = 1;
  AdjointGrowth out;
  for (int k = 1; k <= n; ++k) {
    QMat next = QMat(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (ad[i][l] == 0) continue;
        for (int j = 0; j < n; ++j) next[i][j] += ad[i][l] * powers.back()[l][j];
      }
    bool zero = true;
    for (const auto& row : next)
      for (const auto& v : row)
        if (v != 0) zero = false;
    if (zero) break;
    if (k == n) throw std::domain_error("adjoint_growth: ad_X is not nilpotent");
    powers.push_back(std::move(next));
    out.top_power = k;
  }
  for (double t : t_grid) {
    RMat m = RMat::Zero(n, n);
    double coef = 1;
    for (std::size_t k = 0; k < powers.size(); ++k) {
      if (k > 0) coef *= t / static_cast<double>(k);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) += coef * to_double(powers[k][i][j]);
    }
    Eigen::JacobiSVD<RMat> svd(m);
    out.t.push_back(t);
    out.norms.push_back(svd.singularValues()(0));
  }
  out.fitted_degree = loglog_fit(out.t, out.norms, true).slope;
  return out;
}

}  // namespace st2
