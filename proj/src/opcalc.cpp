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

#include "opcalc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace st2 {

Eigen::Index OperatorCollection::dim() const {
  if (!ops.empty()) return ops.front().rows();
  if (grading) return grading->rows();
  return 0;
}

AnticommuteDefect anticommute_defect(const OperatorCollection& c) {
  AnticommuteDefect d;
  auto consider = [&](double v, int j, int k) {
    if (v > d.max_defect) d = {v, j, k};
  };
  for (std::size_t j = 0; j < c.ops.size(); ++j) {
    for (std::size_t k = j + 1; k < c.ops.size(); ++k) {
      double scale = std::max(1.0, max_abs(c.ops[j]) * max_abs(c.ops[k]));
      consider(max_abs(anticommutator(c.ops[j], c.ops[k])) / scale, static_cast<int>(j),
               static_cast<int>(k));
    }
    if (c.grading) {
      double scale = std::max(1.0, max_abs(c.ops[j]));
      consider(max_abs(anticommutator(*c.grading, c.ops[j])) / scale, static_cast<int>(j), -1);
    }
  }
  return d;
}

void validate_collection(const OperatorCollection& c) {
  const Eigen::Index n = c.dim();
  for (std::size_t j = 0; j < c.ops.size(); ++j) {
    if (c.ops[j].rows() != n || c.ops[j].cols() != n)
      throw std::invalid_argument("collection: operator " + std::to_string(j) +
                                  " has the wrong shape");
    require_hermitian(c.ops[j], "collection operator " + std::to_string(j));
  }
  if (c.grading) {
    if (c.grading->rows() != n || c.grading->cols() != n)
      throw std::invalid_argument("collection: grading has the wrong shape");
    require_hermitian(*c.grading, "grading");
    if (max_abs(*c.grading * *c.grading - identity(n)) > 1e-12)
      throw std::invalid_argument("collection: grading does not square to the identity");
  }
  AnticommuteDefect d = anticommute_defect(c);
  if (d.max_defect > c.anticommute_tol) {
    std::string what = d.k >= 0 ? "operators " + std::to_string(d.j) + " and " +
                                      std::to_string(d.k) + " do not anticommute"
                                : "grading does not anticommute with operator " +
                                      std::to_string(d.j);
    throw std::invalid_argument("collection: " + what + " (defect " +
                                std::to_string(d.max_defect) + ")");
  }
}

namespace {

Mat pauli(char which) {
  Mat p = Mat::Zero(2, 2);
  switch (which) {
    case 'x': p(0, 1) = 1; p(1, 0) = 1; break;
    case 'y': p(0, 1) = cd(0, -1); p(1, 0) = cd(0, 1); break;
    case 'z': p(0, 0) = 1; p(1, 1) = -1; break;
    default: p = identity(2);
  }
  return p;
}

// Jordan-Wigner gammas on `qubits` tensor factors: Z...Z X I...I and
// Z...Z Y I...I for each site.
std::vector<Mat> jordan_wigner(int qubits) {
  std::vector<Mat> out;
  for (int site = 0; site < qubits; ++site)
    for (char c : {'x', 'y'}) {
      Mat g = Mat::Ones(1, 1);
      for (int q = 0; q < qubits; ++q)
        g = kron(g, q < site ? pauli('z') : q == site ? pauli(c) : pauli('i'));
      out.push_back(g);
    }
  return out;
}

Mat chirality(int qubits) {
  Mat g = Mat::Ones(1, 1);
  for (int q = 0; q < qubits; ++q) g = kron(g, pauli('z'));
  return g;
}

}  // namespace

CliffordGenerators clifford_generators(int n, bool graded) {
  if (n < 1) throw std::invalid_argument("clifford_generators: n must be >= 1");
  CliffordGenerators cg;
  cg.n = n;
  if (graded) {
    int qubits = (n + 1) / 2;
    auto g = jordan_wigner(qubits);
    cg.gammas.assign(g.begin(), g.begin() + n);
    cg.grading = chirality(qubits);
    return cg;
  }
  int qubits = n / 2;
  cg.gammas = jordan_wigner(qubits);
  if (n % 2 == 1) cg.gammas.push_back(chirality(qubits));
  if (n % 2 == 0) cg.grading = chirality(qubits);
  return cg;
}

Mat signed_power(const Mat& d, double t) {
  if (!(t > 0)) throw std::invalid_argument("signed_power: t must be positive");
  require_hermitian(d, "signed_power");
  Eigh e = eigh(d);
  double thr = kernel_threshold(e.values);
  return hfunc(e, [&](double x) {
    if (std::abs(x) <= thr) return 0.0;
    return (x > 0 ? 1.0 : -1.0) * std::pow(std::abs(x), t);
  });
}

Mat abs_power(const Mat& d, double t) {
  if (!(t > 0)) throw std::invalid_argument("abs_power: t must be positive");
  require_hermitian(d, "abs_power");
  Eigh e = eigh(d);
  double thr = kernel_threshold(e.values);
  return hfunc(e, [&](double x) { return std::abs(x) <= thr ? 0.0 : std::pow(std::abs(x), t); });
}

Mat delta_form(const OperatorCollection& c, const std::vector<double>& t) {
  if (t.size() != c.ops.size()) throw std::invalid_argument("delta_form: dimension mismatch");
  Mat out = Mat::Zero(c.dim(), c.dim());
  for (std::size_t j = 0; j < c.ops.size(); ++j) out += abs_power(c.ops[j], 2 * t[j]);
  return out;
}

Mat assemble(const OperatorCollection& c, const std::vector<double>& t) {
  if (t.size() != c.ops.size()) throw std::invalid_argument("assemble: dimension mismatch");
  validate_collection(c);
  Mat out = Mat::Zero(c.dim(), c.dim());
  for (std::size_t j = 0; j < c.ops.size(); ++j) out += signed_power(c.ops[j], t[j]);
  return out;
}

CollectionSpectra collection_spectra(const OperatorCollection& c) {
  validate_collection(c);
  CollectionSpectra s;
  for (const auto& op : c.ops) {
    s.eig.push_back(eigh(op));
    s.thr.push_back(kernel_threshold(s.eig.back().values));
  }
  return s;
}

namespace {

Mat spectral_sum(const CollectionSpectra& s, const std::vector<double>& t, bool signed_sum,
                 const char* what) {
  if (t.size() != s.eig.size() || s.eig.empty())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  for (double tj : t)
    if (!(tj > 0)) throw std::invalid_argument(std::string(what) + ": t must be positive");
  const Eigen::Index n = s.eig[0].values.size();
  Mat out = Mat::Zero(n, n);
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double thr = s.thr[j];
    const double p = signed_sum ? t[j] : 2 * t[j];
    out += hfunc(s.eig[j], [&](double x) {
      if (std::abs(x) <= thr) return 0.0;
      double m = std::pow(std::abs(x), p);
      return signed_sum && x < 0 ? -m : m;
    });
  }
  return out;
}

}  // namespace

Mat delta_form(const CollectionSpectra& s, const std::vector<double>& t) {
  return spectral_sum(s, t, false, "delta_form");
}

Mat assemble(const CollectionSpectra& s, const std::vector<double>& t) {
  return spectral_sum(s, t, true, "assemble");
}

Mat bounded_transform(const Mat& d) {
  require_hermitian(d, "bounded_transform");
  return hfunc(d, [](double x) { return x / std::sqrt(1 + x * x); });
}

Report sww_inequality_check(const Mat& d, const Mat& a, double m, double psd_tol) {
  if (!(m >= 1)) throw std::invalid_argument("sww_inequality_check: order must be >= 1");
  require_hermitian(d, "sww_inequality_check");
  if (a.rows() != d.rows() || a.cols() != d.cols())
    throw std::invalid_argument("sww_inequality_check: shape mismatch");
  if (max_abs(a + a.adjoint()) > 1e-12 * std::max(1.0, max_abs(a)))
    throw std::invalid_argument("sww_inequality_check: a is not anti-self-adjoint");

  Report r("sww-inequality", "-C(1+D^2)^{-1/2m} <= [F_D,a] <= C(1+D^2)^{-1/2m}");
  Eigh e = eigh(d);
  Mat rel = hfunc(e, [&](double x) { return std::pow(1 + x * x, -0.5 + 0.5 / m); });
  Mat p = hfunc(e, [&](double x) { return std::pow(1 + x * x, -0.5 / m); });
  Mat f = hfunc(e, [](double x) { return x / std::sqrt(1 + x * x); });
  double big_m = opnorm(commutator(d, a) * rel);
  double c = big_m / std::sqrt(M_PI) * std::tgamma(0.5 / m) / std::tgamma(0.5 + 0.5 / m);
  Mat k = commutator(f, a);
  k = 0.5 * (k + k.adjoint());
  double scale = std::max(1.0, c);
  double lo_plus = min_eigenvalue(c * p + k);
  double lo_minus = min_eigenvalue(c * p - k);
  r.data()["order"] = m;
  r.data()["M"] = big_m;
  r.data()["C"] = c;
  r.check_ge("psd_plus", lo_plus, -psd_tol * scale);
  r.check_ge("psd_minus", lo_minus, -psd_tol * scale);

  RVec sk = singular_values(k);
  RVec sp = singular_values(p);
  double worst = -1;
  Eigen::Index worst_k = -1;
  for (Eigen::Index kk = 1; 2 * kk - 1 <= sk.size(); ++kk) {
    double excess = sk(2 * kk - 2) - c * sp(kk - 1);
    if (excess > worst) {
      worst = excess;
      worst_k = kk;
    }
  }
  Json datum = nullptr;
  if (worst > psd_tol * scale) datum = Json{{"k", worst_k}, {"excess", worst}};
  r.check_le("singular_value_bound", std::max(worst, 0.0), psd_tol * scale, datum);
  return r;
}

namespace {

Mat weight_inverse(const OperatorCollection& c, const std::vector<double>& row, double power) {
  const Eigen::Index n = c.dim();
  Mat w = identity(n);
  for (std::size_t j = 0; j < c.ops.size(); ++j)
    if (row[j] > 0) w += abs_power(c.ops[j], row[j]);
  w = 0.5 * (w + w.adjoint());
  return hfunc(w, [&](double x) { return std::pow(x, -power); });
}

double level_norm(const LadderLevel& lv, std::size_t i, const std::vector<double>& row) {
  return opnorm(commutator(lv.coll.ops[i], lv.a) * weight_inverse(lv.coll, row, 1.0));
}

struct SlopeVerdict {
  Fit fit;
  bool all_zero = false;
  bool bounded = false;
};

SlopeVerdict slope_verdict(const std::vector<double>& sizes, const std::vector<double>& norms,
                           double tol) {
  SlopeVerdict v;
  double top = *std::max_element(norms.begin(), norms.end());
  if (top <= 1e-12) {
    v.all_zero = true;
    v.bounded = true;
    return v;
  }
  v.fit = loglog_fit(sizes, norms, true);
  v.bounded = v.fit.slope <= tol;
  return v;
}

}  // namespace

Report commutator_order_diagnostic(const std::vector<LadderLevel>& ladder, std::size_t i,
                                   const std::vector<double>& eps_row, double slope_tol,
                                   double delta) {
  if (ladder.size() < 4)
    throw std::invalid_argument("commutator_order_diagnostic: ladder needs >= 4 levels");
  Report r("commutator-order", "[D_i,a](1+Sum_j |D_j|^{eps_ij})^{-1} bounded");
  std::vector<double> sizes, norms;
  for (const auto& lv : ladder) {
    if (i >= lv.coll.ops.size() || eps_row.size() != lv.coll.ops.size())
      throw std::invalid_argument("commutator_order_diagnostic: index mismatch");
    sizes.push_back(lv.size);
    norms.push_back(level_norm(lv, i, eps_row));
  }
  r.set_ladder(sizes);
  auto& s = r.series("norms");
  s.columns = {"size", "norm"};
  for (std::size_t k = 0; k < sizes.size(); ++k) s.rows.push_back({sizes[k], norms[k]});
  SlopeVerdict v = slope_verdict(sizes, norms, slope_tol);
  r.data()["norms"] = norms;
  r.data()["all_zero"] = v.all_zero;
  if (!v.all_zero) r.add_fit("slope", v.fit);
  r.check("bounded", v.bounded, v.all_zero ? 0.0 : v.fit.slope, slope_tol, "<=",
          v.bounded ? Json(nullptr) : Json{{"norms", norms}});

  Json reduced = Json::array();
  for (std::size_t j = 0; j < eps_row.size(); ++j) {
    if (eps_row[j] <= 0) continue;
    std::vector<double> row = eps_row;
    row[j] = std::max(0.0, row[j] - delta);
    std::vector<double> rn;
    for (const auto& lv : ladder) rn.push_back(level_norm(lv, i, row));
    SlopeVerdict rv = slope_verdict(sizes, rn, slope_tol);
    reduced.push_back(Json{{"j", j},
                           {"eps", row[j]},
                           {"slope", rv.all_zero ? 0.0 : rv.fit.slope},
                           {"needed", !rv.bounded}});
  }
  r.data()["reduced"] = reduced;
  return r;
}

Report summability_fit(std::vector<double> spectrum, double claimed_p, double rel_tol) {
  if (spectrum.size() < 50)
    throw std::invalid_argument("summability_fit: need at least 50 eigenvalues");
  for (double x : spectrum)
    if (x < -1e-12) throw std::invalid_argument("summability_fit: negative spectrum");
  auto [lo, hi] = std::minmax_element(spectrum.begin(), spectrum.end());
  if (*hi - *lo <= 1e-12 * std::max(1.0, std::abs(*hi)))
    throw std::invalid_argument("summability_fit: degenerate spectrum");
  std::vector<double> mu;
  for (double x : spectrum) mu.push_back(1.0 / (1.0 + std::max(x, 0.0)));
  std::sort(mu.begin(), mu.end(), std::greater<>());
  std::vector<double> k(mu.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<double>(i + 1);
  Fit f = loglog_fit(k, mu, true);
  Report r("summability", "mu_k((1+D^2)^{-1/2}) ~ k^{-1/p}");
  if (f.slope >= 0) {
    r.check("decay", false, f.slope, 0, "<");
    return r;
  }
  double p_hat = -1.0 / f.slope;
  double p_err = f.stderr_slope / (f.slope * f.slope);
  r.data()["p_hat"] = p_hat;
  r.data()["p_hat_stderr"] = p_err;
  r.data()["claimed_p"] = claimed_p;
  r.add_fit("log_mu_vs_log_k", f);
  r.check_le("p_hat_rel_error", std::abs(p_hat - claimed_p) / claimed_p, rel_tol,
             Json{{"p_hat", p_hat}, {"claimed", claimed_p}});
  return r;
}

Fit counting_exponent(std::vector<double> spectrum, double lambda_max, int samples) {
  std::sort(spectrum.begin(), spectrum.end());
  std::vector<double> lam, cnt;
  for (int s = 0; s < samples; ++s) {
    double l = lambda_max * std::pow(0.5, 1.0 - static_cast<double>(s) / (samples - 1));
    auto n = std::upper_bound(spectrum.begin(), spectrum.end(), l) - spectrum.begin();
    lam.push_back(l);
    cnt.push_back(static_cast<double>(n));
  }
  return loglog_fit(lam, cnt, false);
}

OperatorCollection external_product(const OperatorCollection& a, const OperatorCollection& b) {
  const Eigen::Index na = a.dim(), nb = b.dim();
  OperatorCollection out;
  out.anticommute_tol = std::max(a.anticommute_tol, b.anticommute_tol);
  const Mat ia = identity(na), ib = identity(nb);
  if (a.grading && b.grading) {
    for (const auto& d : a.ops) out.ops.push_back(kron(d, ib));
    for (const auto& d : b.ops) out.ops.push_back(kron(*a.grading, d));
    out.grading = kron(*a.grading, *b.grading);
  } else if (a.grading) {
    for (const auto& d : a.ops) out.ops.push_back(kron(d, ib));
    for (const auto& d : b.ops) out.ops.push_back(kron(*a.grading, d));
  } else if (b.grading) {
    for (const auto& d : a.ops) out.ops.push_back(kron(d, *b.grading));
    for (const auto& d : b.ops) out.ops.push_back(kron(ia, d));
  } else {
    Mat s1 = Mat::Zero(2, 2), s2 = Mat::Zero(2, 2), s3 = Mat::Zero(2, 2);
    s1(0, 1) = s1(1, 0) = 1;
    s2(0, 1) = cd(0, -1);
    s2(1, 0) = cd(0, 1);
    s3(0, 0) = 1;
    s3(1, 1) = -1;
    for (const auto& d : a.ops) out.ops.push_back(kron(kron(d, ib), s1));
    for (const auto& d : b.ops) out.ops.push_back(kron(kron(ia, d), s2));
    out.grading = kron(identity(na * nb), s3);
  }
  return out;
}

OperatorCollection direct_sum(const OperatorCollection& a, const OperatorCollection& b) {
  const Eigen::Index na = a.dim(), nb = b.dim();
  OperatorCollection out;
  out.anticommute_tol = std::max(a.anticommute_tol, b.anticommute_tol);
  for (const auto& d : a.ops) {
    Mat m = Mat::Zero(na + nb, na + nb);
    m.topLeftCorner(na, na) = d;
    out.ops.push_back(m);
  }
  for (const auto& d : b.ops) {
    Mat m = Mat::Zero(na + nb, na + nb);
    m.bottomRightCorner(nb, nb) = d;
    out.ops.push_back(m);
  }
  if (a.grading && b.grading) {
    Mat g = Mat::Zero(na + nb, na + nb);
    g.topLeftCorner(na, na) = *a.grading;
    g.bottomRightCorner(nb, nb) = *b.grading;
    out.grading = g;
  }
  return out;
}

namespace {

Mat restrict_to(const Mat& m, const std::vector<Eigen::Index>& idx) {
  if (idx.empty()) return m;
  Mat r(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = m(idx[i], idx[j]);
  return r;
}

}  // namespace

Report conformal_guess_check(const std::vector<ConformalLevel>& ladder,
                             const std::vector<double>& t,
                             const std::vector<std::vector<double>>& eps, double slope_tol) {
  if (ladder.size() < 2)
    throw std::invalid_argument("conformal_guess_check: ladder needs >= 2 levels");
  Report r("conformal-guess", "U D_t U* - mu D_t mu* relatively bounded");
  const std::size_t ni = t.size();
  std::vector<double> sizes;
  std::vector<std::vector<double>> diff(ni), comm(ni);
  for (const auto& lv : ladder) {
    if (lv.coll.ops.size() != ni || eps.size() != ni)
      throw std::invalid_argument("conformal_guess_check: index mismatch");
    Eigen::JacobiSVD<Mat> svd(lv.mu);
    if (svd.singularValues().minCoeff() <= 1e-14 * std::max(1.0, svd.singularValues()(0)))
      throw std::invalid_argument("conformal_guess_check: mu is singular");
    sizes.push_back(lv.size);
    for (std::size_t i = 0; i < ni; ++i) {
      Mat s = signed_power(lv.coll.ops[i], t[i]);
      Mat d = (lv.u * s * lv.u.adjoint() - lv.mu * s * lv.mu.adjoint()) *
              weight_inverse(lv.coll, eps[i], t[i]);
      Mat c = commutator(lv.coll.ops[i], lv.mu) * weight_inverse(lv.coll, eps[i], 1.0);
      diff[i].push_back(opnorm(restrict_to(d, lv.interior)));
      comm[i].push_back(opnorm(restrict_to(c, lv.interior)));
    }
  }
  r.set_ladder(sizes);
  for (std::size_t i = 0; i < ni; ++i) {
    const std::string tag = std::to_string(i + 1);
    for (auto* which : {&diff, &comm}) {
      const bool is_diff = which == &diff;
      const std::string name = (is_diff ? "difference_" : "mu_commutator_") + tag;
      SlopeVerdict v = slope_verdict(sizes, (*which)[i], slope_tol);
      r.data()[name] = (*which)[i];
      if (!v.all_zero) r.add_fit(name, v.fit);
      r.check(name + "_bounded", v.bounded, v.all_zero ? 0.0 : v.fit.slope, slope_tol, "<=",
              v.bounded ? Json(nullptr) : Json{{"norms", (*which)[i]}});
    }
  }
  return r;
}

InterpolationBound interpolation_inequality(const std::vector<RVec>& diag_ops,
                                            const std::vector<double>& s, double sigma,
                                            const std::vector<double>& t, double tau,
                                            double margin) {
  if (diag_ops.empty() || s.size() != diag_ops.size() || t.size() != diag_ops.size())
    throw std::invalid_argument("interpolation_inequality: dimension mismatch");
  for (std::size_t i = 0; i < s.size(); ++i)
    if (sigma * s[i] > tau * t[i] + 1e-15)
      throw std::invalid_argument("interpolation_inequality: needs sigma s_i <= tau t_i");
  const Eigen::Index n = diag_ops[0].size();
  RVec lhs(n), rhs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double ds = 0, dt = 0;
    for (std::size_t i = 0; i < diag_ops.size(); ++i) {
      double a = std::abs(diag_ops[i](k));
      ds += std::pow(a, 2 * s[i]);
      dt += std::pow(a, 2 * t[i]);
    }
    lhs(k) = std::pow(1 + ds, sigma);
    rhs(k) = std::pow(1 + dt, tau);
  }
  InterpolationBound b;
  b.constant = (lhs.array() / rhs.array()).maxCoeff();
  b.min_eigenvalue = ((1 + margin) * b.constant * rhs - lhs).minCoeff();
  return b;
}

}  // namespace st2

namespace st2 {

Mat random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = cd(nd(rng), nd(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  // Fix column phases by the diagonal of R so the draw is Haar.
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

Mat random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = cd(nd(rng), nd(rng));
  return (g + g.adjoint()) / 2.0;
}

OperatorCollection random_anticommuting_collection(int count, Eigen::Index block,
                                                   std::mt19937_64& rng, bool graded) {
  if (count < 1 || block < 1)
    throw std::invalid_argument("random_anticommuting_collection: bad sizes");
  CliffordGenerators cg = clifford_generators(count, graded);
  const Eigen::Index n = cg.gammas[0].rows() * block;
  Mat u = random_unitary(n, rng);
  std::uniform_real_distribution<double> val(-3, 3), coin(0, 1);
  OperatorCollection c;
  for (int j = 0; j < count; ++j) {
    Mat h = Mat::Zero(block, block);
    for (Eigen::Index k = 0; k < block; ++k) h(k, k) = coin(rng) < 0.1 ? 0.0 : val(rng);
    Mat d = u * kron(cg.gammas[j], h) * u.adjoint();
    c.ops.push_back((d + d.adjoint()) / 2.0);
  }
  if (cg.grading) {
    Mat g = u * kron(*cg.grading, identity(block)) * u.adjoint();
    c.grading = (g + g.adjoint()) / 2.0;
  }
  return c;
}

}  // namespace st2
