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

#include "symbols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace st2 {

M2 rotation_j() {
  M2 j;
  j << 0, -1, 1, 0;
  return j;
}

CharacterF character_matrix_f(const R2& xi) {
  const double n2 = xi.squaredNorm();
  if (n2 == 0) throw std::invalid_argument("character_matrix_f: xi must be nonzero");
  const R2 jxi = rotation_j() * xi;
  CharacterF c;
  c.e1 = xi * xi.transpose() / n2;
  c.e2 = jxi * jxi.transpose() / n2;
  c.l1 = n2;
  c.l2 = n2 * n2;
  c.f = xi * xi.transpose() + n2 * jxi * jxi.transpose();
  return c;
}

M2 a_alpha(const R2& xi, const R2& v, double alpha) {
  const M2 j = rotation_j();
  M2 b = xi * (j * v).transpose() + v * (j * xi).transpose();
  if (xi.squaredNorm() == 0) return b;
  CharacterF c = character_matrix_f(xi);
  const double p = -0.5 + alpha;
  M2 power = std::pow(1 + c.l1, p) * c.e1 + std::pow(1 + c.l2, p) * c.e2;
  return b * power;
}

double a_alpha_norm(const R2& xi, const R2& v, double alpha) {
  Eigen::JacobiSVD<M2> svd(a_alpha(xi, v, alpha));
  return svd.singularValues()(0);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0) || !(hi >= lo) || n < 2) throw std::invalid_argument("log_grid: bad range");
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return g;
}

RayProfile ray_profile(const R2& v, double alpha, const std::vector<double>& t_grid) {
  if (v.squaredNorm() == 0) throw std::invalid_argument("ray_profile: v must be nonzero");
  RayProfile rp;
  const R2 jv = rotation_j() * v;
  for (double t : t_grid) {
    rp.t.push_back(t);
    rp.norm.push_back(a_alpha_norm(t * jv, v, alpha));
  }
  rp.fit = loglog_fit(rp.t, rp.norm);
  return rp;
}

Report naive_rollup_demo(const std::vector<double>& ladder, const std::vector<double>& alphas) {
  if (ladder.size() < 2) throw std::invalid_argument("naive_rollup_demo: ladder needs 2 levels");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (!(ladder[i] > ladder[i - 1])) throw std::invalid_argument("naive_rollup_demo: ladder must increase");
  Report rep("rumin.naive", "[D^R, a](1 + (D^R)^2)^{-1/2+alpha}");
  rep.set_ladder(ladder);
  // A(R xi, R v) = R A(xi, v) R^T, so xi can stay on the positive axis.
  constexpr int kAngles = 128;
  for (double alpha : alphas) {
    std::vector<double> sups;
    auto& s = rep.series("alpha=" + std::to_string(alpha));
    s.columns = {"T", "sup"};
    for (double big_t : ladder) {
      double best = 0;
      for (double r : log_grid(1e-2, big_t, 400))
        for (int k = 0; k < kAngles; ++k) {
          double phi = M_PI * k / kAngles;
          best = std::max(best, a_alpha_norm(R2(r, 0), R2(std::cos(phi), std::sin(phi)), alpha));
        }
      sups.push_back(best);
      s.rows.push_back({big_t, best});
    }
    Fit f = loglog_fit(ladder, sups, true);
    rep.add_fit("alpha=" + std::to_string(alpha), f);
    if (alpha <= 0)
      rep.check_le("bounded.alpha=" + std::to_string(alpha), f.slope, 0.05);
    else
      rep.check_le("slope.alpha=" + std::to_string(alpha), std::abs(f.slope - 2 * alpha), 0.03,
                   Json{{"slope", f.slope}, {"expected", 2 * alpha}});
  }
  return rep;
}

namespace {

Mat lowering(int m) {
  Mat a = Mat::Zero(m, m);
  for (int k = 1; k < m; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

void require_valid(const OscillatorTruncation& tr) {
  if (tr.n < 8) throw std::invalid_argument("oscillator truncation: N must be >= 8");
  if (tr.padding < 0) throw std::invalid_argument("oscillator truncation: negative padding");
  if (tr.lambda == 0) throw std::invalid_argument("oscillator truncation: lambda must be nonzero");
}

}  // namespace

Mat OscillatorTruncation::x() const {
  require_valid(*this);
  Mat a = lowering(size());
  return std::sqrt(std::abs(lambda) / 2) * (a - a.adjoint());
}

Mat OscillatorTruncation::y() const {
  require_valid(*this);
  Mat a = lowering(size());
  const double sg = lambda > 0 ? 1.0 : -1.0;
  return cd(0, sg * std::sqrt(std::abs(lambda) / 2)) * (a + a.adjoint());
}

Mat OscillatorTruncation::z() const {
  require_valid(*this);
  return cd(0, lambda) * identity(size());
}

RuminSymbols rumin_symbol_matrices(const OscillatorTruncation& tr) {
  const int m = tr.size();
  Mat x = tr.x(), y = tr.y(), z = tr.z();
  RuminSymbols s;
  s.d0 = Mat(2 * m, m);
  s.d0 << x, y;
  s.d1 = Mat(2 * m, 2 * m);
  s.d1 << z + x * y, -(x * x), y * y, z - y * x;
  s.d2 = Mat(m, 2 * m);
  s.d2 << y, -x;
  return s;
}

Mat interior(const Mat& m, int padded, int n, int copies_rows, int copies_cols) {
  Mat out(copies_rows * n, copies_cols * n);
  for (int a = 0; a < copies_rows; ++a)
    for (int b = 0; b < copies_cols; ++b)
      out.block(a * n, b * n, n, n) = m.block(a * padded, b * padded, n, n);
  return out;
}

namespace {

struct Laplacians {
  std::vector<Mat> l;  // interior-compressed, degrees 0..3
};

Laplacians interior_laplacians(const OscillatorTruncation& tr) {
  RuminSymbols s = rumin_symbol_matrices(tr);
  const int m = tr.size(), n = tr.n;
  Mat a0 = s.d0.adjoint() * s.d0;
  Mat b0 = s.d0 * s.d0.adjoint();
  Mat a2 = s.d2.adjoint() * s.d2;
  Mat b2 = s.d2 * s.d2.adjoint();
  Laplacians out;
  out.l.push_back(interior(a0 * a0, m, n, 1, 1));
  out.l.push_back(interior(b0 * b0 + s.d1.adjoint() * s.d1, m, n, 2, 2));
  out.l.push_back(interior(s.d1 * s.d1.adjoint() + a2 * a2, m, n, 2, 2));
  out.l.push_back(interior(b2 * b2, m, n, 1, 1));
  return out;
}

int kernel_count(const Mat& l, double rel) {
  RVec ev = eigh(l).values;
  const double thr = rel * std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  int k = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < thr) ++k;
  return k;
}

}  // namespace

Report rockland_check(const OscillatorTruncation& tr) {
  require_valid(tr);
  Report rep("rumin.rockland", "(Z + XY, -X^2; Y^2, Z - YX)");
  const int m = tr.size(), n = tr.n;
  RuminSymbols s = rumin_symbol_matrices(tr);
  double r1 = max_abs(interior(s.d1 * s.d0, m, n, 2, 1));
  double r2 = max_abs(interior(s.d2 * s.d1, m, n, 1, 2));
  rep.check_le("composition.d1d0", r1, 1e-10);
  rep.check_le("composition.d2d1", r2, 1e-10);

  double sv0 = std::sqrt(std::max(0.0, min_eigenvalue(interior(s.d0.adjoint() * s.d0, m, n, 1, 1))));
  rep.data()["smallest_singular_d0"] = sv0;
  {
    RVec ev = eigh(interior(s.d1.adjoint() * s.d1, m, n, 2, 2)).values;
    double thr = 1e-6 * ev(ev.size() - 1);
    double smallest = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > thr) {
        smallest = std::sqrt(ev(i));
        break;
      }
    rep.data()["smallest_singular_d1_off_kernel"] = smallest;
  }

  Laplacians lap = interior_laplacians(tr);
  Json dims = Json::array();
  for (std::size_t k = 0; k < lap.l.size(); ++k) {
    int c = kernel_count(lap.l[k], 1e-6);
    dims.push_back(c);
    rep.check_le("cohomology.H" + std::to_string(k), c, 0);
  }
  rep.data()["cohomology_dims"] = dims;

  OscillatorTruncation bare = tr;
  bare.padding = 0;
  Laplacians raw = interior_laplacians(bare);
  double diff = 0;
  Json raw_dims = Json::array();
  for (std::size_t k = 0; k < lap.l.size(); ++k) {
    diff = std::max(diff, max_abs(lap.l[k] - raw.l[k]) / std::max(1.0, max_abs(lap.l[k])));
    raw_dims.push_back(kernel_count(raw.l[k], 1e-6));
  }
  rep.data()["boundary_effect"] = diff;
  rep.data()["unpadded_cohomology_dims"] = raw_dims;
  rep.data()["lambda"] = tr.lambda;
  rep.data()["n"] = tr.n;
  rep.data()["padding"] = tr.padding;
  return rep;
}

}  // namespace st2
