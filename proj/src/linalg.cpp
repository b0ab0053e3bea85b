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

#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace st2 {

bool is_hermitian(const Mat& h, double tol) {
  if (h.rows() != h.cols()) return false;
  if (h.size() == 0) return true;
  double scale = std::max(max_abs(h), 1e-300);
  double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
  return dev <= tol * static_cast<double>(h.rows()) * scale || dev == 0;
}

void require_hermitian(const Mat& h, const std::string& what) {
  if (h.rows() != h.cols())
    throw std::invalid_argument(what + ": matrix is not square");
  if (!is_hermitian(h))
    throw std::invalid_argument(what + ": matrix is not Hermitian");
}

Eigh eigh(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Hermitian eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double kernel_threshold(const RVec& ev) {
  if (ev.size() == 0) return 0;
  return kKernelRel * ev.cwiseAbs().maxCoeff();
}

Mat hfunc(const Eigh& e, const std::function<double(double)>& f) {
  const Eigen::Index n = e.values.size();
  RVec fv(n);
  for (Eigen::Index i = 0; i < n; ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.cast<cd>().asDiagonal() * e.vectors.adjoint();
}

Mat hfunc(const Mat& h, const std::function<double(double)>& f) {
  return hfunc(eigh(h), f);
}

Mat hfunc_c(const Eigh& e, const std::function<cd(double)>& f) {
  const Eigen::Index n = e.values.size();
  Vec fv(n);
  for (Eigen::Index i = 0; i < n; ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }
Mat anticommutator(const Mat& a, const Mat& b) { return a * b + b * a; }

RVec singular_values(const Mat& a) {
  if (a.size() == 0) return RVec();
  Eigen::BDCSVD<Mat> svd(a);
  return svd.singularValues();
}

double opnorm(const Mat& a) {
  if (a.size() == 0) return 0;
  return singular_values(a)(0);
}

double max_abs(const Mat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

Mat identity(Eigen::Index n) { return Mat::Identity(n, n); }

double min_eigenvalue(const Mat& h) {
  if (h.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fit: need at least two points");
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit: degenerate abscissae");
  Fit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = static_cast<int>(n);
  if (n > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    f.stderr_slope = std::sqrt(rss / (n - 2) / sxx);
  }
  return f;
}

Fit loglog_fit(const std::vector<double>& x, const std::vector<double>& y,
               bool upper_half) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    if (x[i] > 0 && y[i] > 0) pts.emplace_back(std::log(x[i]), std::log(y[i]));
  std::sort(pts.begin(), pts.end());
  if (upper_half && pts.size() >= 4) pts.erase(pts.begin(), pts.begin() + pts.size() / 2);
  std::vector<double> lx, ly;
  for (auto& p : pts) {
    lx.push_back(p.first);
    ly.push_back(p.second);
  }
  return linear_fit(lx, ly);
}

}  // namespace st2
