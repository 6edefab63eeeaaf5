// Copyright 2026 The ssdrbm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Central finite differences of exact_loss, the reference for every analytic
// gradient.

#ifndef SSDRBM_TESTS_COMMON_FD_ORACLE_HPP
#define SSDRBM_TESTS_COMMON_FD_ORACLE_HPP

#include <algorithm>
#include <functional>

#include "ssdrbm/gradient.hpp"
#include "ssdrbm/model.hpp"

namespace ssdrbm::testing {

struct FdComparison {
  double w = 0.0;
  double b = 0.0;
  double a = 0.0;
  double cov = 0.0;
  double worst() const { return std::max({w, b, a, cov}); }
};

inline double central_difference(const std::function<double(double)>& f,
                                  double step) {
  return (f(step) - f(-step)) / (2.0 * step);
}

inline double relative_error(const Matrix& fd, const Matrix& analytic) {
  if (fd.size() == 0) return 0.0;
  return (fd - analytic).norm() / std::max(analytic.norm(), 1e-8);
}

// Covariance model with payload entry `index` moved by `delta`. For the full
// kind, index = i * n + j moves (i, j) and (j, i) together.
inline CovarianceModel shifted_cov(const CovarianceModel& c, Index index,
                                   double delta) {
  switch (c.kind()) {
    case CovarianceKind::identity:
      return c;
    case CovarianceKind::isotropic:
      return CovarianceModel::isotropic(c.dim(), c.isotropic_precision() + delta);
    case CovarianceKind::diagonal_log: {
      Vector logs = c.log_precision();
      logs(index) += delta;
      return CovarianceModel::diagonal_log(std::move(logs));
    }
    case CovarianceKind::full: {
      Matrix p = c.full_precision();
      const Index i = index / c.dim();
      const Index j = index % c.dim();
      p(i, j) += delta;
      if (i != j) p(j, i) += delta;
      return CovarianceModel::full(std::move(p));
    }
  }
  return c;
}

/// Compares exact_gradients against central differences of exact_loss with
/// the given step, returning the relative error of each block.
inline FdComparison compare_with_finite_differences(const RbmParams& params,
                                                    const DataBatch& data,
                                                    double step) {
  const GradientSet g = exact_gradients(params, data);
  auto loss = [&](const RbmParams& p) { return exact_loss(p, data); };
  FdComparison out;

  Matrix fd_w(params.n_visible(), params.n_hidden());
  for (Index i = 0; i < fd_w.rows(); ++i) {
    for (Index j = 0; j < fd_w.cols(); ++j) {
      fd_w(i, j) = central_difference(
          [&](double d) {
            RbmParams p = params;
            p.W(i, j) += d;
            return loss(p);
          },
          step);
    }
  }
  out.w = relative_error(fd_w, g.dW);

  Vector fd_b(params.n_visible());
  for (Index i = 0; i < fd_b.size(); ++i) {
    fd_b(i) = central_difference(
        [&](double d) {
          RbmParams p = params;
          p.b(i) += d;
          return loss(p);
        },
        step);
  }
  out.b = relative_error(fd_b, g.db);

  Vector fd_a(params.n_hidden());
  for (Index k = 0; k < fd_a.size(); ++k) {
    fd_a(k) = central_difference(
        [&](double d) {
          RbmParams p = params;
          p.a(k) += d;
          return loss(p);
        },
        step);
  }
  out.a = relative_error(fd_a, g.da);

  if (params.is_gaussian() && g.has_cov()) {
    const CovarianceModel& c = *params.cov;
    Matrix fd(g.dcov.rows(), g.dcov.cols());
    Matrix expect = g.dcov;
    for (Index i = 0; i < fd.rows(); ++i) {
      for (Index j = 0; j < fd.cols(); ++j) {
        const Index index = c.kind() == CovarianceKind::full
                                ? i * c.dim() + j
                                : i;
        fd(i, j) = central_difference(
            [&](double d) {
              RbmParams p = params;
              p.cov = shifted_cov(c, index, d);
              return loss(p);
            },
            step);
        // Moving (i, j) and (j, i) together picks up both symmetric entries.
        if (c.kind() == CovarianceKind::full && i != j) expect(i, j) *= 2.0;
      }
    }
    out.cov = relative_error(fd, expect);
  }
  return out;
}

}  // namespace ssdrbm::testing

#endif  // SSDRBM_TESTS_COMMON_FD_ORACLE_HPP
