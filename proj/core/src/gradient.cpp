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

#include "ssdrbm/gradient.hpp"

#include <cmath>
#include <string>

#include "enumerate.hpp"
#include "ssdrbm/errors.hpp"

namespace ssdrbm {
namespace {

bool needs_second_moment(const RbmParams& p) {
  return p.cov_kind() == CovarianceKind::full && p.is_gaussian();
}

void require_shapes(const RbmParams& p, const PhaseStats& s, const char* which) {
  const Index nv = p.n_visible();
  const Index nh = p.n_hidden();
  const bool ok = s.vh.rows() == nv && s.vh.cols() == nh && s.v.size() == nv &&
                  s.h.size() == nh && s.v_sq.size() == nv &&
                  (!needs_second_moment(p) ||
                   (s.vv.rows() == nv && s.vv.cols() == nv));
  if (!ok) {
    throw DimensionError(std::string("estimate_gradients: ") + which +
                         " statistics do not match the model shape");
  }
}

Matrix sigmoid_rows(const Matrix& x) {
  return x.unaryExpr([](double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
  });
}

// Per-coordinate d L / d C^{-1}_jj from statistic differences.
Vector diagonal_term(const RbmParams& p, const Matrix& d_vh, const Vector& d_v,
                     const Vector& d_vsq) {
  const Vector v_wh = (d_vh.array() * p.W.array()).rowwise().sum();
  return v_wh.array() - 0.5 * (d_vsq.array() - 2.0 * p.b.array() * d_v.array());
}

}  // namespace

PhaseStats summarize(const RbmParams& params, const PhaseSamples& samples) {
  const Matrix& V = samples.visible;
  const Matrix& H = samples.hidden_probs;
  if (V.rows() < 1 || V.rows() != H.rows() || V.cols() != params.n_visible() ||
      H.cols() != params.n_hidden()) {
    throw DimensionError("summarize: phase samples do not match the model");
  }
  const double inv = 1.0 / static_cast<double>(V.rows());
  PhaseStats s;
  s.vh = inv * (V.transpose() * H);
  s.v = inv * V.colwise().sum().transpose();
  s.h = inv * H.colwise().sum().transpose();
  s.v_sq = inv * V.array().square().colwise().sum().transpose();
  if (needs_second_moment(params)) s.vv = inv * (V.transpose() * V);
  return s;
}

PhaseStats exact_model_stats(const RbmParams& params) {
  params.validate();
  detail::EnumerationWeights weights(params);
  detail::require_enumerable(weights.units(), "exact_model_stats");

  detail::LogSumExp lse;
  detail::for_each_binary_block(weights.units(), [&](const Matrix& block) {
    lse.add(weights.log_weights(block));
  });
  const double log_z = lse.value();

  const Index nv = params.n_visible();
  const Index nh = params.n_hidden();
  PhaseStats s{Matrix::Zero(nv, nh), Vector::Zero(nv), Vector::Zero(nh),
               Vector::Zero(nv), Matrix()};
  const bool second = needs_second_moment(params);
  if (second) s.vv = Matrix::Zero(nv, nv);

  const bool gaussian = params.is_gaussian();
  const bool over_hidden =
      gaussian || detail::bernoulli_enumerates_hidden(params);

  detail::for_each_binary_block(weights.units(), [&](const Matrix& block) {
    const Vector pi = (weights.log_weights(block).array() - log_z).exp();
    Matrix visible;  // E[v | config] or the visible configuration itself
    Matrix hidden;   // hidden configuration or E[h | v]
    if (over_hidden) {
      hidden = block;
      visible = visible_means(params, block);
    } else {
      visible = block;
      hidden = sigmoid_rows(
          (block * params.W).rowwise() + params.a.transpose());
    }
    const Matrix weighted_v = pi.asDiagonal() * visible;
    s.vh += weighted_v.transpose() * hidden;
    s.v += weighted_v.colwise().sum().transpose();
    s.h += (pi.asDiagonal() * hidden).colwise().sum().transpose();
    s.v_sq += (weighted_v.array() * visible.array())
                  .colwise()
                  .sum()
                  .transpose()
                  .matrix();
    if (second) s.vv += weighted_v.transpose() * visible;
  });

  if (gaussian) {
    // Conditional Gaussian v | h ~ N(b + W h, C) adds C to the second moment.
    const Matrix cov = params.cov->covariance_matrix();
    s.v_sq += cov.diagonal();
    if (second) s.vv += cov;
  } else {
    s.v_sq = s.v;  // binary units
  }
  return s;
}

GradientSet zeros_like(const RbmParams& params) {
  GradientSet g{Matrix::Zero(params.n_visible(), params.n_hidden()),
                Vector::Zero(params.n_visible()),
                Vector::Zero(params.n_hidden()), Matrix()};
  if (params.is_gaussian()) {
    switch (params.cov_kind()) {
      case CovarianceKind::identity:
        break;
      case CovarianceKind::isotropic:
        g.dcov = Matrix::Zero(1, 1);
        break;
      case CovarianceKind::diagonal_log:
        g.dcov = Matrix::Zero(params.n_visible(), 1);
        break;
      case CovarianceKind::full:
        g.dcov = Matrix::Zero(params.n_visible(), params.n_visible());
        break;
    }
  }
  return g;
}

Vector diagonal_precision_gradient(const RbmParams& params,
                                   const PhaseStats& positive,
                                   const PhaseStats& negative) {
  if (!params.is_gaussian()) {
    throw PreconditionError("diagonal_precision_gradient: gaussian model only");
  }
  require_shapes(params, positive, "positive");
  require_shapes(params, negative, "negative");
  return diagonal_term(params, negative.vh - positive.vh,
                       negative.v - positive.v,
                       negative.v_sq - positive.v_sq);
}

GradientSet estimate_gradients(const RbmParams& params,
                               const PhaseStats& positive,
                               const PhaseStats& negative) {
  require_shapes(params, positive, "positive");
  require_shapes(params, negative, "negative");

  const Matrix d_vh = negative.vh - positive.vh;
  const Vector d_v = negative.v - positive.v;

  GradientSet g;
  g.da = negative.h - positive.h;
  if (!params.is_gaussian()) {
    g.dW = d_vh;
    g.db = d_v;
    return g;
  }

  const CovarianceModel& cov = *params.cov;
  g.dW = cov.apply_precision(d_vh);
  g.db = cov.apply_precision(d_v);

  switch (cov.kind()) {
    case CovarianceKind::identity:
      break;
    case CovarianceKind::isotropic: {
      const Vector diag =
          diagonal_term(params, d_vh, d_v, negative.v_sq - positive.v_sq);
      g.dcov = Matrix::Constant(1, 1, diag.sum());
      break;
    }
    case CovarianceKind::diagonal_log: {
      const Vector diag =
          diagonal_term(params, d_vh, d_v, negative.v_sq - positive.v_sq);
      g.dcov = diag.cwiseProduct(cov.precision_diagonal());
      break;
    }
    case CovarianceKind::full: {
      // E[v (W h)^T - (v - b)(v - b)^T / 2]; the b b^T part cancels.
      const Matrix d_vv = negative.vv - positive.vv;
      const Matrix d_vb = d_v * params.b.transpose();
      Matrix full = d_vh * params.W.transpose() -
                    0.5 * (d_vv - d_vb - d_vb.transpose());
      g.dcov = 0.5 * (full + full.transpose());
      break;
    }
  }
  return g;
}

GradientSet estimate_gradients(const RbmParams& params,
                               const PhaseSamples& positive,
                               const PhaseSamples& negative) {
  return estimate_gradients(params, summarize(params, positive),
                            summarize(params, negative));
}

GradientSet exact_gradients(const RbmParams& params, const DataBatch& dataset) {
  validate_batch(params, dataset);
  const PhaseStats data =
      summarize(params, PhaseSamples{dataset, hidden_probs(params, dataset)});
  return estimate_gradients(params, data, exact_model_stats(params));
}

}  // namespace ssdrbm
