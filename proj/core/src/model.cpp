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

#include "ssdrbm/model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

#include "enumerate.hpp"
#include "ssdrbm/errors.hpp"
#include "ssdrbm/sampler.hpp"

namespace ssdrbm {
namespace {

std::string shape(Index r, Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_dim(Index got, Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected length " +
                         std::to_string(want) + ", got " +
                         std::to_string(got));
  }
}

Matrix sigmoid(const Matrix& x) {
  return x.unaryExpr([](double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
  });
}

Matrix add_row(Matrix m, const Vector& row) {
  m.rowwise() += row.transpose();
  return m;
}

}  // namespace

const char* to_string(Family f) {
  return f == Family::bernoulli ? "bernoulli" : "gaussian";
}

const char* to_string(CovarianceKind k) {
  switch (k) {
    case CovarianceKind::identity:
      return "identity";
    case CovarianceKind::isotropic:
      return "isotropic";
    case CovarianceKind::diagonal_log:
      return "diagonal_log";
    case CovarianceKind::full:
      return "full";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// CovarianceModel

CovarianceModel CovarianceModel::identity(Index n_visible) {
  if (n_visible < 1) throw DimensionError("covariance: n_visible must be >= 1");
  return CovarianceModel(CovarianceKind::identity, n_visible);
}

CovarianceModel CovarianceModel::isotropic(Index n_visible, double precision) {
  if (n_visible < 1) throw DimensionError("covariance: n_visible must be >= 1");
  if (!(precision > 0.0) || !std::isfinite(precision)) {
    throw PreconditionError("isotropic precision must be finite and > 0");
  }
  CovarianceModel c(CovarianceKind::isotropic, n_visible);
  c.scalar_ = precision;
  return c;
}

CovarianceModel CovarianceModel::diagonal_log(Vector log_precision) {
  if (log_precision.size() < 1) {
    throw DimensionError("covariance: n_visible must be >= 1");
  }
  require_finite(log_precision, "diagonal_log precision");
  CovarianceModel c(CovarianceKind::diagonal_log, log_precision.size());
  c.log_precision_ = std::move(log_precision);
  return c;
}

CovarianceModel CovarianceModel::full(Matrix precision) {
  if (precision.rows() < 1 || precision.rows() != precision.cols()) {
    throw DimensionError("full precision must be square, got " +
                         shape(precision.rows(), precision.cols()));
  }
  require_finite(precision, "full precision");
  const double asym = (precision - precision.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, precision.cwiseAbs().maxCoeff())) {
    throw PreconditionError("full precision is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(precision, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0)) {
    throw PreconditionError("full precision is not positive definite");
  }
  CovarianceModel c(CovarianceKind::full, precision.rows());
  c.full_ = std::move(precision);
  return c;
}

Vector CovarianceModel::precision_diagonal() const {
  switch (kind_) {
    case CovarianceKind::identity:
      return Vector::Ones(dim_);
    case CovarianceKind::isotropic:
      return Vector::Constant(dim_, scalar_);
    case CovarianceKind::diagonal_log:
      return log_precision_.array().exp();
    case CovarianceKind::full:
      return full_.diagonal();
  }
  return {};
}

Matrix CovarianceModel::precision_matrix() const {
  if (kind_ == CovarianceKind::full) return full_;
  return precision_diagonal().asDiagonal();
}

Matrix CovarianceModel::covariance_matrix() const {
  if (kind_ == CovarianceKind::full) {
    return full_.llt().solve(Matrix::Identity(dim_, dim_));
  }
  return precision_diagonal().cwiseInverse().asDiagonal();
}

Matrix CovarianceModel::apply_precision(const Matrix& x) const {
  require_dim(x.rows(), dim_, "apply_precision");
  switch (kind_) {
    case CovarianceKind::identity:
      return x;
    case CovarianceKind::isotropic:
      return scalar_ * x;
    case CovarianceKind::diagonal_log:
      return log_precision_.array().exp().matrix().asDiagonal() * x;
    case CovarianceKind::full:
      return full_ * x;
  }
  return x;
}

double CovarianceModel::log_det_precision() const {
  switch (kind_) {
    case CovarianceKind::identity:
      return 0.0;
    case CovarianceKind::isotropic:
      return static_cast<double>(dim_) * std::log(scalar_);
    case CovarianceKind::diagonal_log:
      return log_precision_.sum();
    case CovarianceKind::full: {
      Eigen::LLT<Matrix> llt(full_);
      if (llt.info() != Eigen::Success) {
        throw NumericalError("log_det_precision: Cholesky failed");
      }
      return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    }
  }
  return 0.0;
}

Index CovarianceModel::payload_size() const {
  switch (kind_) {
    case CovarianceKind::identity:
      return 0;
    case CovarianceKind::isotropic:
      return 1;
    case CovarianceKind::diagonal_log:
      return dim_;
    case CovarianceKind::full:
      return dim_ * dim_;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// RbmParams

RbmParams RbmParams::bernoulli(Matrix W, Vector b, Vector a) {
  RbmParams p{Family::bernoulli, std::move(W), std::move(b), std::move(a),
              std::nullopt};
  p.validate();
  return p;
}

RbmParams RbmParams::gaussian(Matrix W, Vector b, Vector a,
                              CovarianceModel cov) {
  RbmParams p{Family::gaussian, std::move(W), std::move(b), std::move(a),
              std::move(cov)};
  p.validate();
  return p;
}

RbmParams RbmParams::zeros(Family family, Index n_visible, Index n_hidden,
                           CovarianceKind kind) {
  Matrix W = Matrix::Zero(n_visible, n_hidden);
  Vector b = Vector::Zero(n_visible);
  Vector a = Vector::Zero(n_hidden);
  if (family == Family::bernoulli) return bernoulli(W, b, a);
  switch (kind) {
    case CovarianceKind::identity:
      return gaussian(W, b, a, CovarianceModel::identity(n_visible));
    case CovarianceKind::isotropic:
      return gaussian(W, b, a, CovarianceModel::isotropic(n_visible, 1.0));
    case CovarianceKind::diagonal_log:
      return gaussian(W, b, a,
                      CovarianceModel::diagonal_log(Vector::Zero(n_visible)));
    case CovarianceKind::full:
      return gaussian(W, b, a,
                      CovarianceModel::full(Matrix::Identity(n_visible,
                                                             n_visible)));
  }
  return bernoulli(W, b, a);
}

CovarianceKind RbmParams::cov_kind() const {
  return cov ? cov->kind() : CovarianceKind::identity;
}

void RbmParams::validate() const {
  if (W.rows() < 1 || W.cols() < 1) {
    throw DimensionError("W must be at least 1x1, got " +
                         shape(W.rows(), W.cols()));
  }
  require_dim(b.size(), W.rows(), "visible bias b");
  require_dim(a.size(), W.cols(), "hidden bias a");
  require_finite(W, "W");
  require_finite(b, "b");
  require_finite(a, "a");
  if (family == Family::bernoulli) {
    if (cov) throw PreconditionError("bernoulli model carries no covariance");
  } else {
    if (!cov) throw PreconditionError("gaussian model requires a covariance");
    require_dim(cov->dim(), W.rows(), "covariance");
  }
}

void validate_batch(const RbmParams& params, const DataBatch& batch) {
  if (batch.rows() < 1) throw DimensionError("batch is empty");
  require_dim(batch.cols(), params.n_visible(), "batch visible vectors");
  require_finite(batch, "batch");
  if (params.family == Family::bernoulli) {
    const bool binary =
        (batch.array() == 0.0 || batch.array() == 1.0).all();
    if (!binary) {
      throw PreconditionError("bernoulli batch entries must be 0 or 1");
    }
  }
}

// ---------------------------------------------------------------------------
// Energies and conditionals

double energy(const RbmParams& params, const Vector& v, const Vector& h) {
  require_dim(v.size(), params.n_visible(), "energy: v");
  require_dim(h.size(), params.n_hidden(), "energy: h");
  if (params.family == Family::bernoulli) {
    return -v.dot(params.W * h) - v.dot(params.b) - h.dot(params.a);
  }
  const Vector d = v - params.b;
  const Vector pd = params.cov->apply_precision(d);
  const Vector pwh = params.cov->apply_precision(params.W * h);
  return -v.dot(pwh) + 0.5 * d.dot(pd) - h.dot(params.a);
}

Matrix coupling(const RbmParams& params) {
  if (params.family == Family::bernoulli) return params.W;
  return params.cov->apply_precision(params.W);
}

Matrix hidden_probs(const RbmParams& params, const DataBatch& visible) {
  require_dim(visible.cols(), params.n_visible(), "hidden_probs: visible");
  return sigmoid(add_row(visible * coupling(params), params.a));
}

Vector hidden_probs(const RbmParams& params, const Vector& v) {
  require_dim(v.size(), params.n_visible(), "hidden_probs: v");
  return hidden_probs(params, Matrix(v.transpose())).row(0).transpose();
}

Matrix visible_means(const RbmParams& params, const Matrix& hidden) {
  require_dim(hidden.cols(), params.n_hidden(), "visible_means: hidden");
  Matrix pre = add_row(hidden * params.W.transpose(), params.b);
  if (params.family == Family::bernoulli) return sigmoid(pre);
  return pre;
}

VisibleConditional visible_conditional(const RbmParams& params,
                                       const Vector& h) {
  require_dim(h.size(), params.n_hidden(), "visible_conditional: h");
  VisibleConditional out;
  out.mean = visible_means(params, Matrix(h.transpose())).row(0).transpose();
  out.cov = params.cov;
  return out;
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double neg_data_term(const RbmParams& params, const DataBatch& batch) {
  if (batch.rows() < 1) throw DimensionError("neg_data_term: empty batch");
  require_dim(batch.cols(), params.n_visible(), "neg_data_term: batch");
  const Matrix pre = add_row(batch * coupling(params), params.a);
  const double soft = pre.unaryExpr([](double t) { return softplus(t); }).sum();
  double visible_term = 0.0;
  if (params.family == Family::bernoulli) {
    visible_term = -(batch * params.b).sum();
  } else {
    Matrix centered = batch;
    centered.rowwise() -= params.b.transpose();
    const Matrix pc = params.cov->apply_precision(centered.transpose());
    visible_term = 0.5 * (centered.transpose().array() * pc.array()).sum();
  }
  return (visible_term - soft) / static_cast<double>(batch.rows());
}

// ---------------------------------------------------------------------------
// Exact oracles

namespace detail {

EnumerationWeights::EnumerationWeights(const RbmParams& p) : p_(p) {
  if (p.family == Family::gaussian) {
    over_hidden_ = true;
    units_ = p.n_hidden();
    const Matrix pw = p.cov->apply_precision(p.W);
    linear_ = pw.transpose() * p.b;
    quadratic_ = p.W.transpose() * pw;
    constant_ = 0.5 * static_cast<double>(p.n_visible()) *
                    std::log(2.0 * std::numbers::pi) -
                0.5 * p.cov->log_det_precision();
  } else {
    over_hidden_ = bernoulli_enumerates_hidden(p);
    units_ = over_hidden_ ? p.n_hidden() : p.n_visible();
  }
}

Vector EnumerationWeights::log_weights(const Matrix& configs) const {
  if (p_.family == Family::gaussian) {
    const Vector quad =
        ((configs * quadratic_).array() * configs.array()).rowwise().sum();
    return (configs * (p_.a + linear_)).array() + 0.5 * quad.array() +
           constant_;
  }
  // Bernoulli: sum over the non-enumerated layer is a product of (1 + e^x).
  Matrix other;
  Vector own;
  if (over_hidden_) {
    other = add_row(configs * p_.W.transpose(), p_.b);
    own = configs * p_.a;
  } else {
    other = add_row(configs * p_.W, p_.a);
    own = configs * p_.b;
  }
  const Vector soft =
      other.unaryExpr([](double t) { return softplus(t); }).rowwise().sum();
  return own + soft;
}

}  // namespace detail

double exact_log_partition(const RbmParams& params) {
  params.validate();
  detail::EnumerationWeights weights(params);
  detail::require_enumerable(weights.units(), "exact_log_partition");
  detail::LogSumExp acc;
  detail::for_each_binary_block(weights.units(), [&](const Matrix& block) {
    acc.add(weights.log_weights(block));
  });
  return acc.value();
}

double exact_loss(const RbmParams& params, const DataBatch& dataset) {
  return exact_log_partition(params) + neg_data_term(params, dataset);
}

double reconstruction_sse(const RbmParams& params, const DataBatch& batch,
                          RngStream& rng) {
  if (batch.rows() < 1) throw DimensionError("reconstruction_sse: empty batch");
  const Matrix h = sample_hidden(params, batch, rng);
  const Matrix recon = visible_means(params, h);
  return (batch - recon).squaredNorm() / static_cast<double>(batch.rows());
}

}  // namespace ssdrbm
