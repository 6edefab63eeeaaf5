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

#include "ssdrbm/verify.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "ssdrbm/errors.hpp"
#include "ssdrbm/linalg.hpp"
#include "ssdrbm/optimizer.hpp"

namespace ssdrbm {

void BoundReport::record(double lhs, double rhs) {
  const double slack = rhs - lhs;
  if (trials == 0) {
    max_slack = min_slack = slack;
  } else {
    max_slack = std::max(max_slack, slack);
    min_slack = std::min(min_slack, slack);
  }
  ++trials;
  if (!(lhs <= rhs + kBoundTolerance * std::abs(rhs))) ++violations;
}

void BoundReport::record_identity(double lhs, double rhs, double tolerance) {
  const double diff = std::abs(lhs - rhs);
  const double slack = -diff;
  if (trials == 0) {
    max_slack = min_slack = slack;
  } else {
    max_slack = std::max(max_slack, slack);
    min_slack = std::min(min_slack, slack);
  }
  ++trials;
  if (!(diff <= tolerance * std::max(1.0, std::abs(rhs)))) ++violations;
}

void BoundReport::merge(const BoundReport& other) {
  if (other.trials == 0) return;
  if (trials == 0) {
    max_slack = other.max_slack;
    min_slack = other.min_slack;
  } else {
    max_slack = std::max(max_slack, other.max_slack);
    min_slack = std::min(min_slack, other.min_slack);
  }
  trials += other.trials;
  violations += other.violations;
}

namespace {

void require_weights(const Vector& w, const Vector& x) {
  if (w.size() == 0 || w.size() != x.size()) {
    throw DimensionError("lse: weights and x must be non-empty and equal size");
  }
  if ((w.array() <= 0.0).any()) {
    throw PreconditionError("lse: weights must be positive");
  }
}

// log sum_i exp(y_i) together with the softmax weights.
double log_sum_exp(const Vector& y, Vector* softmax) {
  const double m = y.maxCoeff();
  const Vector e = (y.array() - m).exp();
  const double s = e.sum();
  if (softmax != nullptr) *softmax = e / s;
  return m + std::log(s);
}

Vector lse_arg(const Vector& w, const Vector& x) {
  return x.array() + w.array().log();
}

Vector lse2_arg(const Vector& w, const Vector& x) {
  return 0.5 * x.array().square() + w.array().log();
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double inner(const Matrix& x, const Matrix& y) {
  return (x.array() * y.array()).sum();
}

double lambda_max(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double lambda_min(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void require_gaussian(const RbmParams& params, const char* what) {
  params.validate();
  if (!params.is_gaussian()) {
    throw PreconditionError(std::string(what) + ": model must be gaussian");
  }
}

void require_shape(const Matrix& m, Index rows, Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(std::string(what) + ": perturbation has shape " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void require_psd(const Matrix& u, const char* what) {
  const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
  if ((u - u.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw PreconditionError(std::string(what) + ": U must be symmetric");
  }
  if (lambda_min(symmetrize(u)) < -1e-12 * scale) {
    throw PreconditionError(std::string(what) + ": U must be PSD");
  }
}

double perturbation_norm(ParamBlock block, const Matrix& p) {
  if (block == ParamBlock::a || block == ParamBlock::b) {
    return p.cwiseAbs().maxCoeff();
  }
  return p.size() == 0 ? 0.0 : spectral_norm(p);
}

RbmParams perturbed(const RbmParams& params, ParamBlock block,
                    const Matrix& p) {
  RbmParams out = params;
  switch (block) {
    case ParamBlock::a:
      out.a += p.col(0);
      break;
    case ParamBlock::b:
      out.b += p.col(0);
      break;
    case ParamBlock::W:
      out.W += p;
      break;
    case ParamBlock::cov:
      out.cov = CovarianceModel::full(
          symmetrize(params.cov->full_precision() + p));
      break;
  }
  return out;
}

void check_block_shape(const RbmParams& params, ParamBlock block,
                       const Matrix& p, const char* what) {
  switch (block) {
    case ParamBlock::a:
      require_shape(p, params.n_hidden(), 1, what);
      break;
    case ParamBlock::b:
      require_shape(p, params.n_visible(), 1, what);
      break;
    case ParamBlock::W:
      require_shape(p, params.n_visible(), params.n_hidden(), what);
      break;
    case ParamBlock::cov:
      if (params.cov_kind() != CovarianceKind::full) {
        throw PreconditionError(std::string(what) +
                                ": covariance block needs a full precision");
      }
      require_shape(p, params.n_visible(), params.n_visible(), what);
      require_psd(p, what);
      break;
  }
}

// Gradient of g = neg_data_term for one block.
Matrix data_term_gradient(const RbmParams& params, ParamBlock block,
                          const DataBatch& data) {
  const double n = static_cast<double>(data.rows());
  const Matrix h = hidden_probs(params, data);
  const Matrix vh = data.transpose() * h / n;
  const Vector v_mean = data.colwise().mean().transpose();
  switch (block) {
    case ParamBlock::a:
      return -h.colwise().mean().transpose();
    case ParamBlock::W:
      return params.is_gaussian() ? Matrix(-params.cov->apply_precision(vh))
                                  : Matrix(-vh);
    case ParamBlock::b:
      return params.is_gaussian()
                 ? Matrix(-params.cov->apply_precision(v_mean - params.b))
                 : Matrix(-v_mean);
    case ParamBlock::cov: {
      const Matrix centred = data.rowwise() - params.b.transpose();
      const Matrix second = centred.transpose() * centred / n;
      return -symmetrize(vh * params.W.transpose() - 0.5 * second);
    }
  }
  return Matrix();
}

}  // namespace

double lse(const Vector& weights, const Vector& x) {
  require_weights(weights, x);
  return log_sum_exp(lse_arg(weights, x), nullptr);
}

double lse2(const Vector& weights, const Vector& x) {
  require_weights(weights, x);
  return log_sum_exp(lse2_arg(weights, x), nullptr);
}

BoundReport check_lse_bound(const Vector& weights, const Vector& x,
                            const Vector& dx) {
  require_weights(weights, x);
  if (dx.size() != x.size()) throw DimensionError("check_lse_bound: dx size");
  Vector pi;
  const double base = log_sum_exp(lse_arg(weights, x), &pi);
  const double lhs = log_sum_exp(lse_arg(weights, x + dx), nullptr);
  const double d = dx.size() == 0 ? 0.0 : dx.cwiseAbs().maxCoeff();
  BoundReport r{"lse_quadratic"};
  r.record(lhs, base + pi.dot(dx) + 0.5 * d * d);
  return r;
}

BoundReport check_lse2_bound(const Vector& weights, const Vector& x,
                             const Vector& dx, double radius) {
  require_weights(weights, x);
  if (dx.size() != x.size()) throw DimensionError("check_lse2_bound: dx size");
  const double slackness = 1e-12 * std::max(1.0, radius);
  if (x.norm() > radius + slackness || (x + dx).norm() > radius + slackness) {
    throw PreconditionError("check_lse2_bound: x and x + dx must lie in the " +
                            std::string("radius-r ball"));
  }
  Vector pi;
  const double base = log_sum_exp(lse2_arg(weights, x), &pi);
  const Vector grad = x.cwiseProduct(pi);
  const double lhs = log_sum_exp(lse2_arg(weights, x + dx), nullptr);
  const double d = dx.cwiseAbs().maxCoeff();
  BoundReport r{"lse2_quadratic"};
  r.record(lhs,
           base + grad.dot(dx) + (0.5 + 0.75 * radius * radius) * d * d);
  return r;
}

const char* to_string(ParamBlock block) {
  switch (block) {
    case ParamBlock::a:
      return "a";
    case ParamBlock::b:
      return "b";
    case ParamBlock::W:
      return "W";
    case ParamBlock::cov:
      return "cov";
  }
  return "?";
}

double partition_bound_constant(const RbmParams& params, ParamBlock block,
                                double weight_cap) {
  require_gaussian(params, "partition_bound_constant");
  const double nv = static_cast<double>(params.n_visible());
  const double nh = static_cast<double>(params.n_hidden());
  const Matrix precision = params.cov->precision_matrix();
  switch (block) {
    case ParamBlock::a:
      return nh / 2.0;
    case ParamBlock::b:
      return nh * weight_cap * lambda_max(precision) / 2.0;
    case ParamBlock::cov: {
      const double cov_max = 1.0 / lambda_min(precision);
      return nh * nh * weight_cap * weight_cap / 2.0 + nv * nv * cov_max * cov_max;
    }
    case ParamBlock::W: {
      const double r = std::sqrt(lambda_max(precision)) *
                       (weight_cap * std::sqrt(nh) + params.b.norm());
      return (0.5 + 0.75 * r * r) * nv * nh;
    }
  }
  return 0.0;
}

GradientSet partition_gradient(const RbmParams& params) {
  const PhaseStats s = exact_model_stats(params);
  GradientSet g;
  g.da = s.h;
  if (!params.is_gaussian()) {
    g.dW = s.vh;
    g.db = s.v;
    return g;
  }
  const CovarianceModel& cov = *params.cov;
  g.dW = cov.apply_precision(s.vh);
  g.db = cov.apply_precision(s.v - params.b);
  if (cov.kind() == CovarianceKind::full) {
    const Vector& b = params.b;
    g.dcov = symmetrize(s.vh * params.W.transpose()) -
             0.5 * (s.vv - s.v * b.transpose() - b * s.v.transpose() +
                    b * b.transpose());
  }
  return g;
}

BoundReport check_partition_bound(const RbmParams& params, ParamBlock block,
                                  const Matrix& perturbation,
                                  double weight_cap) {
  const char* what = "check_partition_bound";
  require_gaussian(params, what);
  check_block_shape(params, block, perturbation, what);
  if (block == ParamBlock::W || block == ParamBlock::b ||
      block == ParamBlock::cov) {
    const double tol = 1e-12 * std::max(1.0, weight_cap);
    if (spectral_norm(params.W) > weight_cap + tol) {
      throw PreconditionError("check_partition_bound: ||W||_2 exceeds R");
    }
    if (block == ParamBlock::W &&
        spectral_norm(params.W + perturbation) > weight_cap + tol) {
      throw PreconditionError("check_partition_bound: ||W + U||_2 exceeds R");
    }
  }

  const GradientSet grad = partition_gradient(params);
  const Matrix* g = nullptr;
  Matrix vec;
  switch (block) {
    case ParamBlock::a:
      vec = grad.da;
      break;
    case ParamBlock::b:
      vec = grad.db;
      break;
    case ParamBlock::W:
      g = &grad.dW;
      break;
    case ParamBlock::cov:
      g = &grad.dcov;
      break;
  }
  if (g == nullptr) g = &vec;

  const double base = exact_log_partition(params);
  const double lhs = exact_log_partition(perturbed(params, block, perturbation));
  const double d = perturbation_norm(block, perturbation);
  const double k = partition_bound_constant(params, block, weight_cap);

  static const char* ids[] = {"logz_hidden_bias", "logz_visible_bias", "logz_weights", "logz_precision"};
  BoundReport r{ids[static_cast<int>(block)]};
  r.record(lhs, base + inner(*g, perturbation) + k * d * d);
  return r;
}

BoundReport check_g_bounds(const RbmParams& params, ParamBlock block,
                           const Matrix& perturbation,
                           const DataBatch& dataset) {
  const char* what = "check_g_bounds";
  params.validate();
  validate_batch(params, dataset);
  if ((block == ParamBlock::b || block == ParamBlock::cov) &&
      !params.is_gaussian()) {
    throw PreconditionError("check_g_bounds: b and cov blocks need a gaussian model");
  }
  check_block_shape(params, block, perturbation, what);

  const double base = neg_data_term(params, dataset);
  const double lhs =
      neg_data_term(perturbed(params, block, perturbation), dataset);
  const double linear =
      inner(data_term_gradient(params, block, dataset), perturbation);

  static const char* ids[] = {"data_hidden_bias", "data_visible_bias", "data_weights", "data_precision"};
  BoundReport r{ids[static_cast<int>(block)]};
  double quadratic = 0.0;
  if (block == ParamBlock::b) {
    const double d = perturbation.cwiseAbs().maxCoeff();
    quadratic = static_cast<double>(params.n_visible()) *
                lambda_max(params.cov->precision_matrix()) / 2.0 * d * d;
  }
  r.record(lhs, base + linear + quadratic);
  return r;
}

BoundReport check_g_b_identity(const RbmParams& params, const Vector& db,
                               const DataBatch& dataset) {
  params.validate();
  validate_batch(params, dataset);
  if (!params.is_gaussian()) {
    throw PreconditionError("check_g_b_identity: model must be gaussian");
  }
  require_shape(db, params.n_visible(), 1, "check_g_b_identity");
  const double base = neg_data_term(params, dataset);
  const double moved =
      neg_data_term(perturbed(params, ParamBlock::b, db), dataset);
  const double linear =
      inner(data_term_gradient(params, ParamBlock::b, dataset), db);
  const double quad = 0.5 * db.dot(params.cov->apply_precision(db).col(0));
  BoundReport r{"data_visible_bias_identity"};
  r.record_identity(moved - base - linear, quad, 1e-9);
  return r;
}

BoundReport check_logdet_identity(const Matrix& spd) {
  if (spd.rows() != spd.cols() || spd.rows() == 0) {
    throw DimensionError("check_logdet_identity: matrix must be square");
  }
  Eigen::LLT<Matrix> llt(spd);
  if (llt.info() != Eigen::Success) {
    throw PreconditionError("check_logdet_identity: matrix is not SPD");
  }
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix()
                                   .diagonal().array().log().sum();
  const Matrix inverse =
      symmetrize(llt.solve(Matrix::Identity(spd.rows(), spd.cols())));
  Eigen::LLT<Matrix> inv_llt(inverse);
  if (inv_llt.info() != Eigen::Success) {
    throw NumericalError("check_logdet_identity: inverse lost definiteness");
  }
  const double log_det_inv =
      2.0 * inv_llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  BoundReport r{"logdet_inverse"};
  r.record_identity(-log_det_inv, log_det, 1e-10);
  return r;
}

BoundReport surrogate_argmin_check(const Vector& g, double c,
                                   std::int64_t n_candidates, RngStream& rng) {
  if (!(c > 0.0)) throw PreconditionError("surrogate_argmin_check: c <= 0");
  const auto surrogate = [&](const Vector& d) {
    const double n = d.size() == 0 ? 0.0 : d.cwiseAbs().maxCoeff();
    return g.dot(d) + c * n * n;
  };
  const Vector best = ssd_vector_step(Vector::Zero(g.size()), g, 0.5 / c);
  const double radius = best.size() == 0 ? 0.0 : best.cwiseAbs().maxCoeff();
  const double value = surrogate(best);

  const auto rescaled = [&](const Vector& d) -> Vector {
    const double n = d.cwiseAbs().maxCoeff();
    return n > 0.0 ? Vector(d * (radius / n)) : Vector(Vector::Zero(d.size()));
  };

  BoundReport r{"linf_step_argmin"};
  r.record(value, surrogate(rescaled(-g)));
  const std::uint64_t key = rng.next_key();
  SplitMix64 gen = RngStream::substream(key, 0);
  std::normal_distribution<double> normal;
  for (std::int64_t t = 0; t < n_candidates; ++t) {
    Vector d(g.size());
    for (Index i = 0; i < d.size(); ++i) d(i) = normal(gen);
    r.record(value, surrogate(rescaled(d)));
  }
  return r;
}

BoundReport surrogate_argmin_check(const Matrix& g, double c,
                                   std::int64_t n_candidates, RngStream& rng) {
  if (!(c > 0.0)) throw PreconditionError("surrogate_argmin_check: c <= 0");
  const auto surrogate = [&](const Matrix& d) {
    const double n = spectral_norm(d);
    return inner(g, d) + c * n * n;
  };
  const Matrix best = -(0.5 / c) * ssd_matrix_direction(g, SvdMode{});
  const double radius = spectral_norm(best);
  const double value = surrogate(best);

  const auto rescaled = [&](const Matrix& d) -> Matrix {
    const double n = spectral_norm(d);
    return n > 0.0 ? Matrix(d * (radius / n))
                   : Matrix(Matrix::Zero(d.rows(), d.cols()));
  };

  BoundReport r{"sinf_step_argmin"};
  r.record(value, surrogate(rescaled(-g)));
  const std::uint64_t key = rng.next_key();
  SplitMix64 gen = RngStream::substream(key, 0);
  std::normal_distribution<double> normal;
  for (std::int64_t t = 0; t < n_candidates; ++t) {
    Matrix d(g.rows(), g.cols());
    for (Index j = 0; j < d.cols(); ++j) {
      for (Index i = 0; i < d.rows(); ++i) d(i, j) = normal(gen);
    }
    r.record(value, surrogate(rescaled(d)));
  }
  return r;
}

namespace {

Matrix gaussian_matrix(Index rows, Index cols, SplitMix64& gen) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(gen);
  }
  return m;
}

Matrix uniform_matrix(Index rows, Index cols, double half_width,
                      SplitMix64& gen) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      m(i, j) = half_width * (2.0 * gen.uniform() - 1.0);
    }
  }
  return m;
}

Matrix random_spd(Index n, double lo, double hi, SplitMix64& gen) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(n, n, gen));
  const Matrix q = qr.householderQ();
  Vector eig(n);
  for (Index i = 0; i < n; ++i) eig(i) = lo + (hi - lo) * gen.uniform();
  return symmetrize(q * eig.asDiagonal() * q.transpose());
}

// Random PSD matrix with spectral norm `scale` * u, u ~ U(0, 1).
Matrix random_psd(Index n, double scale, SplitMix64& gen) {
  const Matrix b = gaussian_matrix(n, n, gen);
  Matrix u = symmetrize(b * b.transpose());
  const double norm = spectral_norm(u);
  if (norm > 0.0) u *= scale * gen.uniform() / norm;
  return u;
}

// A point inside the radius-r ball of dimension n.
Vector ball_point(Index n, double radius, SplitMix64& gen) {
  Vector dir = gaussian_matrix(n, 1, gen).col(0);
  const double norm = dir.norm();
  if (norm > 0.0) dir /= norm;
  return dir * (radius * gen.uniform());
}

DataBatch random_dataset(Index rows, Index n_visible, SplitMix64& gen) {
  return 1.5 * gaussian_matrix(rows, n_visible, gen);
}

struct TrialCounts {
  std::int64_t scalar = 10000;
  std::int64_t model = 1000;
  std::int64_t argmin_vector = 10000;
  std::int64_t argmin_matrix = 1000;
};

constexpr Index kBoundVisible = 4;
constexpr Index kBoundHidden = 3;
constexpr Index kDatasetRows = 16;
constexpr std::int64_t kCandidatesPerCase = 100;

}  // namespace

RbmParams random_bound_model(Index n_visible, Index n_hidden, double weight_cap,
                             SplitMix64& gen) {
  Matrix w = gaussian_matrix(n_visible, n_hidden, gen);
  const double norm = spectral_norm(w);
  // Leave headroom under the cap so W perturbations have room to move.
  if (norm > 0.95 * weight_cap) w *= 0.95 * weight_cap / norm;
  Vector b = gaussian_matrix(n_visible, 1, gen).col(0);
  Vector a = gaussian_matrix(n_hidden, 1, gen).col(0);
  return RbmParams::gaussian(
      std::move(w), std::move(b), std::move(a),
      CovarianceModel::full(random_spd(n_visible, 0.5, 2.0, gen)));
}

std::vector<BoundReport> run_bound_suite(const VerifyOptions& options) {
  if (options.trials && *options.trials < 1) {
    throw PreconditionError("run_bound_suite: trials must be >= 1");
  }
  if (!(options.delta_scale >= 0.0) || !std::isfinite(options.delta_scale)) {
    throw PreconditionError("run_bound_suite: delta_scale must be >= 0");
  }
  if (!(options.weight_cap > 0.0)) {
    throw PreconditionError("run_bound_suite: weight_cap must be > 0");
  }
  TrialCounts counts;
  if (options.trials) {
    counts = {*options.trials, *options.trials, *options.trials,
              *options.trials};
  }
  const double s = options.delta_scale;
  const double cap = options.weight_cap;
  const RngStream root(options.seed);
  std::vector<BoundReport> out;

  // Each bound draws from its own fork so trial counts stay independent.
  auto engine = [&](std::uint64_t tag) { return root.fork(tag).next_engine(); };

  {
    SplitMix64 gen = engine(1);
    BoundReport r{"lse_quadratic"};
    for (std::int64_t t = 0; t < counts.scalar; ++t) {
      const Index n = 1 + static_cast<Index>(gen() % 8);
      const Vector w = gaussian_matrix(n, 1, gen).col(0).array().exp();
      const Vector x = 2.0 * gaussian_matrix(n, 1, gen).col(0);
      const Vector dx = uniform_matrix(n, 1, 2.0 * s, gen).col(0);
      r.merge(check_lse_bound(w, x, dx));
    }
    out.push_back(r);
  }
  {
    SplitMix64 gen = engine(2);
    BoundReport r{"lse2_quadratic"};
    for (std::int64_t t = 0; t < counts.scalar; ++t) {
      const Index n = 1 + static_cast<Index>(gen() % 8);
      const double radius = 0.5 + 2.5 * gen.uniform();
      const Vector w = gaussian_matrix(n, 1, gen).col(0).array().exp();
      const Vector x = ball_point(n, radius, gen);
      const Vector y = ball_point(n, radius, gen);
      r.merge(check_lse2_bound(w, x, s * (y - x), radius));
    }
    out.push_back(r);
  }

  const ParamBlock partition_blocks[] = {ParamBlock::a, ParamBlock::b,
                                         ParamBlock::cov, ParamBlock::W};
  const char* partition_ids[] = {"logz_hidden_bias", "logz_visible_bias", "logz_precision", "logz_weights"};
  for (int i = 0; i < 4; ++i) {
    SplitMix64 gen = engine(10 + static_cast<std::uint64_t>(i));
    BoundReport r{partition_ids[i]};
    const ParamBlock block = partition_blocks[i];
    for (std::int64_t t = 0; t < counts.model; ++t) {
      const RbmParams p =
          random_bound_model(kBoundVisible, kBoundHidden, cap, gen);
      Matrix delta;
      switch (block) {
        case ParamBlock::a:
          delta = uniform_matrix(kBoundHidden, 1, s, gen);
          break;
        case ParamBlock::b:
          delta = uniform_matrix(kBoundVisible, 1, s, gen);
          break;
        case ParamBlock::cov:
          delta = random_psd(kBoundVisible, s, gen);
          break;
        case ParamBlock::W:
          delta = uniform_matrix(kBoundVisible, kBoundHidden, s, gen);
          for (int halvings = 0;
               halvings < 64 && spectral_norm(p.W + delta) > cap; ++halvings) {
            delta *= 0.5;
          }
          break;
      }
      r.merge(check_partition_bound(p, block, delta, cap));
    }
    out.push_back(r);
  }

  const ParamBlock g_blocks[] = {ParamBlock::a, ParamBlock::W, ParamBlock::cov,
                                 ParamBlock::b};
  const char* g_ids[] = {"data_hidden_bias", "data_weights", "data_precision", "data_visible_bias"};
  for (int i = 0; i < 4; ++i) {
    SplitMix64 gen = engine(20 + static_cast<std::uint64_t>(i));
    BoundReport r{g_ids[i]};
    const ParamBlock block = g_blocks[i];
    for (std::int64_t t = 0; t < counts.model; ++t) {
      const RbmParams p =
          random_bound_model(kBoundVisible, kBoundHidden, cap, gen);
      const DataBatch data = random_dataset(kDatasetRows, kBoundVisible, gen);
      Matrix delta;
      switch (block) {
        case ParamBlock::a:
          delta = uniform_matrix(kBoundHidden, 1, s, gen);
          break;
        case ParamBlock::b:
          delta = uniform_matrix(kBoundVisible, 1, s, gen);
          break;
        case ParamBlock::cov:
          delta = random_psd(kBoundVisible, s, gen);
          break;
        case ParamBlock::W:
          delta = uniform_matrix(kBoundVisible, kBoundHidden, s, gen);
          break;
      }
      r.merge(check_g_bounds(p, block, delta, data));
    }
    out.push_back(r);
  }
  {
    SplitMix64 gen = engine(30);
    BoundReport r{"data_visible_bias_identity"};
    for (std::int64_t t = 0; t < counts.model; ++t) {
      const RbmParams p =
          random_bound_model(kBoundVisible, kBoundHidden, cap, gen);
      const DataBatch data = random_dataset(kDatasetRows, kBoundVisible, gen);
      r.merge(check_g_b_identity(
          p, uniform_matrix(kBoundVisible, 1, s, gen).col(0), data));
    }
    out.push_back(r);
  }
  {
    SplitMix64 gen = engine(40);
    BoundReport r{"logdet_inverse"};
    for (std::int64_t t = 0; t < counts.model; ++t) {
      const Index n = 1 + static_cast<Index>(gen() % 8);
      r.merge(check_logdet_identity(random_spd(n, 0.1, 10.0, gen)));
    }
    out.push_back(r);
  }
  {
    SplitMix64 gen = engine(50);
    RngStream candidates = root.fork(51);
    BoundReport r{"linf_step_argmin"};
    for (std::int64_t t = 0; t < counts.argmin_vector; ++t) {
      const Index n = 1 + static_cast<Index>(gen() % 10);
      const Vector g = s * gaussian_matrix(n, 1, gen).col(0);
      const double c = 0.1 + 10.0 * gen.uniform();
      r.merge(surrogate_argmin_check(g, c, kCandidatesPerCase, candidates));
    }
    out.push_back(r);
  }
  {
    SplitMix64 gen = engine(60);
    RngStream candidates = root.fork(61);
    BoundReport r{"sinf_step_argmin"};
    for (std::int64_t t = 0; t < counts.argmin_matrix; ++t) {
      const Matrix g = s * gaussian_matrix(5, 4, gen);
      const double c = 0.1 + 10.0 * gen.uniform();
      r.merge(surrogate_argmin_check(g, c, kCandidatesPerCase, candidates));
    }
    out.push_back(r);
  }
  return out;
}

void write_bound_csv(std::ostream& out, const std::vector<BoundReport>& rows) {
  out << "bound_id,trials,violations,max_slack,min_slack\n";
  char buf[64];
  for (const BoundReport& r : rows) {
    out << r.id << ',' << r.trials << ',' << r.violations << ',';
    std::snprintf(buf, sizeof buf, "%.9e", r.max_slack + 0.0);  // no "-0"
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.9e", r.min_slack + 0.0);
    out << buf << '\n';
  }
}

}  // namespace ssdrbm
