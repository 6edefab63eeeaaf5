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

#include "ssdrbm/optimizer.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "ssdrbm/errors.hpp"

namespace ssdrbm {
namespace {

constexpr double kResidualFloor = 1e-12;

void require_same_shape(const Matrix& x, const Matrix& g, const char* what) {
  if (x.rows() != g.rows() || x.cols() != g.cols()) {
    throw DimensionError(std::string(what) + ": parameter and gradient shapes "
                         "differ");
  }
}

template <typename T>
T sgd_impl(const T& x, const T& g, double eps, T& velocity, UpdateRule rule,
           double momentum) {
  if (rule == UpdateRule::sgd) return x - eps * g;
  if (rule != UpdateRule::nesterov_sgd) {
    throw PreconditionError("sgd_step: rule must be sgd or nesterov_sgd");
  }
  if (velocity.size() != x.size()) velocity = T::Zero(x.rows(), x.cols());
  // Look-ahead form with the gradient taken at the current iterate:
  // v <- mu v - eps g;  x <- x + mu v - eps g.
  velocity = momentum * velocity - eps * g;
  return x + momentum * velocity - eps * g;
}

Vector vector_update(const Vector& x, const Vector& g, const BlockPolicy& bp,
                     double eps, Vector& velocity, double momentum) {
  switch (bp.rule) {
    case UpdateRule::frozen:
      return x;
    case UpdateRule::ssd:
      return ssd_vector_step(x, g, eps);
    case UpdateRule::sgd:
    case UpdateRule::nesterov_sgd:
      return sgd_impl<Vector>(x, g, eps, velocity, bp.rule, momentum);
  }
  return x;
}

Matrix matrix_update(const Matrix& x, const Matrix& g, const BlockPolicy& bp,
                     double eps, Matrix& velocity, double momentum,
                     const SvdMode& svd, std::uint64_t seed) {
  switch (bp.rule) {
    case UpdateRule::frozen:
      return x;
    case UpdateRule::ssd:
      return ssd_matrix_step(x, g, eps, svd, seed);
    case UpdateRule::sgd:
    case UpdateRule::nesterov_sgd:
      return sgd_impl<Matrix>(x, g, eps, velocity, bp.rule, momentum);
  }
  return x;
}

// Nearest symmetric matrix with eigenvalues >= kMinPrecision.
Matrix clip_to_spd(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("covariance update: eigendecomposition failed");
  }
  if (eig.eigenvalues().minCoeff() >= kMinPrecision) return sym;
  const Vector clipped = eig.eigenvalues().cwiseMax(kMinPrecision);
  Matrix out = eig.eigenvectors() * clipped.asDiagonal() *
               eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace

const char* to_string(UpdateRule r) {
  switch (r) {
    case UpdateRule::sgd:
      return "sgd";
    case UpdateRule::nesterov_sgd:
      return "nesterov_sgd";
    case UpdateRule::ssd:
      return "ssd";
    case UpdateRule::frozen:
      return "frozen";
  }
  return "?";
}

double step_size(const StepSchedule& schedule, std::int64_t iter) {
  if (iter < 0) throw PreconditionError("step_size: iter must be >= 0");
  if (schedule.kind == StepSchedule::Kind::fixed) return schedule.base;
  const auto exponent = iter / std::max<std::int64_t>(schedule.period, 1);
  return schedule.base * std::pow(schedule.decay, static_cast<double>(exponent));
}

OptimizerPolicy OptimizerPolicy::uniform(UpdateRule rule, double step) {
  OptimizerPolicy p;
  for (BlockPolicy* bp : {&p.w, &p.b, &p.a, &p.cov}) {
    bp->rule = rule;
    bp->schedule.base = step;
  }
  return p;
}

void OptimizerPolicy::validate() const {
  for (const BlockPolicy* bp : {&w, &b, &a, &cov}) {
    const StepSchedule& s = bp->schedule;
    if (!(s.base > 0.0) || !std::isfinite(s.base)) {
      throw PreconditionError("step size must be finite and > 0");
    }
    if (!(s.decay > 0.0 && s.decay <= 1.0)) {
      throw PreconditionError("decay must lie in (0, 1]");
    }
    if (s.period < 1) throw PreconditionError("decay period must be >= 1");
  }
  if (svd.target_rank < 1) throw PreconditionError("target_rank must be >= 1");
  if (svd.oversample < 0 || svd.power_iters < 0) {
    throw PreconditionError("oversample and power_iters must be >= 0");
  }
  if (weight_cap && !(*weight_cap > 0.0)) {
    throw PreconditionError("weight norm cap must be > 0");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw PreconditionError("momentum must lie in [0, 1)");
  }
}

std::string OptimizerPolicy::label() const {
  if (w.rule == b.rule && b.rule == a.rule && a.rule == cov.rule) {
    return to_string(w.rule);
  }
  return std::string("W:") + to_string(w.rule) + "/b:" + to_string(b.rule) +
         "/a:" + to_string(a.rule) + "/cov:" + to_string(cov.rule);
}

MomentumState MomentumState::zeros_like(const RbmParams& params) {
  MomentumState s{Matrix::Zero(params.n_visible(), params.n_hidden()),
                  Vector::Zero(params.n_visible()),
                  Vector::Zero(params.n_hidden()), Matrix()};
  const GradientSet g = ssdrbm::zeros_like(params);
  s.cov = Matrix::Zero(g.dcov.rows(), g.dcov.cols());
  return s;
}

Vector ssd_vector_step(const Vector& x, const Vector& g, double eps) {
  if (x.size() != g.size()) {
    throw DimensionError("ssd_vector_step: parameter and gradient sizes differ");
  }
  const double l1 = g.lpNorm<1>();
  const Vector sign = g.unaryExpr(
      [](double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); });
  return x - (eps * l1) * sign;
}

Matrix ssd_matrix_direction(const Matrix& g, const SvdMode& mode,
                            std::uint64_t seed) {
  if (mode.kind == SvdMode::Kind::exact) {
    const SvdResult s = svd(g);
    return s.sigma.sum() * (s.U * s.V.transpose());
  }
  const Index small = std::min(g.rows(), g.cols());
  if (mode.target_rank > small) {
    throw PreconditionError("ssd_matrix_direction: target_rank exceeds " +
                            std::to_string(small));
  }
  RandomizedSvdOptions opts;
  opts.target_rank = mode.target_rank;
  opts.oversample = std::min(mode.oversample, small - mode.target_rank);
  opts.power_iters = mode.power_iters;
  opts.seed = seed;
  const SvdResult s = randomized_svd(g, opts);
  const double nuclear = s.sigma.sum();
  Matrix direction = nuclear * (s.U * s.V.transpose());
  const Matrix residual = g - s.reconstruct();
  const double residual_norm = residual.isZero(0.0) ? 0.0 : spectral_norm(residual);
  if (residual_norm >= kResidualFloor) {
    direction += (nuclear / residual_norm) * residual;
  }
  return direction;
}

Matrix ssd_matrix_step(const Matrix& x, const Matrix& g, double eps,
                       const SvdMode& mode, std::uint64_t seed) {
  require_same_shape(x, g, "ssd_matrix_step");
  return x - eps * ssd_matrix_direction(g, mode, seed);
}

Matrix sgd_step(const Matrix& x, const Matrix& g, double eps, Matrix& velocity,
                UpdateRule rule, double momentum) {
  require_same_shape(x, g, "sgd_step");
  return sgd_impl<Matrix>(x, g, eps, velocity, rule, momentum);
}

Vector sgd_step(const Vector& x, const Vector& g, double eps, Vector& velocity,
                UpdateRule rule, double momentum) {
  if (x.size() != g.size()) throw DimensionError("sgd_step: sizes differ");
  return sgd_impl<Vector>(x, g, eps, velocity, rule, momentum);
}

Matrix project_weight_norm(const Matrix& w, double cap) {
  if (!(cap > 0.0)) throw PreconditionError("weight norm cap must be > 0");
  const double norm = spectral_norm(w);
  if (norm <= cap) return w;
  return w * (cap / norm);
}

UpdateResult apply_update(const RbmParams& params, const GradientSet& grads,
                          const OptimizerPolicy& policy,
                          const MomentumState& state, std::int64_t iter) {
  require_same_shape(params.W, grads.dW, "apply_update W");
  require_same_shape(params.b, grads.db, "apply_update b");
  require_same_shape(params.a, grads.da, "apply_update a");

  UpdateResult out{params, state};
  const double mu = policy.momentum;
  const auto seed = static_cast<std::uint64_t>(iter);

  out.params.W = matrix_update(params.W, grads.dW, policy.w,
                               step_size(policy.w.schedule, iter), out.state.w,
                               mu, policy.svd, seed);
  if (policy.weight_cap && policy.w.rule != UpdateRule::frozen) {
    out.params.W = project_weight_norm(out.params.W, *policy.weight_cap);
  }
  out.params.b = vector_update(params.b, grads.db, policy.b,
                               step_size(policy.b.schedule, iter), out.state.b,
                               mu);
  out.params.a = vector_update(params.a, grads.da, policy.a,
                               step_size(policy.a.schedule, iter), out.state.a,
                               mu);

  if (params.is_gaussian() && params.cov_kind() != CovarianceKind::identity &&
      policy.cov.rule != UpdateRule::frozen) {
    const CovarianceModel& cov = *params.cov;
    const double eps = step_size(policy.cov.schedule, iter);
    switch (cov.kind()) {
      case CovarianceKind::isotropic: {
        if (grads.dcov.size() != 1) {
          throw DimensionError("apply_update: isotropic gradient must be 1x1");
        }
        Vector c = Vector::Constant(1, cov.isotropic_precision());
        Vector vel = out.state.cov.size() == 1
                         ? Vector(out.state.cov.reshaped())
                         : Vector::Zero(1);
        const Vector next =
            vector_update(c, grads.dcov.reshaped(), policy.cov, eps, vel, mu);
        out.state.cov = vel;
        out.params.cov = CovarianceModel::isotropic(
            cov.dim(), std::max(next(0), kMinPrecision));
        break;
      }
      case CovarianceKind::diagonal_log: {
        if (grads.dcov.rows() != cov.dim() || grads.dcov.cols() != 1) {
          throw DimensionError("apply_update: diagonal gradient shape");
        }
        Vector vel = out.state.cov.size() == cov.dim()
                         ? Vector(out.state.cov.reshaped())
                         : Vector::Zero(cov.dim());
        const Vector next = vector_update(cov.log_precision(), grads.dcov.col(0),
                                          policy.cov, eps, vel, mu);
        out.state.cov = vel;
        out.params.cov = CovarianceModel::diagonal_log(next);
        break;
      }
      case CovarianceKind::full: {
        require_same_shape(cov.full_precision(), grads.dcov, "apply_update C");
        const Matrix next =
            matrix_update(cov.full_precision(), grads.dcov, policy.cov, eps,
                          out.state.cov, mu, policy.svd, seed ^ 0xc0fULL);
        out.params.cov = CovarianceModel::full(clip_to_spd(next));
        break;
      }
      case CovarianceKind::identity:
        break;
    }
  }
  out.params.validate();
  return out;
}

}  // namespace ssdrbm
