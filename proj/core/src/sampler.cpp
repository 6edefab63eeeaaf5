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

#include "ssdrbm/sampler.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <random>
#include <string>

#include "ssdrbm/errors.hpp"

namespace ssdrbm {
namespace {

// Standard normal block, row i drawn from substream i of one key.
Matrix standard_normal(Index rows, Index cols, RngStream& rng) {
  const std::uint64_t key = rng.next_key();
  Matrix z(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    SplitMix64 gen = RngStream::substream(key, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal;
    for (Index j = 0; j < cols; ++j) z(i, j) = normal(gen);
  }
  return z;
}

}  // namespace

Matrix sample_bernoulli(const Matrix& probs, RngStream& rng) {
  const std::uint64_t key = rng.next_key();
  Matrix out(probs.rows(), probs.cols());
  for (Index i = 0; i < probs.rows(); ++i) {
    SplitMix64 gen = RngStream::substream(key, static_cast<std::uint64_t>(i));
    for (Index j = 0; j < probs.cols(); ++j) {
      out(i, j) = gen.uniform() < probs(i, j) ? 1.0 : 0.0;
    }
  }
  return out;
}

Matrix sample_hidden(const RbmParams& params, const Matrix& visible,
                     RngStream& rng) {
  return sample_bernoulli(hidden_probs(params, visible), rng);
}

Vector sample_hidden(const RbmParams& params, const Vector& v,
                     RngStream& rng) {
  return sample_hidden(params, Matrix(v.transpose()), rng).row(0).transpose();
}

Matrix sample_visible(const RbmParams& params, const Matrix& hidden,
                      RngStream& rng) {
  Matrix means = visible_means(params, hidden);
  if (params.family == Family::bernoulli) return sample_bernoulli(means, rng);

  const CovarianceModel& cov = *params.cov;
  Matrix z = standard_normal(means.rows(), means.cols(), rng);
  switch (cov.kind()) {
    case CovarianceKind::identity:
      break;
    case CovarianceKind::isotropic:
      z /= std::sqrt(cov.isotropic_precision());
      break;
    case CovarianceKind::diagonal_log: {
      const Vector scale = (-0.5 * cov.log_precision().array()).exp();
      z = z * scale.asDiagonal();
      break;
    }
    case CovarianceKind::full: {
      // C^{-1} = L L^T, so L^{-T} z has covariance C.
      Eigen::LLT<Matrix> llt(cov.full_precision());
      if (llt.info() != Eigen::Success) {
        throw NumericalError(
            "sample_visible: Cholesky factorisation of the precision failed");
      }
      z = llt.matrixU().solve(z.transpose()).transpose();
      break;
    }
  }
  return means + z;
}

Vector sample_visible(const RbmParams& params, const Vector& h,
                      RngStream& rng) {
  return sample_visible(params, Matrix(h.transpose()), rng).row(0).transpose();
}

ChainState gibbs_step(const RbmParams& params, const ChainState& state,
                      RngStream& rng) {
  ChainState next;
  next.hidden = sample_hidden(params, state.visible, rng);
  next.visible = sample_visible(params, next.hidden, rng);
  return next;
}

CdResult cd_k(const RbmParams& params, const DataBatch& batch, int k,
              RngStream& rng) {
  if (k < 1) throw PreconditionError("cd_k: k must be >= 1");
  validate_batch(params, batch);
  CdResult out;
  out.positive.visible = batch;
  out.positive.hidden_probs = hidden_probs(params, batch);
  ChainState state{batch, Matrix()};
  for (int step = 0; step < k; ++step) state = gibbs_step(params, state, rng);
  out.negative.visible = state.visible;
  out.negative.hidden_probs = hidden_probs(params, state.visible);
  out.chains = std::move(state);
  return out;
}

PcdResult pcd(const RbmParams& params, const ChainState& persistent, int k,
              RngStream& rng) {
  if (k < 1) throw PreconditionError("pcd: k must be >= 1");
  if (persistent.visible.cols() != params.n_visible() ||
      persistent.hidden.cols() != params.n_hidden() ||
      persistent.visible.rows() != persistent.hidden.rows() ||
      persistent.visible.rows() < 1) {
    throw DimensionError("pcd: persistent chain state does not match model");
  }
  ChainState state = persistent;
  for (int step = 0; step < k; ++step) state = gibbs_step(params, state, rng);
  PcdResult out;
  out.negative.visible = state.visible;
  out.negative.hidden_probs = hidden_probs(params, state.visible);
  out.chains = std::move(state);
  return out;
}

ChainState init_persistent_chains(const RbmParams& params,
                                  const DataBatch& first_batch,
                                  RngStream& rng) {
  validate_batch(params, first_batch);
  return gibbs_step(params, ChainState{first_batch, Matrix()}, rng);
}

}  // namespace ssdrbm
