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

#ifndef SSDRBM_SAMPLER_HPP
#define SSDRBM_SAMPLER_HPP

#include "ssdrbm/model.hpp"
#include "ssdrbm/rng.hpp"

namespace ssdrbm {

/// One row per chain.
struct ChainState {
  Matrix visible;  // B x n_visible
  Matrix hidden;   // B x n_hidden, binary

  Index chains() const { return visible.rows(); }
};

/// Visible samples of one phase paired with their hidden activation
/// probabilities (the Rao-Blackwellised hidden statistics).
struct PhaseSamples {
  Matrix visible;
  Matrix hidden_probs;
};

/// out(i, j) = 1 with probability probs(i, j). Consumes one key; row i draws
/// from substream i.
Matrix sample_bernoulli(const Matrix& probs, RngStream& rng);

Matrix sample_hidden(const RbmParams& params, const Matrix& visible,
                     RngStream& rng);
Vector sample_hidden(const RbmParams& params, const Vector& v, RngStream& rng);

/// Bernoulli: independent sigma(W h + b) draws. Gaussian: N(b + W h, C);
/// the full-covariance kind draws through the Cholesky factor of C^{-1}.
Matrix sample_visible(const RbmParams& params, const Matrix& hidden,
                      RngStream& rng);
Vector sample_visible(const RbmParams& params, const Vector& h,
                      RngStream& rng);

/// h' ~ p(h | v), then v' ~ p(v | h'). The input state is not modified.
ChainState gibbs_step(const RbmParams& params, const ChainState& state,
                      RngStream& rng);

struct CdResult {
  PhaseSamples positive;  // the data and p(h | data)
  PhaseSamples negative;  // k-step samples and p(h | sample)
  ChainState chains;      // final chain state
};

/// CD-k: chains start at the data and run k full Gibbs steps.
CdResult cd_k(const RbmParams& params, const DataBatch& batch, int k,
              RngStream& rng);

struct PcdResult {
  ChainState chains;
  PhaseSamples negative;
};

/// Persistent CD: advance the carried chains k steps.
PcdResult pcd(const RbmParams& params, const ChainState& persistent, int k,
              RngStream& rng);

/// Persistent chains from one sampled reconstruction of `first_batch`.
ChainState init_persistent_chains(const RbmParams& params,
                                  const DataBatch& first_batch,
                                  RngStream& rng);

}  // namespace ssdrbm

#endif  // SSDRBM_SAMPLER_HPP
