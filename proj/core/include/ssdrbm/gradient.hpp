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

#ifndef SSDRBM_GRADIENT_HPP
#define SSDRBM_GRADIENT_HPP

#include "ssdrbm/model.hpp"
#include "ssdrbm/sampler.hpp"

namespace ssdrbm {

/// Sufficient statistics of one phase (data or model), as expectations.
///
/// vv is only populated when the model has a full covariance; v_sq is the
/// elementwise second moment and is always present.
struct PhaseStats {
  Matrix vh;    // E[v h^T]        n_visible x n_hidden
  Vector v;     // E[v]
  Vector h;     // E[h]
  Vector v_sq;  // E[v .* v]
  Matrix vv;    // E[v v^T]        (full covariance only)
};

/// Empirical statistics of samples: hidden probabilities stand in for h.
PhaseStats summarize(const RbmParams& params, const PhaseSamples& samples);

/// Exact model expectations by enumeration (the E_p terms).
PhaseStats exact_model_stats(const RbmParams& params);

/// Gradient of L with one block per parameter. dcov mirrors the covariance
/// payload: 1x1 (isotropic precision), n_visible x 1 (log-precisions),
/// n_visible x n_visible (symmetrised, full precision) or 0x0 (none).
struct GradientSet {
  Matrix dW;
  Vector db;
  Vector da;
  Matrix dcov;

  bool has_cov() const { return dcov.size() > 0; }
};

GradientSet zeros_like(const RbmParams& params);

/// Model-minus-data gradient of L from the two phases' statistics.
GradientSet estimate_gradients(const RbmParams& params,
                               const PhaseStats& positive,
                               const PhaseStats& negative);

/// Convenience overload for sample phases (CD-k / PCD output).
GradientSet estimate_gradients(const RbmParams& params,
                               const PhaseSamples& positive,
                               const PhaseSamples& negative);

/// Exact gradient of exact_loss(params, dataset).
GradientSet exact_gradients(const RbmParams& params, const DataBatch& dataset);

/// d L / d diag(C^{-1}) for diagonal covariance kinds, i.e. the gradient with
/// respect to the precision entries themselves rather than their logs.
Vector diagonal_precision_gradient(const RbmParams& params,
                                   const PhaseStats& positive,
                                   const PhaseStats& negative);

}  // namespace ssdrbm

#endif  // SSDRBM_GRADIENT_HPP
