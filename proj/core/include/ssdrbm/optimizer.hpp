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

#ifndef SSDRBM_OPTIMIZER_HPP
#define SSDRBM_OPTIMIZER_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "ssdrbm/gradient.hpp"
#include "ssdrbm/linalg.hpp"
#include "ssdrbm/model.hpp"

namespace ssdrbm {

enum class UpdateRule { sgd, nesterov_sgd, ssd, frozen };

const char* to_string(UpdateRule r);

/// Step size schedule: base * decay^floor(iter / period).
struct StepSchedule {
  enum class Kind { fixed, exponential };
  Kind kind = Kind::fixed;
  double base = 0.01;
  double decay = 1.0;
  std::int64_t period = 1;
};

double step_size(const StepSchedule& schedule, std::int64_t iter);

struct SvdMode {
  enum class Kind { exact, randomized };
  Kind kind = Kind::exact;
  Index target_rank = 10;
  Index oversample = 10;
  int power_iters = 2;
};

struct BlockPolicy {
  UpdateRule rule = UpdateRule::sgd;
  StepSchedule schedule;
};

/// Per-block routing. Nesterov momentum is shared by every nesterov block.
struct OptimizerPolicy {
  BlockPolicy w;
  BlockPolicy b;
  BlockPolicy a;
  BlockPolicy cov;
  SvdMode svd;
  std::optional<double> weight_cap;  // ||W||_2 <= R after each update
  double momentum = 0.9;

  /// Same rule and schedule on every block.
  static OptimizerPolicy uniform(UpdateRule rule, double step);

  void validate() const;

  /// Short label such as "ssd", "sgd" or "W:ssd/b:sgd/a:sgd/cov:sgd".
  std::string label() const;
};

/// Velocity buffers, zero-initialised, shaped like the gradient blocks.
struct MomentumState {
  Matrix w;
  Vector b;
  Vector a;
  Matrix cov;

  static MomentumState zeros_like(const RbmParams& params);
};

/// Lower bound kept on precisions after a covariance update.
inline constexpr double kMinPrecision = 1e-6;

/// l_inf steepest descent step: x - eps * ||g||_1 * sign(g), sign(0) = 0.
Vector ssd_vector_step(const Vector& x, const Vector& g, double eps);

/// Descent direction of the S_inf step (before scaling by eps):
/// ||sigma||_1 U V^T from the SVD of g. Randomized mode adds the
/// normalised residual ||sigma||_1 R / ||R||_{S_inf}, R = G - U diag(sigma) V^T,
/// unless ||R||_{S_inf} < 1e-12.
Matrix ssd_matrix_direction(const Matrix& g, const SvdMode& mode,
                            std::uint64_t seed = 0);

/// X - eps * ssd_matrix_direction(G).
Matrix ssd_matrix_step(const Matrix& x, const Matrix& g, double eps,
                       const SvdMode& mode, std::uint64_t seed = 0);

/// Plain or Nesterov SGD on one block. `velocity` is updated in place for
/// the Nesterov rule and untouched for plain SGD.
Matrix sgd_step(const Matrix& x, const Matrix& g, double eps,
                Matrix& velocity, UpdateRule rule, double momentum);
Vector sgd_step(const Vector& x, const Vector& g, double eps,
                Vector& velocity, UpdateRule rule, double momentum);

/// W scaled by R / ||W||_2 when ||W||_2 > R, unchanged otherwise.
Matrix project_weight_norm(const Matrix& w, double cap);

struct UpdateResult {
  RbmParams params;
  MomentumState state;
};

/// One optimizer transition; inputs are not modified.
UpdateResult apply_update(const RbmParams& params, const GradientSet& grads,
                          const OptimizerPolicy& policy,
                          const MomentumState& state, std::int64_t iter);

}  // namespace ssdrbm

#endif  // SSDRBM_OPTIMIZER_HPP
