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

#ifndef SSDRBM_VERIFY_HPP
#define SSDRBM_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ssdrbm/gradient.hpp"
#include "ssdrbm/model.hpp"
#include "ssdrbm/rng.hpp"

namespace ssdrbm {

/// Relative slack allowed before a trial counts as a violation.
inline constexpr double kBoundTolerance = 1e-9;

/// Aggregate outcome of one bound over many trials. Slack is rhs - lhs.
struct BoundReport {
  std::string id;
  std::int64_t trials = 0;
  std::int64_t violations = 0;
  double max_slack = 0.0;
  double min_slack = 0.0;

  /// Inequality lhs <= rhs; violation when lhs > rhs + tol * |rhs|.
  void record(double lhs, double rhs);
  /// Identity lhs == rhs; slack is -|lhs - rhs|, violation beyond
  /// `tolerance` * max(1, |rhs|).
  void record_identity(double lhs, double rhs, double tolerance);
  void merge(const BoundReport& other);

  bool passed() const { return trials > 0 && violations == 0; }
};

/// log sum_i w_i exp(x_i)
double lse(const Vector& weights, const Vector& x);
/// log sum_i w_i exp(x_i^2 / 2)
double lse2(const Vector& weights, const Vector& x);

/// lse(x + dx) <= lse(x) + <grad, dx> + 1/2 ||dx||_inf^2.
BoundReport check_lse_bound(const Vector& weights, const Vector& x,
                            const Vector& dx);

/// lse2(x + dx) <= lse2(x) + <grad, dx> + (1/2 + 3 r^2 / 4) ||dx||_inf^2,
/// for x and x + dx inside the radius-r ball.
BoundReport check_lse2_bound(const Vector& weights, const Vector& x,
                             const Vector& dx, double r);

enum class ParamBlock { a, b, W, cov };

const char* to_string(ParamBlock block);

/// Curvature constant of the log-partition bound for one block (the factor
/// multiplying the squared l_inf / S_inf norm of the perturbation).
double partition_bound_constant(const RbmParams& params, ParamBlock block,
                                double weight_cap);

/// Exact gradient of f = log Z. dcov (full-precision models only) is the
/// symmetrised gradient with respect to the precision matrix.
GradientSet partition_gradient(const RbmParams& params);

/// f(theta + delta) <= f(theta) + <grad f, delta> + K ||delta||^2 for one
/// block of a Gaussian model. Vector blocks take an n x 1 perturbation; the
/// covariance block needs a full-precision model and a PSD perturbation.
BoundReport check_partition_bound(const RbmParams& params, ParamBlock block,
                                  const Matrix& perturbation,
                                  double weight_cap);

/// First-order upper bounds of g from concavity (a, W, cov) and the
/// quadratic b bound with constant N_v r(C) / 2.
BoundReport check_g_bounds(const RbmParams& params, ParamBlock block,
                           const Matrix& perturbation,
                           const DataBatch& dataset);

/// Exact second-order expansion of g in b:
/// g(b + db) - g(b) - <grad, db> == db^T C^{-1} db / 2.
BoundReport check_g_b_identity(const RbmParams& params, const Vector& db,
                               const DataBatch& dataset);

/// -log|C^{-1}| == log|C| for an SPD matrix C.
BoundReport check_logdet_identity(const Matrix& spd);

/// The l_inf step with eps = 1/(2c) must attain a surrogate value
/// <g, d> + c ||d||_inf^2 no larger than `n_candidates` random directions of
/// equal l_inf norm and the rescaled negative gradient.
BoundReport surrogate_argmin_check(const Vector& g, double c,
                                   std::int64_t n_candidates, RngStream& rng);

/// Matrix version with the S_inf norm and the exact S_inf step.
BoundReport surrogate_argmin_check(const Matrix& g, double c,
                                   std::int64_t n_candidates, RngStream& rng);

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Overrides every per-bound trial count when set.
  std::optional<std::int64_t> trials;
  /// Multiplies every perturbation; 0 checks the bounds at delta = 0.
  double delta_scale = 1.0;
  double weight_cap = 3.872983346207417;  // sqrt(15)
};

/// Runs every bound at its default trial count and returns one report per
/// bound id, in a fixed order.
std::vector<BoundReport> run_bound_suite(const VerifyOptions& options);

/// CSV with header bound_id,trials,violations,max_slack,min_slack.
void write_bound_csv(std::ostream& out, const std::vector<BoundReport>& rows);

/// Random Gaussian RBM for bound checks: full SPD precision with eigenvalues
/// in [0.5, 2], N(0, 1) biases, N(0, 1) weights rescaled to ||W||_2 <= cap.
RbmParams random_bound_model(Index n_visible, Index n_hidden, double weight_cap,
                             SplitMix64& gen);

}  // namespace ssdrbm

#endif  // SSDRBM_VERIFY_HPP
