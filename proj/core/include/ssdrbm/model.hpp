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

#ifndef SSDRBM_MODEL_HPP
#define SSDRBM_MODEL_HPP

#include <cstdint>
#include <optional>

#include "ssdrbm/linalg.hpp"
#include "ssdrbm/rng.hpp"

namespace ssdrbm {

enum class Family : std::uint8_t { bernoulli = 0, gaussian = 1 };

enum class CovarianceKind : std::uint8_t {
  identity = 0,
  isotropic = 1,     // C^{-1} = c I, payload is the precision c > 0
  diagonal_log = 2,  // C^{-1} = diag(exp(c_j)), payload is the log-precisions
  full = 3,          // payload is the SPD precision matrix C^{-1}
};

const char* to_string(Family f);
const char* to_string(CovarianceKind k);

/// Visible-unit precision C^{-1} of a Gaussian RBM.
class CovarianceModel {
 public:
  static CovarianceModel identity(Index n_visible);
  static CovarianceModel isotropic(Index n_visible, double precision);
  static CovarianceModel diagonal_log(Vector log_precision);
  static CovarianceModel full(Matrix precision);

  CovarianceKind kind() const { return kind_; }
  Index dim() const { return dim_; }

  double isotropic_precision() const { return scalar_; }
  const Vector& log_precision() const { return log_precision_; }
  const Matrix& full_precision() const { return full_; }

  bool is_diagonal() const { return kind_ != CovarianceKind::full; }

  /// Diagonal of C^{-1} (valid for every kind).
  Vector precision_diagonal() const;
  Matrix precision_matrix() const;
  Matrix covariance_matrix() const;

  /// C^{-1} * x for an n_visible x k block.
  Matrix apply_precision(const Matrix& x) const;

  double log_det_precision() const;

  /// Number of scalar parameters stored for this kind.
  Index payload_size() const;

 private:
  CovarianceModel(CovarianceKind kind, Index dim) : kind_(kind), dim_(dim) {}

  CovarianceKind kind_;
  Index dim_;
  double scalar_ = 1.0;
  Vector log_precision_;
  Matrix full_;
};

/// Parameters theta = {W, b, a[, C^{-1}]}. Bernoulli models carry no
/// covariance.
struct RbmParams {
  Family family = Family::bernoulli;
  Matrix W;  // n_visible x n_hidden
  Vector b;  // n_visible
  Vector a;  // n_hidden
  std::optional<CovarianceModel> cov;

  static RbmParams bernoulli(Matrix W, Vector b, Vector a);
  static RbmParams gaussian(Matrix W, Vector b, Vector a, CovarianceModel cov);
  static RbmParams zeros(Family family, Index n_visible, Index n_hidden,
                         CovarianceKind kind = CovarianceKind::identity);

  Index n_visible() const { return W.rows(); }
  Index n_hidden() const { return W.cols(); }
  bool is_gaussian() const { return family == Family::gaussian; }
  CovarianceKind cov_kind() const;

  /// Throws DimensionError / PreconditionError when an invariant fails.
  void validate() const;
};

/// Rows are visible vectors; one row per example or chain.
using DataBatch = Matrix;

/// Throws unless `batch` is non-empty, has n_visible columns and, for
/// Bernoulli models, only {0, 1} entries.
void validate_batch(const RbmParams& params, const DataBatch& batch);

double energy(const RbmParams& params, const Vector& v, const Vector& h);

/// Effective coupling C^{-1} W (W itself for Bernoulli models).
Matrix coupling(const RbmParams& params);

/// p(h_k = 1 | v) for every row of `visible`.
Matrix hidden_probs(const RbmParams& params, const DataBatch& visible);
Vector hidden_probs(const RbmParams& params, const Vector& v);

/// Mean of p(v | h) for every row of `hidden`: sigma(W h + b) or b + W h.
Matrix visible_means(const RbmParams& params, const Matrix& hidden);

struct VisibleConditional {
  Vector mean;  // Bernoulli probabilities, or the Gaussian mean b + W h
  std::optional<CovarianceModel> cov;  // Gaussian only; covariance is C
};
VisibleConditional visible_conditional(const RbmParams& params,
                                       const Vector& h);

/// Overflow-safe log(1 + exp(x)).
double softplus(double x);

/// g(theta): average negative unnormalised log-likelihood of the batch.
double neg_data_term(const RbmParams& params, const DataBatch& batch);

/// Largest enumerated set (in units) accepted by the exact oracles.
inline constexpr Index kMaxEnumeratedUnits = 20;

/// log Z by exact enumeration. Gaussian models sum the closed-form Gaussian
/// integral over all 2^{n_hidden} hidden states; Bernoulli models enumerate
/// the smaller layer and marginalise the other analytically.
double exact_log_partition(const RbmParams& params);

/// L = f + g on `dataset`.
double exact_loss(const RbmParams& params, const DataBatch& dataset);

/// Mean over rows of ||v - v_hat||^2 with h ~ p(h | v) and v_hat the mean of
/// p(v | h).
double reconstruction_sse(const RbmParams& params, const DataBatch& batch,
                          RngStream& rng);

}  // namespace ssdrbm

#endif  // SSDRBM_MODEL_HPP
