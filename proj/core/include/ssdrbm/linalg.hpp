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

#ifndef SSDRBM_LINALG_HPP
#define SSDRBM_LINALG_HPP

#include <Eigen/Dense>
#include <cstdint>

namespace ssdrbm {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thin singular value decomposition M = U diag(sigma) V^T.
///
/// Columns of U are sign-normalised so that the largest-magnitude entry of
/// each column is positive (the matching V column is flipped with it).
struct SvdResult {
  Matrix U;      // m x r
  Vector sigma;  // r, nonincreasing, nonnegative
  Matrix V;      // n x r

  Index rank() const { return sigma.size(); }
  Matrix reconstruct() const;
};

enum class NormOrder { one, two, inf };

/// Throws PreconditionError when any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Matrix>& m, const char* what);

/// Exact thin SVD with r = min(m, n). Deterministic for a fixed input.
SvdResult svd(const Matrix& m);

struct RandomizedSvdOptions {
  Index target_rank = 1;
  Index oversample = 10;
  int power_iters = 2;
  std::uint64_t seed = 0x5eed5eedULL;
};

/// Randomized range finder followed by a small exact SVD.
/// Requires target_rank >= 1 and target_rank + oversample <= min(m, n).
SvdResult randomized_svd(const Matrix& m, const RandomizedSvdOptions& opts);

double vector_norm(const Eigen::Ref<const Vector>& x, NormOrder p);

/// l_p norm of the singular values.
double schatten_norm(const Matrix& m, NormOrder p);

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Singular values only, nonincreasing.
Vector singular_values(const Matrix& m);

}  // namespace ssdrbm

#endif  // SSDRBM_LINALG_HPP
