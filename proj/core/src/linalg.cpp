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

#include "ssdrbm/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ssdrbm/errors.hpp"
#include "ssdrbm/rng.hpp"

namespace ssdrbm {
namespace {

std::string dims(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Flip column pairs so the largest-magnitude entry of each U column is
// positive. Ties resolve to the first index.
void normalize_signs(SvdResult& r) {
  for (Index j = 0; j < r.U.cols(); ++j) {
    Index arg = 0;
    r.U.col(j).cwiseAbs().maxCoeff(&arg);
    if (r.U(arg, j) < 0.0) {
      r.U.col(j) *= -1.0;
      r.V.col(j) *= -1.0;
    }
  }
}

// Orthonormal basis for the column space of y (thin Householder Q).
Matrix orthonormal_basis(const Matrix& y) {
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() * Matrix::Identity(y.rows(), y.cols());
}

}  // namespace

Matrix SvdResult::reconstruct() const {
  return U * sigma.asDiagonal() * V.transpose();
}

void require_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (!m.allFinite()) {
    throw PreconditionError(std::string(what) + ": non-finite entry");
  }
}

SvdResult svd(const Matrix& m) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw DimensionError("svd: empty matrix " + dims(m));
  }
  require_finite(m, "svd");
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NonConvergenceError("svd did not converge for " + dims(m) +
                              " matrix");
  }
  SvdResult r{dec.matrixU(), dec.singularValues(), dec.matrixV()};
  normalize_signs(r);
  return r;
}

SvdResult randomized_svd(const Matrix& m, const RandomizedSvdOptions& opts) {
  const Index small = std::min(m.rows(), m.cols());
  if (opts.target_rank < 1 || opts.oversample < 0 || opts.power_iters < 0) {
    throw PreconditionError("randomized_svd: invalid rank parameters");
  }
  if (opts.target_rank + opts.oversample > small) {
    throw PreconditionError(
        "randomized_svd: target_rank + oversample = " +
        std::to_string(opts.target_rank + opts.oversample) +
        " exceeds min dimension of " + dims(m));
  }
  require_finite(m, "randomized_svd");

  const Index width = opts.target_rank + opts.oversample;
  SplitMix64 gen(mix64(opts.seed, static_cast<std::uint64_t>(width)));
  std::normal_distribution<double> normal;
  Matrix omega(m.cols(), width);
  for (Index j = 0; j < width; ++j) {
    for (Index i = 0; i < m.cols(); ++i) omega(i, j) = normal(gen);
  }

  Matrix q = orthonormal_basis(m * omega);
  for (int it = 0; it < opts.power_iters; ++it) {
    Matrix z = orthonormal_basis(m.transpose() * q);
    q = orthonormal_basis(m * z);
  }

  const Matrix projected = q.transpose() * m;  // width x n
  Eigen::BDCSVD<Matrix> dec(projected,
                            Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NonConvergenceError("randomized_svd: inner svd did not converge for " +
                              dims(projected) + " matrix");
  }
  const Index k = opts.target_rank;
  SvdResult r{q * dec.matrixU().leftCols(k), dec.singularValues().head(k),
              dec.matrixV().leftCols(k)};
  normalize_signs(r);
  return r;
}

double vector_norm(const Eigen::Ref<const Vector>& x, NormOrder p) {
  switch (p) {
    case NormOrder::one:
      return x.lpNorm<1>();
    case NormOrder::two:
      return x.norm();
    case NormOrder::inf:
      return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

Vector singular_values(const Matrix& m) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw DimensionError("singular_values: empty matrix " + dims(m));
  }
  require_finite(m, "singular_values");
  Eigen::BDCSVD<Matrix> dec(m);
  if (dec.info() != Eigen::Success) {
    throw NonConvergenceError("svd did not converge for " + dims(m) +
                              " matrix");
  }
  return dec.singularValues();
}

double schatten_norm(const Matrix& m, NormOrder p) {
  return vector_norm(singular_values(m), p);
}

double spectral_norm(const Matrix& m) {
  return singular_values(m)(0);
}

}  // namespace ssdrbm
