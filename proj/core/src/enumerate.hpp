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

#ifndef SSDRBM_SRC_ENUMERATE_HPP
#define SSDRBM_SRC_ENUMERATE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ssdrbm/errors.hpp"
#include "ssdrbm/linalg.hpp"
#include "ssdrbm/model.hpp"

namespace ssdrbm::detail {

inline constexpr Index kEnumerationBlock = 4096;

inline void require_enumerable(Index units, const char* what) {
  if (units > kMaxEnumeratedUnits) {
    throw OracleScaleError(std::string(what) + ": enumerating " +
                           std::to_string(units) +
                           " binary units exceeds the oracle scale cap of " +
                           std::to_string(kMaxEnumeratedUnits));
  }
}

/// Calls fn(block) with consecutive blocks of all binary vectors of length
/// n; row r of a block holds the bits of its configuration index (bit k in
/// column k).
template <typename Fn>
void for_each_binary_block(Index n, Fn&& fn) {
  const Index total = Index{1} << n;
  for (Index start = 0; start < total; start += kEnumerationBlock) {
    const Index rows = std::min(kEnumerationBlock, total - start);
    Matrix block(rows, n);
    for (Index r = 0; r < rows; ++r) {
      const auto config = static_cast<std::uint64_t>(start + r);
      for (Index k = 0; k < n; ++k) {
        block(r, k) = static_cast<double>((config >> k) & 1U);
      }
    }
    fn(block);
  }
}

/// Streaming log-sum-exp accumulator.
class LogSumExp {
 public:
  void add(double x) {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }
  void add(const Vector& xs) {
    for (Index i = 0; i < xs.size(); ++i) add(xs(i));
  }
  double value() const { return max_ + std::log(sum_); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

/// Which layer the Bernoulli oracle enumerates.
inline bool bernoulli_enumerates_hidden(const RbmParams& p) {
  return p.n_hidden() <= p.n_visible();
}

/// Unnormalised log-weights of enumerated configurations (marginalising the
/// other layer). Gaussian: hidden configurations with the visible integral
/// done in closed form. Bernoulli: see bernoulli_enumerates_hidden.
class EnumerationWeights {
 public:
  explicit EnumerationWeights(const RbmParams& p);

  Index units() const { return units_; }
  Vector log_weights(const Matrix& configs) const;

 private:
  const RbmParams& p_;
  Index units_;
  bool over_hidden_;
  Vector linear_;      // gaussian: W^T C^{-1} b
  Matrix quadratic_;   // gaussian: W^T C^{-1} W
  double constant_ = 0.0;
};

}  // namespace ssdrbm::detail

#endif  // SSDRBM_SRC_ENUMERATE_HPP
