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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ssdrbm/errors.hpp"
#include "ssdrbm/gradient.hpp"
#include "ssdrbm/model.hpp"
#include "common/test_util.hpp"

namespace ssdrbm {
namespace {

using testing::gaussian_matrix;
using testing::gaussian_vector;
using testing::random_bernoulli;
using testing::random_binary;
using testing::random_gaussian;

constexpr double kLog2 = std::numbers::ln2;
constexpr double kLog2Pi = 1.8378770664093453;

Vector bits(Index n, std::uint64_t mask) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = static_cast<double>((mask >> i) & 1u);
  return v;
}

// log sum_{v,h} exp(-E(v, h)) by brute force over both layers.
double brute_log_partition(const RbmParams& p) {
  const Index nv = p.n_visible();
  const Index nh = p.n_hidden();
  double m = -1e300;
  std::vector<double> terms;
  for (std::uint64_t vm = 0; vm < (1u << nv); ++vm) {
    for (std::uint64_t hm = 0; hm < (1u << nh); ++hm) {
      terms.push_back(-energy(p, bits(nv, vm), bits(nh, hm)));
      m = std::max(m, terms.back());
    }
  }
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

// log sum_h exp(-E(v, h)).
double log_sum_over_hidden(const RbmParams& p, const Vector& v) {
  double s = 0.0;
  for (std::uint64_t hm = 0; hm < (1u << p.n_hidden()); ++hm) {
    s += std::exp(-energy(p, v, bits(p.n_hidden(), hm)));
  }
  return std::log(s);
}

// Trapezoid quadrature of sum_h exp(-E(v, h)) over a 2-D grid.
double quadrature_log_partition(const RbmParams& p, double half_width,
                                double step) {
  EXPECT_EQ(p.n_visible(), 2);
  const int n = static_cast<int>(std::lround(2 * half_width / step));
  double s = 0.0;
  Vector v(2);
  for (int i = 0; i <= n; ++i) {
    v(0) = -half_width + i * step;
    const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
    for (int j = 0; j <= n; ++j) {
      v(1) = -half_width + j * step;
      const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
      s += wi * wj * std::exp(log_sum_over_hidden(p, v));
    }
  }
  return std::log(s * step * step);
}

TEST(Energy, Examples) {
  RbmParams p = RbmParams::zeros(Family::bernoulli, 3, 2);
  EXPECT_EQ(energy(p, bits(3, 5), bits(2, 3)), 0.0);
  p.W(0, 0) = 2.0;
  EXPECT_EQ(energy(p, bits(3, 1), bits(2, 1)), -2.0);

  const RbmParams g = RbmParams::zeros(Family::gaussian, 3, 2);
  Vector v(3);
  v << 0.3, -1.2, 2.0;
  EXPECT_NEAR(energy(g, v, bits(2, 2)), 0.5 * v.squaredNorm(), 1e-15);
}

TEST(Energy, DimensionMismatchThrows) {
  const RbmParams p = RbmParams::zeros(Family::bernoulli, 3, 2);
  EXPECT_THROW(energy(p, bits(4, 0), bits(2, 0)), DimensionError);
}

TEST(Covariance, Invariants) {
  EXPECT_THROW(CovarianceModel::isotropic(3, 0.0), PreconditionError);
  EXPECT_THROW(CovarianceModel::isotropic(3, -1.0), PreconditionError);
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 0.1;
  EXPECT_THROW(CovarianceModel::full(asym), PreconditionError);
  Matrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  EXPECT_THROW(CovarianceModel::full(indefinite), PreconditionError);
  Vector logs(2);
  logs << 0.0, std::nan("");
  EXPECT_THROW(CovarianceModel::diagonal_log(logs), PreconditionError);

  SplitMix64 gen(3);
  const Matrix spd = testing::random_spd(4, 0.5, 2.0, gen);
  const CovarianceModel c = CovarianceModel::full(spd);
  EXPECT_LE((c.covariance_matrix() * spd - Matrix::Identity(4, 4))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
  EXPECT_NEAR(c.log_det_precision(), std::log(spd.determinant()), 1e-12);
}

TEST(HiddenProbs, ZeroParamsAreHalf) {
  const RbmParams p = RbmParams::zeros(Family::bernoulli, 4, 3);
  const Vector h = hidden_probs(p, bits(4, 9));
  for (Index k = 0; k < 3; ++k) EXPECT_EQ(h(k), 0.5);
}

TEST(HiddenProbs, IdentityGaussianMatchesBernoulliPreactivation) {
  SplitMix64 gen(4);
  const RbmParams g = random_gaussian(CovarianceKind::identity, 4, 3, gen);
  const RbmParams b = RbmParams::bernoulli(g.W, g.b, g.a);
  const Matrix v = random_binary(6, 4, gen);
  EXPECT_LE((hidden_probs(g, v) - hidden_probs(b, v)).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(HiddenProbs, MatchesEnumeratedConditional) {
  SplitMix64 gen(5);
  for (CovarianceKind kind : testing::kAllKinds) {
    const RbmParams p = random_gaussian(kind, 3, 2, gen, 1.0);
    const Vector v = gaussian_vector(3, gen);
    Vector on = Vector::Zero(2);
    double total = 0.0;
    for (std::uint64_t hm = 0; hm < 4; ++hm) {
      const Vector h = bits(2, hm);
      const double w = std::exp(-energy(p, v, h));
      total += w;
      on += w * h;
    }
    EXPECT_LE((hidden_probs(p, v) - on / total).cwiseAbs().maxCoeff(), 1e-10);
  }
  const RbmParams b = random_bernoulli(3, 2, gen, 1.0);
  const Vector v = bits(3, 6);
  Vector on = Vector::Zero(2);
  double total = 0.0;
  for (std::uint64_t hm = 0; hm < 4; ++hm) {
    const double w = std::exp(-energy(b, v, bits(2, hm)));
    total += w;
    on += w * bits(2, hm);
  }
  EXPECT_LE((hidden_probs(b, v) - on / total).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(VisibleConditional, Examples) {
  SplitMix64 gen(6);
  const RbmParams g = random_gaussian(CovarianceKind::full, 3, 2, gen);
  const VisibleConditional c = visible_conditional(g, Vector::Zero(2));
  EXPECT_LE((c.mean - g.b).cwiseAbs().maxCoeff(), 1e-15);
  ASSERT_TRUE(c.cov.has_value());

  const RbmParams b = RbmParams::zeros(Family::bernoulli, 3, 2);
  const VisibleConditional cb = visible_conditional(b, bits(2, 1));
  for (Index i = 0; i < 3; ++i) EXPECT_EQ(cb.mean(i), 0.5);
  EXPECT_FALSE(cb.cov.has_value());
}

// For fixed h, -E(v, h) + E(m, h) must equal -(v - m)^T C^{-1} (v - m) / 2
// when m is the conditional mean and C the conditional covariance.
TEST(VisibleConditional, GaussianDensityRatio) {
  SplitMix64 gen(7);
  for (CovarianceKind kind : testing::kAllKinds) {
    const RbmParams p = random_gaussian(kind, 3, 2, gen, 1.0);
    for (std::uint64_t hm = 0; hm < 4; ++hm) {
      const Vector h = bits(2, hm);
      const VisibleConditional c = visible_conditional(p, h);
      const Matrix prec = c.cov->precision_matrix();
      for (int t = 0; t < 5; ++t) {
        const Vector v = gaussian_vector(3, gen, 2.0);
        const Vector d = v - c.mean;
        EXPECT_NEAR(energy(p, c.mean, h) - energy(p, v, h),
                    -0.5 * d.dot(prec * d), 1e-10);
      }
    }
  }
}

TEST(NegDataTerm, Examples) {
  SplitMix64 gen(8);
  const RbmParams b = RbmParams::zeros(Family::bernoulli, 4, 3);
  EXPECT_NEAR(neg_data_term(b, random_binary(5, 4, gen)), -3 * kLog2, 1e-14);

  RbmParams g = RbmParams::zeros(Family::gaussian, 3, 2);
  g.b = gaussian_vector(3, gen);
  const Matrix data = gaussian_matrix(4, 3, gen);
  double expect = 0.0;
  for (Index n = 0; n < 4; ++n) {
    expect += 0.5 * (data.row(n).transpose() - g.b).squaredNorm();
  }
  EXPECT_NEAR(neg_data_term(g, data), expect / 4 - 2 * kLog2, 1e-13);
}

TEST(NegDataTerm, MatchesHiddenEnumeration) {
  SplitMix64 gen(9);
  auto check = [&](const RbmParams& p, const Matrix& data) {
    double expect = 0.0;
    for (Index n = 0; n < data.rows(); ++n) {
      expect -= log_sum_over_hidden(p, data.row(n).transpose());
    }
    EXPECT_NEAR(neg_data_term(p, data), expect / data.rows(), 1e-10);
  };
  for (CovarianceKind kind : testing::kAllKinds) {
    check(random_gaussian(kind, 3, 3, gen, 1.0), gaussian_matrix(5, 3, gen));
  }
  check(random_bernoulli(4, 3, gen, 1.0), random_binary(5, 4, gen));
}

TEST(NegDataTerm, SoftplusIsOverflowSafe) {
  EXPECT_EQ(softplus(1000.0), 1000.0);
  EXPECT_NEAR(softplus(-1000.0), 0.0, 1e-300);
  EXPECT_NEAR(softplus(0.0), kLog2, 1e-16);
  EXPECT_NEAR(softplus(3.0), std::log1p(std::exp(3.0)), 1e-15);
}

TEST(NegDataTerm, ConcaveInAAndWQuadraticInB) {
  SplitMix64 gen(10);
  for (CovarianceKind kind : testing::kAllKinds) {
    const RbmParams p = random_gaussian(kind, 4, 3, gen, 0.7);
    const Matrix data = gaussian_matrix(8, 4, gen);
    for (int t = 0; t < 20; ++t) {
      const double s = 0.3;
      const Vector da = gaussian_vector(3, gen) * s;
      RbmParams plus = p, minus = p;
      plus.a += da;
      minus.a -= da;
      EXPECT_LE(neg_data_term(plus, data) + neg_data_term(minus, data) -
                    2 * neg_data_term(p, data),
                1e-9);

      const Matrix dw = gaussian_matrix(4, 3, gen) * s;
      plus = p;
      minus = p;
      plus.W += dw;
      minus.W -= dw;
      EXPECT_LE(neg_data_term(plus, data) + neg_data_term(minus, data) -
                    2 * neg_data_term(p, data),
                1e-9);

      // Third forward difference along b vanishes for a quadratic.
      const Vector db = gaussian_vector(4, gen) * s;
      double third = 0.0;
      const double coeff[] = {-1, 3, -3, 1};
      for (int k = 0; k < 4; ++k) {
        RbmParams q = p;
        q.b += k * db;
        third += coeff[k] * neg_data_term(q, data);
      }
      EXPECT_NEAR(third, 0.0, 1e-8);
    }
  }
}

TEST(LogPartition, ClosedForms) {
  EXPECT_NEAR(exact_log_partition(RbmParams::zeros(Family::bernoulli, 5, 3)),
              8 * kLog2, 1e-12);
  EXPECT_NEAR(exact_log_partition(RbmParams::zeros(Family::bernoulli, 3, 6)),
              9 * kLog2, 1e-12);
  EXPECT_NEAR(exact_log_partition(RbmParams::zeros(Family::gaussian, 4, 3)),
              3 * kLog2 + 2 * kLog2Pi, 1e-12);
}

TEST(LogPartition, BernoulliMatchesJointEnumeration) {
  SplitMix64 gen(11);
  for (auto [nv, nh] : {std::pair<Index, Index>{4, 3}, {3, 5}, {6, 4}}) {
    const RbmParams p = random_bernoulli(nv, nh, gen, 1.0);
    EXPECT_NEAR(exact_log_partition(p), brute_log_partition(p), 1e-10);
  }
}

TEST(LogPartition, GaussianMatchesQuadrature) {
  SplitMix64 gen(12);
  for (CovarianceKind kind : testing::kAllKinds) {
    const RbmParams p = random_gaussian(kind, 2, 2, gen, 0.7);
    const double quad = quadrature_log_partition(p, 12.0, 0.04);
    const double exact = exact_log_partition(p);
    EXPECT_NEAR(exact, quad, 1e-4 * std::abs(exact));
    // Normalisation: the density integrates to one.
    EXPECT_NEAR(std::exp(quad - exact), 1.0, 1e-4);
  }
}

TEST(LogPartition, OracleScaleCap) {
  EXPECT_THROW(exact_log_partition(RbmParams::zeros(Family::gaussian, 2, 21)),
               OracleScaleError);
  EXPECT_THROW(exact_log_partition(RbmParams::zeros(Family::bernoulli, 22, 21)),
               OracleScaleError);
  EXPECT_NO_THROW(
      exact_log_partition(RbmParams::zeros(Family::bernoulli, 200, 12)));
}

TEST(ExactLoss, Examples) {
  SplitMix64 gen(13);
  const RbmParams zero = RbmParams::zeros(Family::bernoulli, 5, 3);
  EXPECT_NEAR(exact_loss(zero, random_binary(7, 5, gen)), 5 * kLog2, 1e-12);

  const RbmParams g = random_gaussian(CovarianceKind::full, 2, 2, gen, 0.7);
  const Matrix data = gaussian_matrix(3, 2, gen);
  const double log_z = quadrature_log_partition(g, 12.0, 0.04);
  double nll = 0.0;
  for (Index n = 0; n < 3; ++n) {
    nll -= log_sum_over_hidden(g, data.row(n).transpose()) - log_z;
  }
  EXPECT_NEAR(exact_loss(g, data), nll / 3, 1e-4 * std::abs(nll / 3));
}

TEST(ExactLoss, DecreasesUnderExactDescent) {
  SplitMix64 gen(14);
  RbmParams p = random_bernoulli(5, 3, gen, 0.3);
  const Matrix data = random_binary(10, 5, gen);
  double prev = exact_loss(p, data);
  for (int t = 0; t < 50; ++t) {
    const GradientSet g = exact_gradients(p, data);
    p.W -= 0.05 * g.dW;
    p.b -= 0.05 * g.db;
    p.a -= 0.05 * g.da;
    const double next = exact_loss(p, data);
    EXPECT_LT(next, prev);
    prev = next;
  }
}

TEST(ReconstructionSse, ZeroBernoulliIsQuarterPerPixel) {
  SplitMix64 gen(15);
  const RbmParams p = RbmParams::zeros(Family::bernoulli, 12, 4);
  RngStream rng(1);
  EXPECT_NEAR(reconstruction_sse(p, random_binary(50, 12, gen), rng), 3.0,
              1e-12);
}

TEST(ReconstructionSse, DeterministicUnderSeed) {
  SplitMix64 gen(16);
  const RbmParams p = random_bernoulli(8, 4, gen, 1.0);
  const Matrix data = random_binary(20, 8, gen);
  RngStream r1(42), r2(42);
  EXPECT_EQ(reconstruction_sse(p, data, r1), reconstruction_sse(p, data, r2));
}

TEST(ReconstructionSse, SaturatedModelReproducesData) {
  // v = 1 drives h = 1, which drives v back to 1.
  Matrix w = Matrix::Constant(4, 2, 40.0);
  const RbmParams p = RbmParams::bernoulli(w, Vector::Constant(4, -60.0),
                                           Vector::Constant(2, -60.0));
  RngStream rng(3);
  EXPECT_NEAR(reconstruction_sse(p, Matrix::Ones(6, 4), rng), 0.0, 1e-12);
}

TEST(ValidateBatch, RejectsNonBinaryBernoulli) {
  const RbmParams p = RbmParams::zeros(Family::bernoulli, 3, 2);
  Matrix data = Matrix::Zero(2, 3);
  data(1, 2) = 0.5;
  EXPECT_THROW(validate_batch(p, data), PreconditionError);
  EXPECT_THROW(validate_batch(p, Matrix::Zero(2, 4)), DimensionError);
}

}  // namespace
}  // namespace ssdrbm
