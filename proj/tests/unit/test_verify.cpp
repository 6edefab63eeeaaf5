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
#include <sstream>

#include "common/test_util.hpp"
#include "ssdrbm/errors.hpp"
#include "ssdrbm/optimizer.hpp"
#include "ssdrbm/verify.hpp"

namespace ssdrbm {
namespace {

using testing::gaussian_matrix;
using testing::gaussian_vector;

constexpr double kSqrt15 = 3.872983346207417;

TEST(LseBound, ZeroPerturbationIsTight) {
  SplitMix64 gen(1);
  const Vector w = gaussian_vector(5, gen).cwiseAbs();
  const Vector x = gaussian_vector(5, gen);
  const BoundReport r = check_lse_bound(w, x, Vector::Zero(5));
  EXPECT_EQ(r.violations, 0);
  EXPECT_NEAR(r.min_slack, 0.0, 1e-14);
}

TEST(LseBound, ConstantShiftSlackIsHalfSquare) {
  SplitMix64 gen(2);
  const Vector w = gaussian_vector(4, gen).cwiseAbs();
  const Vector x = gaussian_vector(4, gen);
  const double c = 0.7;
  const BoundReport r = check_lse_bound(w, x, Vector::Constant(4, c));
  EXPECT_NEAR(r.min_slack, 0.5 * c * c, 1e-12);
  EXPECT_NEAR(lse(w, x + Vector::Constant(4, c)), lse(w, x) + c, 1e-12);
}

TEST(Lse2Bound, ScalarSingleTerm) {
  const Vector w = Vector::Ones(1);
  const Vector x = Vector::Zero(1);
  const double d = 0.6;
  const double r = 1.0;
  const BoundReport rep = check_lse2_bound(w, x, Vector::Constant(1, d), r);
  EXPECT_EQ(rep.violations, 0);
  EXPECT_NEAR(rep.min_slack, (0.5 + 0.75 * r * r) * d * d - 0.5 * d * d,
              1e-12);
}

TEST(Lse2Bound, OutsideBallThrows) {
  const Vector w = Vector::Ones(2);
  EXPECT_THROW(check_lse2_bound(w, Vector::Constant(2, 2.0), Vector::Zero(2), 1.0),
               PreconditionError);
  EXPECT_THROW(check_lse2_bound(w, Vector::Zero(2), Vector::Constant(2, 2.0), 1.0),
               PreconditionError);
}

TEST(BoundReport, RecordsSlackAndViolations) {
  BoundReport r{"x"};
  r.record(1.0, 2.0);
  r.record(1.0, 1.5);
  EXPECT_EQ(r.trials, 2);
  EXPECT_EQ(r.violations, 0);
  EXPECT_DOUBLE_EQ(r.max_slack, 1.0);
  EXPECT_DOUBLE_EQ(r.min_slack, 0.5);
  r.record(1.0 + 1e-12, 1.0);
  EXPECT_EQ(r.violations, 0);
  r.record(1.1, 1.0);
  EXPECT_EQ(r.violations, 1);
  EXPECT_FALSE(r.passed());
}

TEST(PartitionGradient, MatchesFiniteDifferences) {
  SplitMix64 gen(3);
  const RbmParams p = random_bound_model(3, 2, kSqrt15, gen);
  const GradientSet g = partition_gradient(p);
  const double h = 1e-5;
  auto fd = [&](auto&& shift) {
    RbmParams up = p;
    RbmParams dn = p;
    shift(up, h);
    shift(dn, -h);
    return (exact_log_partition(up) - exact_log_partition(dn)) / (2 * h);
  };
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 2; ++j) {
      EXPECT_NEAR(fd([&](RbmParams& q, double s) { q.W(i, j) += s; }),
                  g.dW(i, j), 1e-6);
    }
    EXPECT_NEAR(fd([&](RbmParams& q, double s) { q.b(i) += s; }), g.db(i),
                1e-6);
  }
  for (Index j = 0; j < 2; ++j) {
    EXPECT_NEAR(fd([&](RbmParams& q, double s) { q.a(j) += s; }), g.da(j),
                1e-6);
  }
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j <= i; ++j) {
      const double d = fd([&](RbmParams& q, double s) {
        Matrix m = q.cov->full_precision();
        m(i, j) += s;
        if (i != j) m(j, i) += s;
        q.cov = CovarianceModel::full(m);
      });
      EXPECT_NEAR(d, (i == j ? 1.0 : 2.0) * g.dcov(i, j), 1e-6);
    }
  }
}

TEST(PartitionBound, ZeroPerturbationIsTightForEveryBlock) {
  SplitMix64 gen(4);
  const RbmParams p = random_bound_model(4, 3, kSqrt15, gen);
  for (ParamBlock block :
       {ParamBlock::a, ParamBlock::b, ParamBlock::W, ParamBlock::cov}) {
    Matrix zero;
    switch (block) {
      case ParamBlock::a: zero = Matrix::Zero(3, 1); break;
      case ParamBlock::b: zero = Matrix::Zero(4, 1); break;
      case ParamBlock::W: zero = Matrix::Zero(4, 3); break;
      case ParamBlock::cov: zero = Matrix::Zero(4, 4); break;
    }
    const BoundReport r = check_partition_bound(p, block, zero, kSqrt15);
    EXPECT_EQ(r.violations, 0) << to_string(block);
    EXPECT_NEAR(r.min_slack, 0.0, 1e-12) << to_string(block);
  }
}

TEST(PartitionBound, HiddenBiasConstantIsHalfNh) {
  SplitMix64 gen(5);
  const RbmParams p = random_bound_model(4, 3, kSqrt15, gen);
  EXPECT_DOUBLE_EQ(partition_bound_constant(p, ParamBlock::a, kSqrt15), 1.5);
}

TEST(PartitionBound, RandomHiddenBiasPerturbations) {
  SplitMix64 gen(6);
  BoundReport total{"logz_hidden_bias"};
  for (int t = 0; t < 200; ++t) {
    const RbmParams p = random_bound_model(4, 3, kSqrt15, gen);
    Matrix da = gaussian_matrix(3, 1, gen);
    da /= da.cwiseAbs().maxCoeff();
    total.merge(check_partition_bound(p, ParamBlock::a, da, kSqrt15));
  }
  EXPECT_EQ(total.violations, 0);
  EXPECT_EQ(total.trials, 200);
}

TEST(PartitionBound, Preconditions) {
  SplitMix64 gen(7);
  const RbmParams p = random_bound_model(4, 3, 1.0, gen);
  EXPECT_THROW(check_partition_bound(p, ParamBlock::W, 5.0 * Matrix::Ones(4, 3), 1.0),
               PreconditionError);
  EXPECT_THROW(check_partition_bound(p, ParamBlock::cov, -Matrix::Identity(4, 4), 1.0),
               PreconditionError);
  const RbmParams bern = testing::random_bernoulli(4, 3, gen);
  EXPECT_THROW(check_partition_bound(bern, ParamBlock::a, Matrix::Zero(3, 1), 1.0),
               PreconditionError);
}

// Bounds are second order: the slack at a tiny perturbation is tiny.
TEST(PartitionBound, SlackVanishesForSmallPerturbations) {
  SplitMix64 gen(8);
  RbmParams p = random_bound_model(4, 3, 1.0, gen);
  p.cov = CovarianceModel::full(Matrix::Identity(4, 4));
  p.b *= 0.1;
  const double h = 1e-4;
  for (int t = 0; t < 20; ++t) {
    Matrix da = gaussian_matrix(3, 1, gen);
    da *= h / da.cwiseAbs().maxCoeff();
    Matrix db = gaussian_matrix(4, 1, gen);
    db *= h / db.cwiseAbs().maxCoeff();
    Matrix dw = gaussian_matrix(4, 3, gen);
    dw *= h / spectral_norm(dw);
    const Matrix half = gaussian_matrix(4, 4, gen);
    Matrix dc = half * half.transpose();
    dc *= h / spectral_norm(dc);
    EXPECT_LE(check_partition_bound(p, ParamBlock::a, da, 1.0).max_slack, 1e-6);
    EXPECT_LE(check_partition_bound(p, ParamBlock::b, db, 1.0).max_slack, 1e-6);
    EXPECT_LE(check_partition_bound(p, ParamBlock::cov, dc, 1.0).max_slack, 1e-6);
    if (spectral_norm(p.W + dw) <= 1.0) {
      EXPECT_LE(check_partition_bound(p, ParamBlock::W, dw, 1.0).max_slack,
                1e-6);
    }
  }
}

TEST(GBounds, ZeroPerturbationAndIdentity) {
  SplitMix64 gen(9);
  const RbmParams p = random_bound_model(4, 3, kSqrt15, gen);
  const Matrix data = gaussian_matrix(6, 4, gen);
  const BoundReport ra = check_g_bounds(p, ParamBlock::a, Matrix::Zero(3, 1), data);
  EXPECT_NEAR(ra.min_slack, 0.0, 1e-12);
  for (int t = 0; t < 50; ++t) {
    const Vector db = gaussian_vector(4, gen);
    EXPECT_TRUE(check_g_b_identity(p, db, data).passed());
    EXPECT_TRUE(check_g_bounds(p, ParamBlock::b, db, data).passed());
    EXPECT_TRUE(
        check_g_bounds(p, ParamBlock::a, gaussian_matrix(3, 1, gen), data).passed());
    EXPECT_TRUE(
        check_g_bounds(p, ParamBlock::W, gaussian_matrix(4, 3, gen), data).passed());
  }
}

TEST(LogdetIdentity, RandomSpd) {
  SplitMix64 gen(10);
  for (Index n = 1; n <= 8; ++n) {
    const BoundReport r = check_logdet_identity(testing::random_spd(n, 0.1, 5.0, gen));
    EXPECT_TRUE(r.passed());
    EXPECT_GE(r.min_slack, -1e-10);
  }
}

TEST(SurrogateArgmin, DiagonalMatrixClosedForm) {
  Matrix g = Matrix::Zero(3, 3);
  g(0, 0) = 3.0;
  g(1, 1) = -1.0;
  g(2, 2) = 0.5;
  RngStream rng(1);
  const BoundReport r = surrogate_argmin_check(g, 2.0, 200, rng);
  EXPECT_TRUE(r.passed());
  // Minimizer -(||s||_1 / 2c) U V^T with U V^T = sign(diag(g)).
  const Matrix d = -(0.25) * ssd_matrix_direction(g, SvdMode{});
  EXPECT_NEAR(d(0, 0), -0.25 * 4.5, 1e-12);
  EXPECT_NEAR(d(1, 1), 0.25 * 4.5, 1e-12);
}

TEST(SurrogateArgmin, RandomVectorAndMatrixCases) {
  SplitMix64 gen(11);
  RngStream rng(2);
  for (int t = 0; t < 50; ++t) {
    EXPECT_TRUE(surrogate_argmin_check(gaussian_vector(6, gen), 0.8, 100, rng).passed());
    EXPECT_TRUE(surrogate_argmin_check(gaussian_matrix(5, 4, gen), 0.8, 100, rng).passed());
  }
  EXPECT_THROW(surrogate_argmin_check(gaussian_vector(3, gen), 0.0, 1, rng),
               PreconditionError);
}

TEST(BoundSuite, SeededRunIsDeterministicAndClean) {
  VerifyOptions opt;
  opt.seed = 3;
  opt.trials = 20;
  const auto a = run_bound_suite(opt);
  const auto b = run_bound_suite(opt);
  std::ostringstream sa, sb;
  write_bound_csv(sa, a);
  write_bound_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().rfind("bound_id,trials,violations,max_slack,min_slack\n", 0), 0u);
  for (const auto& r : a) EXPECT_TRUE(r.passed()) << r.id;
}

TEST(BoundSuite, ZeroDeltaScaleHasZeroSlack) {
  VerifyOptions opt;
  opt.trials = 5;
  opt.delta_scale = 0.0;
  for (const auto& r : run_bound_suite(opt)) {
    EXPECT_EQ(r.violations, 0) << r.id;
    if (r.id.find("_step_argmin") != std::string::npos) continue;
    EXPECT_NEAR(r.max_slack, 0.0, 1e-12) << r.id;
  }
}

}  // namespace
}  // namespace ssdrbm
