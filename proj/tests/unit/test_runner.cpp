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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssdrbm/checkpoint.hpp"
#include "ssdrbm/config.hpp"
#include "ssdrbm/data.hpp"
#include "ssdrbm/errors.hpp"
#include "ssdrbm/runner.hpp"

namespace ssdrbm {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ssdrbm_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig small_config(const fs::path& out) {
  RunConfig c = parse_config(
      "visible = 8\nhidden = 3\nn_train = 40\nn_test = 10\nburn_in = 10\n"
      "batch_size = 10\niterations = 25\neval_interval = 10\n"
      "optimizer = ssd\nstep = 0.01\ndeterministic = true\n");
  c.out = out.string();
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(SSDRBM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Metrics, RowFormat) {
  MetricsRecord r{3, 1, 0.0, 1.5, 2.25, 0.125, 0.01};
  EXPECT_EQ(format_metrics_row(r), "3,1,0,1.5,2.25,0.125,0.01");
  EXPECT_EQ(kMetricsHeader,
            "iter,epoch,wallclock_ms,train_recon_sse,test_recon_sse,"
            "grad_w_nuclear,step_size");
}

TEST(Train, ZeroIterationsEmitsOnlyInitialRow) {
  RunConfig c = small_config(scratch("zero"));
  c.iterations = 0;
  const RunData data = load_run_data(c);
  const TrainResult r = train(c, data);
  ASSERT_EQ(r.metrics.size(), 1u);
  EXPECT_EQ(r.metrics[0].iter, 0);
  EXPECT_EQ(r.params.W, initial_params(c, 8).W);
}

TEST(Train, RowsAtIntervalAndEnd) {
  const RunConfig c = small_config(scratch("rows"));
  const TrainResult r = train(c, load_run_data(c));
  ASSERT_EQ(r.metrics.size(), 4u);
  EXPECT_EQ(r.metrics[1].iter, 10);
  EXPECT_EQ(r.metrics[3].iter, 25);
  EXPECT_EQ(r.metrics[3].epoch, 6);
  EXPECT_GT(r.metrics[3].grad_w_nuclear, 0.0);
}

TEST(Train, EvaluateReproducesLastRow) {
  const RunConfig c = small_config(scratch("eval"));
  const RunData data = load_run_data(c);
  const TrainResult r = train(c, data);
  const MetricsRecord e = evaluate(r.params, data, c.seed);
  EXPECT_EQ(e.train_recon_sse, r.metrics.back().train_recon_sse);
  EXPECT_EQ(e.test_recon_sse, r.metrics.back().test_recon_sse);
}

TEST(Train, EvaluateRejectsMismatchedModel) {
  const RunConfig c = small_config(scratch("mismatch"));
  const RunData data = load_run_data(c);
  EXPECT_THROW(evaluate(RbmParams::zeros(Family::bernoulli, 5, 3), data, 1),
               DimensionError);
}

TEST(Train, UntrainedZeroModelErrorIsQuarterPerPixel) {
  RunConfig c = small_config(scratch("quarter"));
  c.n_visible = 50;
  c.n_train = 400;
  const RunData data = load_run_data(c);
  const MetricsRecord e =
      evaluate(RbmParams::zeros(Family::bernoulli, 50, 3), data, 9);
  // Zero parameters reconstruct every pixel as 1/2 against a 0/1 target.
  EXPECT_NEAR(e.train_recon_sse, 0.25 * 50.0, 1e-12);
  EXPECT_NEAR(e.test_recon_sse, 0.25 * 50.0, 1e-12);
}

TEST(Train, DeterministicRunsAreByteIdentical) {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  run_train(small_config(a));
  run_train(small_config(b));
  EXPECT_EQ(slurp(a / "metrics.csv"), slurp(b / "metrics.csv"));
  EXPECT_EQ(slurp(a / "final.ckpt"), slurp(b / "final.ckpt"));
  EXPECT_TRUE(fs::exists(a / "timing.csv"));
}

TEST(Train, ResumeWithZeroStepsIsBitIdentical) {
  const fs::path a = scratch("resume_a");
  const fs::path b = scratch("resume_b");
  run_train(small_config(a));
  RunConfig c = small_config(b);
  c.iterations = 0;
  c.init_checkpoint = (a / "final.ckpt").string();
  run_train(c);
  EXPECT_EQ(slurp(a / "final.ckpt"), slurp(b / "final.ckpt"));
}

TEST(Train, MismatchedInitCheckpointIsConfigError) {
  const fs::path a = scratch("init_mismatch");
  run_train(small_config(a));
  RunConfig c = small_config(a);
  c.n_hidden = 4;
  c.init_checkpoint = (a / "final.ckpt").string();
  EXPECT_THROW(initial_params(c, 8), ConfigError);
}

TEST(Train, BernoulliOnRealDataIsDataError) {
  const fs::path dir = scratch("real_data");
  write_matrix_file(dir / "real.rbmmat",
                    Dataset{"r", Domain::real, Matrix::Constant(4, 3, -0.5)});
  RunConfig c = small_config(dir);
  c.dataset = DatasetSource::matrix;
  c.train_path = (dir / "real.rbmmat").string();
  EXPECT_THROW(load_run_data(c), DataError);
}

TEST(Bench, ZeroIterationsIsError) {
  const RunConfig c = small_config(scratch("bench0"));
  const RunData data = load_run_data(c);
  EXPECT_THROW(bench(c, data, {c.policy}, 0), ConfigError);
  const auto rows = bench(c, data, {c.policy}, 5, 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].optimizer, "ssd");
  EXPECT_EQ(rows[0].family, "bernoulli");
  std::ostringstream s;
  write_bench_csv(s, rows);
  EXPECT_EQ(s.str().rfind("optimizer,family,ms_per_1k\nssd,bernoulli,", 0), 0u);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  {
    std::ofstream cfg(dir / "good.cfg");
    cfg << "visible = 6\nhidden = 2\nn_train = 20\nn_test = 5\nburn_in = 5\n"
           "batch_size = 5\niterations = 4\neval_interval = 2\n";
    std::ofstream bad(dir / "bad.cfg");
    bad << "hidden = -3\n";
    std::ofstream missing(dir / "missing.cfg");
    missing << "dataset = idx\ntrain_path = " << (dir / "nope.idx").string()
            << "\n";
  }
  const std::string out = " --out " + (dir / "run").string();
  EXPECT_EQ(run_cli("train --config " + (dir / "good.cfg").string() + out +
                    " --deterministic --seed 3"),
            0);
  EXPECT_TRUE(fs::exists(dir / "run" / "metrics.csv"));
  EXPECT_EQ(run_cli("eval --config " + (dir / "good.cfg").string() + out +
                    " --seed 3"),
            0);
  EXPECT_EQ(run_cli("train --config " + (dir / "bad.cfg").string() + out), 2);
  EXPECT_EQ(run_cli("train --config " + (dir / "missing.cfg").string() + out),
            3);
  EXPECT_EQ(run_cli("train --no-such-flag"), 2);
  EXPECT_EQ(run_cli("verify --trials 3 --seed 2" + out), 0);
  EXPECT_TRUE(fs::exists(dir / "run" / "verify.csv"));
  EXPECT_EQ(run_cli("bench --config " + (dir / "good.cfg").string() +
                    " --iters 0"),
            2);
  EXPECT_EQ(run_cli("gen-data --config " + (dir / "good.cfg").string() +
                    " --out " + (dir / "gen").string()),
            0);
  EXPECT_TRUE(fs::exists(dir / "gen" / "train.rbmmat"));
}

}  // namespace
}  // namespace ssdrbm
