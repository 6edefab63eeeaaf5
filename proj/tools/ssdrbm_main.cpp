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

// Command line front end: train, eval, bench, verify, gen-data.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ssdrbm/checkpoint.hpp"
#include "ssdrbm/config.hpp"
#include "ssdrbm/data.hpp"
#include "ssdrbm/errors.hpp"
#include "ssdrbm/runner.hpp"
#include "ssdrbm/verify.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitVerify = 4;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool deterministic = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key=value run configuration");
  cmd->add_option("--seed", f.seed, "overrides the configured seed");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_flag("--deterministic", f.deterministic,
                "bit-reproducible run (wallclock column written as 0)");
}

ssdrbm::RunConfig resolve(const CommonFlags& f) {
  ssdrbm::RunConfig c =
      f.config.empty() ? ssdrbm::RunConfig{} : ssdrbm::load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (!f.out.empty()) c.out = f.out;
  if (f.deterministic) c.deterministic = true;
  c.validate();
  return c;
}

std::filesystem::path ensure_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
  return dir;
}

int run_train(const CommonFlags& f) {
  const ssdrbm::RunConfig c = resolve(f);
  const ssdrbm::TrainResult r = ssdrbm::run_train(c);
  const ssdrbm::MetricsRecord& last = r.metrics.back();
  std::cout << "iterations " << last.iter << ", train_recon_sse "
            << last.train_recon_sse << ", test_recon_sse "
            << last.test_recon_sse << "\nwrote " << c.out << "/metrics.csv and "
            << c.out << "/final.ckpt\n";
  return 0;
}

int run_eval(const CommonFlags& f, const std::string& checkpoint) {
  const ssdrbm::RunConfig c = resolve(f);
  const std::string path =
      checkpoint.empty() ? (std::filesystem::path(c.out) / "final.ckpt").string()
                         : checkpoint;
  const ssdrbm::RbmParams params = ssdrbm::load_checkpoint(path);
  const ssdrbm::RunData data = ssdrbm::load_run_data(c);
  const ssdrbm::MetricsRecord r = ssdrbm::evaluate(params, data, c.seed);
  std::cout << ssdrbm::kMetricsHeader << '\n'
            << ssdrbm::format_metrics_row(r) << '\n';
  return 0;
}

int run_bench(const CommonFlags& f, std::int64_t iters, int repeats,
              bool baseline) {
  const ssdrbm::RunConfig c = resolve(f);
  const ssdrbm::RunData data = ssdrbm::load_run_data(c);
  std::vector<ssdrbm::OptimizerPolicy> policies = {c.policy};
  if (baseline) {
    ssdrbm::OptimizerPolicy sgd = c.policy;
    for (ssdrbm::BlockPolicy* b : {&sgd.w, &sgd.b, &sgd.a, &sgd.cov}) {
      b->rule = ssdrbm::UpdateRule::sgd;
    }
    if (sgd.label() != c.policy.label()) policies.push_back(sgd);
  }
  const auto rows = ssdrbm::bench(c, data, policies, iters, repeats);
  ssdrbm::write_bench_csv(std::cout, rows);
  if (!f.out.empty()) {
    std::ofstream file(ensure_dir(c.out) / "bench.csv");
    ssdrbm::write_bench_csv(file, rows);
  }
  return 0;
}

int run_verify(const CommonFlags& f, std::optional<std::int64_t> trials,
               double delta_scale) {
  ssdrbm::VerifyOptions opts;
  if (!f.config.empty()) opts.seed = ssdrbm::load_config(f.config).seed;
  if (f.seed) opts.seed = *f.seed;
  opts.trials = trials;
  opts.delta_scale = delta_scale;
  const auto reports = ssdrbm::run_bound_suite(opts);
  ssdrbm::write_bound_csv(std::cout, reports);
  if (!f.out.empty()) {
    std::ofstream file(ensure_dir(f.out) / "verify.csv");
    ssdrbm::write_bound_csv(file, reports);
  }
  for (const auto& r : reports) {
    if (r.violations > 0) return kExitVerify;
  }
  return 0;
}

int run_gen_data(const CommonFlags& f) {
  const ssdrbm::RunConfig c = resolve(f);
  if (c.dataset != ssdrbm::DatasetSource::synthetic) {
    throw ssdrbm::ConfigError("gen-data needs dataset=synthetic");
  }
  ssdrbm::SyntheticSpec spec;
  spec.seed = c.seed;
  spec.n_visible = c.n_visible;
  spec.n_hidden = c.n_hidden;
  spec.n_train = c.n_train;
  spec.n_test = c.n_test;
  spec.burn_in = c.burn_in;
  spec.weight_variance = c.truth_variance;
  const ssdrbm::SyntheticData d = ssdrbm::generate_synthetic(spec);
  const std::filesystem::path dir = ensure_dir(c.out);
  ssdrbm::write_matrix_file(dir / "train.rbmmat", d.train);
  ssdrbm::write_matrix_file(dir / "test.rbmmat", d.test);
  ssdrbm::save_checkpoint(dir / "truth.ckpt", d.truth);
  std::cout << "wrote " << (dir / "train.rbmmat").string() << ", "
            << (dir / "test.rbmmat").string() << ", "
            << (dir / "truth.ckpt").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Train and analyse RBMs with SGD or stochastic spectral descent"};
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* train = app.add_subcommand("train", "train a model");
  add_common(train, flags);

  CLI::App* eval = app.add_subcommand("eval", "reconstruction error of a checkpoint");
  add_common(eval, flags);
  std::string checkpoint;
  eval->add_option("--checkpoint", checkpoint,
                   "checkpoint to evaluate (default <out>/final.ckpt)");

  CLI::App* bench = app.add_subcommand("bench", "time training iterations");
  add_common(bench, flags);
  std::int64_t bench_iters = 1000;
  int repeats = 3;
  bool baseline = true;
  bench->add_option("--iters", bench_iters, "iterations per repetition");
  bench->add_option("--repeats", repeats, "repetitions; the fastest is kept");
  bench->add_flag("!--no-baseline", baseline, "skip the all-SGD baseline row");

  CLI::App* verify = app.add_subcommand("verify", "run the bound suite");
  add_common(verify, flags);
  std::optional<std::int64_t> trials;
  double delta_scale = 1.0;
  verify->add_option("--trials", trials, "trials per bound (default: per bound)");
  verify->add_option("--delta-scale", delta_scale,
                     "perturbation multiplier; 0 checks at delta = 0");

  CLI::App* gen = app.add_subcommand("gen-data", "write a synthetic dataset");
  add_common(gen, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*train) return run_train(flags);
    if (*eval) return run_eval(flags, checkpoint);
    if (*bench) return run_bench(flags, bench_iters, repeats, baseline);
    if (*verify) return run_verify(flags, trials, delta_scale);
    if (*gen) return run_gen_data(flags);
  } catch (const ssdrbm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ssdrbm::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ssdrbm::DimensionError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
