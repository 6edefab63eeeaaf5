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

#include "ssdrbm/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>

#include "ssdrbm/checkpoint.hpp"
#include "ssdrbm/errors.hpp"
#include "ssdrbm/gradient.hpp"
#include "ssdrbm/optimizer.hpp"
#include "ssdrbm/sampler.hpp"

namespace ssdrbm {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Dataset load_source(const RunConfig& c, const std::string& path) {
  return c.dataset == DatasetSource::idx ? load_idx(path)
                                         : load_matrix_file(path);
}

Dataset prepare(const RunConfig& c, Dataset ds, std::uint64_t binarize_seed) {
  BinarizeKind kind = c.binarize;
  if (kind == BinarizeKind::automatic) {
    kind = c.family == Family::bernoulli && ds.domain != Domain::binary
               ? BinarizeKind::threshold
               : BinarizeKind::none;
  }
  if (kind == BinarizeKind::threshold || kind == BinarizeKind::stochastic) {
    BinarizeMode mode;
    mode.kind = kind == BinarizeKind::threshold
                    ? BinarizeMode::Kind::threshold
                    : BinarizeMode::Kind::stochastic;
    mode.threshold = c.threshold;
    mode.seed = binarize_seed;
    ds = binarize(ds, mode);
  }
  if (c.family == Family::bernoulli && ds.domain != Domain::binary) {
    throw DataError(DataError::Kind::domain_violation,
                    ds.name + ": bernoulli models need binary data");
  }
  return ds;
}

// One optimisation stream: minibatching, sampling, gradient and update.
class Trainer {
 public:
  Trainer(const RunConfig& config, const Dataset& train, RbmParams init,
          OptimizerPolicy policy)
      : config_(config),
        train_(train),
        policy_(std::move(policy)),
        params_(std::move(init)),
        state_(MomentumState::zeros_like(params_)),
        rng_(RngStream(config.seed).fork(stream_tag::kTrain)),
        plan_(train.size(), config.batch_size, config.seed, 0),
        last_dw_(Matrix::Zero(params_.n_visible(), params_.n_hidden())) {}

  void step() {
    if (batch_ == plan_.batch_count()) {
      ++epoch_;
      batch_ = 0;
      plan_ = MinibatchPlan(train_.size(), config_.batch_size, config_.seed,
                            epoch_);
    }
    const DataBatch batch = plan_.batch(train_, batch_++);
    GradientSet grads;
    if (config_.cd_mode == CdMode::cd) {
      const CdResult cd = cd_k(params_, batch, config_.cd_k, rng_);
      grads = estimate_gradients(params_, cd.positive, cd.negative);
    } else {
      if (!chains_) chains_ = init_persistent_chains(params_, batch, rng_);
      PcdResult pcd_out = pcd(params_, *chains_, config_.cd_k, rng_);
      chains_ = std::move(pcd_out.chains);
      const PhaseSamples positive{batch, hidden_probs(params_, batch)};
      grads = estimate_gradients(params_, positive, pcd_out.negative);
    }
    UpdateResult next = apply_update(params_, grads, policy_, state_, iter_);
    params_ = std::move(next.params);
    state_ = std::move(next.state);
    last_dw_ = std::move(grads.dW);
    ++iter_;
  }

  const RbmParams& params() const { return params_; }
  const Matrix& last_dw() const { return last_dw_; }
  std::int64_t iter() const { return iter_; }
  std::int64_t completed_epochs() const {
    return iter_ / static_cast<std::int64_t>(plan_.batch_count());
  }

 private:
  const RunConfig& config_;
  const Dataset& train_;
  OptimizerPolicy policy_;
  RbmParams params_;
  MomentumState state_;
  RngStream rng_;
  MinibatchPlan plan_;
  std::int64_t epoch_ = 0;
  Index batch_ = 0;
  std::int64_t iter_ = 0;
  std::optional<ChainState> chains_;
  Matrix last_dw_;
};

}  // namespace

std::string format_metrics_row(const MetricsRecord& r) {
  return std::to_string(r.iter) + ',' + std::to_string(r.epoch) + ',' +
         fmt(r.wallclock_ms) + ',' + fmt(r.train_recon_sse) + ',' +
         fmt(r.test_recon_sse) + ',' + fmt(r.grad_w_nuclear) + ',' +
         fmt(r.step_size);
}

RunData load_run_data(const RunConfig& c) {
  c.validate();
  RunData out;
  if (c.dataset == DatasetSource::synthetic) {
    SyntheticSpec spec;
    spec.seed = c.seed;
    spec.n_visible = c.n_visible;
    spec.n_hidden = c.n_hidden;
    spec.n_train = c.n_train;
    spec.n_test = c.n_test;
    spec.burn_in = c.burn_in;
    spec.weight_variance = c.truth_variance;
    SyntheticData synth = generate_synthetic(spec);
    out.train = std::move(synth.train);
    out.test = std::move(synth.test);
    return out;
  }
  out.train = prepare(c, load_source(c, c.train_path), c.seed);
  if (!c.test_path.empty()) {
    out.test = prepare(c, load_source(c, c.test_path), mix64(c.seed, 1));
    if (out.test->n_visible() != out.train.n_visible()) {
      throw DataError(DataError::Kind::bad_dimensions,
                      "test set has " + std::to_string(out.test->n_visible()) +
                          " columns, train set has " +
                          std::to_string(out.train.n_visible()));
    }
  }
  return out;
}

RbmParams initial_params(const RunConfig& c, Index n_visible) {
  if (!c.init_checkpoint.empty()) {
    RbmParams p = load_checkpoint(c.init_checkpoint);
    if (p.family != c.family || p.cov_kind() != c.covariance ||
        p.n_hidden() != c.n_hidden || p.n_visible() != n_visible) {
      throw ConfigError("init_checkpoint '" + c.init_checkpoint +
                        "' does not match the configured model");
    }
    return p;
  }
  RbmParams p = RbmParams::zeros(c.family, n_visible, c.n_hidden, c.covariance);
  SplitMix64 gen = RngStream(c.seed).fork(stream_tag::kInit).next_engine();
  std::normal_distribution<double> normal(0.0, c.init_scale);
  for (Index j = 0; j < p.W.cols(); ++j) {
    for (Index i = 0; i < p.W.rows(); ++i) {
      p.W(i, j) = c.init_scale > 0.0 ? normal(gen) : 0.0;
    }
  }
  return p;
}

MetricsRecord evaluate(const RbmParams& params, const RunData& data,
                       std::uint64_t seed) {
  if (data.train.n_visible() != params.n_visible()) {
    throw DimensionError("evaluate: model has " +
                         std::to_string(params.n_visible()) +
                         " visible units, dataset has " +
                         std::to_string(data.train.n_visible()));
  }
  const RngStream root(seed);
  MetricsRecord r;
  RngStream train_rng = root.fork(stream_tag::kEvalTrain);
  r.train_recon_sse =
      reconstruction_sse(params, data.train.examples, train_rng);
  r.test_recon_sse = std::numeric_limits<double>::quiet_NaN();
  if (data.test) {
    RngStream test_rng = root.fork(stream_tag::kEvalTest);
    r.test_recon_sse = reconstruction_sse(params, data.test->examples, test_rng);
  }
  return r;
}

TrainResult train(const RunConfig& config, const RunData& data,
                  const TrainSinks& sinks) {
  config.validate();
  validate_dataset(data.train);
  Trainer trainer(config, data.train,
                  initial_params(config, data.train.n_visible()),
                  config.policy);
  TrainResult out{trainer.params(), {}};
  if (sinks.metrics) *sinks.metrics << kMetricsHeader << '\n' << std::flush;
  if (sinks.timing) *sinks.timing << "iter,wallclock_ms\n" << std::flush;

  const Clock::time_point start = Clock::now();
  auto emit = [&](double step) {
    MetricsRecord r = evaluate(trainer.params(), data, config.seed);
    const double ms = elapsed_ms(start);
    r.iter = trainer.iter();
    r.epoch = trainer.completed_epochs();
    r.wallclock_ms = config.deterministic ? 0.0 : ms;
    r.grad_w_nuclear =
        trainer.iter() == 0 ? 0.0 : schatten_norm(trainer.last_dw(), NormOrder::one);
    r.step_size = step;
    if (sinks.metrics) {
      *sinks.metrics << format_metrics_row(r) << '\n' << std::flush;
    }
    if (sinks.timing) {
      *sinks.timing << r.iter << ',' << fmt(ms) << '\n' << std::flush;
    }
    out.metrics.push_back(r);
  };

  emit(step_size(config.policy.w.schedule, 0));
  for (std::int64_t t = 0; t < config.iterations; ++t) {
    const double step = step_size(config.policy.w.schedule, t);
    trainer.step();
    if (trainer.iter() % config.eval_interval == 0 ||
        trainer.iter() == config.iterations) {
      emit(step);
    }
  }
  out.params = trainer.params();
  return out;
}

TrainResult run_train(const RunConfig& config) {
  config.validate();
  const RunData data = load_run_data(config);
  const std::filesystem::path dir(config.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw DataError(DataError::Kind::io,
                    "cannot create output directory '" + dir.string() + "'");
  }
  {
    std::ofstream cfg(dir / "config.txt");
    cfg << render_config(config);
  }
  std::ofstream metrics(dir / "metrics.csv", std::ios::trunc);
  if (!metrics) {
    throw DataError(DataError::Kind::io, "cannot write metrics.csv");
  }
  std::ofstream timing;
  TrainSinks sinks{&metrics, nullptr};
  if (config.deterministic) {
    timing.open(dir / "timing.csv", std::ios::trunc);
    sinks.timing = &timing;
  }
  TrainResult result = train(config, data, sinks);
  save_checkpoint(dir / "final.ckpt", result.params);
  return result;
}

std::vector<BenchRow> bench(const RunConfig& config, const RunData& data,
                            const std::vector<OptimizerPolicy>& policies,
                            std::int64_t iters, int repeats) {
  config.validate();
  if (iters < 1) throw ConfigError("bench: iterations must be >= 1");
  if (repeats < 1) throw ConfigError("bench: repeats must be >= 1");
  const RbmParams init = initial_params(config, data.train.n_visible());
  std::vector<double> best(policies.size(),
                           std::numeric_limits<double>::infinity());
  for (int rep = 0; rep < repeats; ++rep) {
    for (std::size_t i = 0; i < policies.size(); ++i) {
      policies[i].validate();
      Trainer trainer(config, data.train, init, policies[i]);
      const Clock::time_point start = Clock::now();
      for (std::int64_t t = 0; t < iters; ++t) trainer.step();
      best[i] = std::min(best[i], elapsed_ms(start));
    }
  }
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < policies.size(); ++i) {
    rows.push_back({policies[i].label(), to_string(config.family),
                    best[i] * 1000.0 / static_cast<double>(iters)});
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "optimizer,family,ms_per_1k\n";
  char buf[40];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.3f", r.ms_per_1k);
    out << r.optimizer << ',' << r.family << ',' << buf << '\n';
  }
}

}  // namespace ssdrbm
