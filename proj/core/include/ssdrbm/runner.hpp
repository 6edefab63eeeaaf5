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

#ifndef SSDRBM_RUNNER_HPP
#define SSDRBM_RUNNER_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssdrbm/config.hpp"
#include "ssdrbm/data.hpp"
#include "ssdrbm/model.hpp"

namespace ssdrbm {

inline constexpr std::string_view kMetricsHeader =
    "iter,epoch,wallclock_ms,train_recon_sse,test_recon_sse,grad_w_nuclear,"
    "step_size";

/// One metrics row. test_recon_sse is NaN when no test set is configured.
struct MetricsRecord {
  std::int64_t iter = 0;
  std::int64_t epoch = 0;
  double wallclock_ms = 0.0;
  double train_recon_sse = 0.0;
  double test_recon_sse = 0.0;
  double grad_w_nuclear = 0.0;
  double step_size = 0.0;
};

/// Comma-separated values in header order, round-trip precision.
std::string format_metrics_row(const MetricsRecord& r);

struct RunData {
  Dataset train;
  std::optional<Dataset> test;
};

/// Generates or loads the configured datasets and applies binarisation.
RunData load_run_data(const RunConfig& config);

/// Initial parameters: the configured checkpoint, or W ~ N(0, init_scale^2)
/// with zero biases and unit precision.
RbmParams initial_params(const RunConfig& config, Index n_visible);

/// Reconstruction error on the full train / test sets with the fixed
/// evaluation streams of `seed`; the rest of the record is left at zero.
MetricsRecord evaluate(const RbmParams& params, const RunData& data,
                       std::uint64_t seed);

struct TrainResult {
  RbmParams params;
  std::vector<MetricsRecord> metrics;
};

struct TrainSinks {
  std::ostream* metrics = nullptr;  // header + one flushed line per row
  std::ostream* timing = nullptr;   // iter,wallclock_ms (deterministic runs)
};

/// The training loop. Rows are written at iteration 0, every eval_interval
/// updates and after the last update.
TrainResult train(const RunConfig& config, const RunData& data,
                  const TrainSinks& sinks = {});

/// Loads data, trains and writes metrics.csv, final.ckpt, config.txt (and
/// timing.csv for deterministic runs) into config.out.
TrainResult run_train(const RunConfig& config);

struct BenchRow {
  std::string optimizer;
  std::string family;
  double ms_per_1k = 0.0;
};

/// Wall-clock cost of `iters` training iterations (sampling, gradient and
/// update; no evaluation) for each policy. Policies are timed in alternation
/// `repeats` times and the fastest repetition is kept.
std::vector<BenchRow> bench(const RunConfig& config, const RunData& data,
                            const std::vector<OptimizerPolicy>& policies,
                            std::int64_t iters, int repeats = 3);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace ssdrbm

#endif  // SSDRBM_RUNNER_HPP
