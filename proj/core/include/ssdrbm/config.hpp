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

#ifndef SSDRBM_CONFIG_HPP
#define SSDRBM_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "ssdrbm/model.hpp"
#include "ssdrbm/optimizer.hpp"

namespace ssdrbm {

enum class DatasetSource { synthetic, idx, matrix };
/// automatic thresholds non-binary data for Bernoulli models and leaves
/// Gaussian data alone.
enum class BinarizeKind { automatic, none, threshold, stochastic };
enum class CdMode { cd, pcd };

struct RunConfig {
  Family family = Family::bernoulli;
  Index n_hidden = 25;
  Index n_visible = 100;  // synthetic source only; files carry their own
  CovarianceKind covariance = CovarianceKind::identity;

  DatasetSource dataset = DatasetSource::synthetic;
  std::string train_path;
  std::string test_path;  // optional for file sources
  Index n_train = 4000;
  Index n_test = 1000;
  int burn_in = 1000;
  double truth_variance = 0.5;
  BinarizeKind binarize = BinarizeKind::automatic;
  double threshold = 0.5;

  Index batch_size = 100;
  int cd_k = 1;
  CdMode cd_mode = CdMode::cd;
  OptimizerPolicy policy = OptimizerPolicy::uniform(UpdateRule::sgd, 0.01);

  std::int64_t iterations = 1000;
  std::int64_t eval_interval = 100;
  std::uint64_t seed = 1;
  double init_scale = 0.01;  // W ~ N(0, init_scale^2)
  std::string init_checkpoint;
  std::string out = "out";
  bool deterministic = false;

  /// Throws ConfigError on out-of-range values or inconsistent choices.
  void validate() const;
};

/// Parses key=value lines ('#' starts a comment). Unknown keys, malformed
/// values and duplicate keys raise ConfigError naming the line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical key=value rendering; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

}  // namespace ssdrbm

#endif  // SSDRBM_CONFIG_HPP
