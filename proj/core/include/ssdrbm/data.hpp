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

#ifndef SSDRBM_DATA_HPP
#define SSDRBM_DATA_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssdrbm/model.hpp"

namespace ssdrbm {

enum class Domain { binary, unit, real };

const char* to_string(Domain d);
/// Throws DataError(bad_header) for anything but "binary", "unit", "real".
Domain parse_domain(std::string_view text);

/// Dense examples, one row per example.
struct Dataset {
  std::string name;
  Domain domain = Domain::real;
  Matrix examples;

  Index size() const { return examples.rows(); }
  Index n_visible() const { return examples.cols(); }
};

/// Throws DataError unless the dataset is non-empty, finite and inside its
/// declared domain.
void validate_dataset(const Dataset& ds);

/// Big-endian IDX tensor of unsigned bytes (type 0x08) with 2 or 3
/// dimensions. The first dimension indexes examples; the rest are flattened
/// row-major. Bytes are scaled by 1/255.
Dataset parse_idx(std::span<const std::uint8_t> bytes, std::string name = "idx");
Dataset load_idx(const std::filesystem::path& path);
/// Serialises an unsigned-byte IDX tensor (used for fixtures).
std::vector<std::uint8_t> encode_idx(const std::vector<std::uint32_t>& dims,
                                     std::span<const std::uint8_t> payload);

/// "RBMMAT1\n", an ASCII line "N N_v domain\n", then N * N_v little-endian
/// float32 values.
Dataset parse_matrix_file(std::span<const std::uint8_t> bytes,
                          std::string name = "matrix");
Dataset load_matrix_file(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_matrix_file(const Dataset& ds);
void write_matrix_file(const std::filesystem::path& path, const Dataset& ds);

/// Whole-file read; DataError(io) on failure.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

struct BinarizeMode {
  enum class Kind { threshold, stochastic };
  Kind kind = Kind::threshold;
  double threshold = 0.5;
  std::uint64_t seed = 0;
};

/// threshold: 1 iff value >= t. stochastic: Bernoulli(value) per pixel.
/// Requires a binary or unit-interval dataset.
Dataset binarize(const Dataset& ds, const BinarizeMode& mode);

/// Epoch-specific shuffled partition of [0, n) into batches of size B (the
/// last one may be short).
class MinibatchPlan {
 public:
  MinibatchPlan(Index n_examples, Index batch_size, std::uint64_t seed,
                std::int64_t epoch);

  Index batch_count() const;
  Index batch_size() const { return batch_size_; }
  const std::vector<Index>& order() const { return order_; }
  /// Rows of batch i, gathered from `ds`.
  DataBatch batch(const Dataset& ds, Index i) const;

 private:
  Index batch_size_;
  std::vector<Index> order_;
};

std::vector<DataBatch> minibatches(const Dataset& ds, Index batch_size,
                                   std::uint64_t seed, std::int64_t epoch);

struct SyntheticSpec {
  std::uint64_t seed = 1;
  Index n_visible = 100;
  Index n_hidden = 25;
  Index n_train = 4000;
  Index n_test = 1000;
  int burn_in = 1000;
  double weight_variance = 0.5;
};

struct SyntheticData {
  Dataset train;
  Dataset test;
  RbmParams truth;
};

/// Bernoulli ground truth with W ~ N(0, weight_variance) and zero biases.
/// Each example is the end of an independent Gibbs chain started from
/// uniform bits and run for burn_in steps.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Examples drawn from `truth` exactly as generate_synthetic does.
Dataset sample_examples(const RbmParams& truth, Index n, int burn_in,
                        RngStream& rng, std::string name);

}  // namespace ssdrbm

#endif  // SSDRBM_DATA_HPP
