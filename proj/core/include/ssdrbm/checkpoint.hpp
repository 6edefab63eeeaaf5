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

#ifndef SSDRBM_CHECKPOINT_HPP
#define SSDRBM_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ssdrbm/model.hpp"

namespace ssdrbm {

/// Binary checkpoint layout (all little-endian):
///   "RBMCKPT1", u8 family, u8 covariance kind, u32 N_v, u32 N_h,
///   f64 W (row-major), f64 b, f64 a, f64 covariance payload.
/// Bernoulli models store covariance kind 0 and no payload.
std::vector<std::uint8_t> encode_checkpoint(const RbmParams& params);
/// Throws DataError on any malformed input; never returns partial params.
RbmParams decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const std::filesystem::path& path,
                     const RbmParams& params);
RbmParams load_checkpoint(const std::filesystem::path& path);

}  // namespace ssdrbm

#endif  // SSDRBM_CHECKPOINT_HPP
