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

#include "ssdrbm/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <string_view>

#include "ssdrbm/data.hpp"
#include "ssdrbm/errors.hpp"

namespace ssdrbm {

namespace {

using Kind = DataError::Kind;

constexpr std::string_view kMagic = "RBMCKPT1";
constexpr std::size_t kHeaderSize = 8 + 1 + 1 + 4 + 4;
constexpr std::uint64_t kMaxLayer = std::uint64_t{1} << 24;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t x = 0;
  for (int i = 3; i >= 0; --i) x = (x << 8) | p[i];
  return x;
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes, std::size_t pos)
      : bytes_(bytes), pos_(pos) {}

  double f64() {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes_[pos_ + i];
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const RbmParams& params) {
  params.validate();
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.push_back(static_cast<std::uint8_t>(params.family));
  out.push_back(params.is_gaussian()
                    ? static_cast<std::uint8_t>(params.cov->kind())
                    : std::uint8_t{0});
  put_u32(out, static_cast<std::uint32_t>(params.n_visible()));
  put_u32(out, static_cast<std::uint32_t>(params.n_hidden()));
  for (Index i = 0; i < params.W.rows(); ++i) {
    for (Index j = 0; j < params.W.cols(); ++j) put_f64(out, params.W(i, j));
  }
  for (double x : params.b) put_f64(out, x);
  for (double x : params.a) put_f64(out, x);
  if (params.is_gaussian()) {
    const CovarianceModel& cov = *params.cov;
    switch (cov.kind()) {
      case CovarianceKind::identity:
        break;
      case CovarianceKind::isotropic:
        put_f64(out, cov.isotropic_precision());
        break;
      case CovarianceKind::diagonal_log:
        for (double x : cov.log_precision()) put_f64(out, x);
        break;
      case CovarianceKind::full: {
        const Matrix& p = cov.full_precision();
        for (Index i = 0; i < p.rows(); ++i) {
          for (Index j = 0; j < p.cols(); ++j) put_f64(out, p(i, j));
        }
        break;
      }
    }
  }
  return out;
}

RbmParams decode_checkpoint(std::span<const std::uint8_t> bytes) {
  const std::size_t prefix = std::min(bytes.size(), kMagic.size());
  if (std::memcmp(bytes.data(), kMagic.data(), prefix) != 0) {
    throw DataError(Kind::bad_magic, "checkpoint: missing RBMCKPT1 magic");
  }
  if (bytes.size() < kHeaderSize) {
    throw DataError(Kind::truncated, "checkpoint: header is truncated");
  }
  const std::uint8_t family_byte = bytes[8];
  const std::uint8_t kind_byte = bytes[9];
  if (family_byte > 1) {
    throw DataError(Kind::bad_header, "checkpoint: unknown family byte " +
                                          std::to_string(family_byte));
  }
  if (kind_byte > 3 || (family_byte == 0 && kind_byte != 0)) {
    throw DataError(Kind::bad_header, "checkpoint: invalid covariance byte " +
                                          std::to_string(kind_byte));
  }
  const std::uint64_t nv = get_u32(bytes.data() + 10);
  const std::uint64_t nh = get_u32(bytes.data() + 14);
  if (nv == 0 || nh == 0) {
    throw DataError(Kind::bad_dimensions, "checkpoint: zero layer size");
  }
  if (nv > kMaxLayer || nh > kMaxLayer) {
    throw DataError(Kind::dimension_overflow, "checkpoint: layer size overflow");
  }
  const auto family = static_cast<Family>(family_byte);
  const auto kind = static_cast<CovarianceKind>(kind_byte);
  std::uint64_t cov_values = 0;
  if (family == Family::gaussian) {
    switch (kind) {
      case CovarianceKind::identity:
        break;
      case CovarianceKind::isotropic:
        cov_values = 1;
        break;
      case CovarianceKind::diagonal_log:
        cov_values = nv;
        break;
      case CovarianceKind::full:
        cov_values = nv * nv;
        break;
    }
  }
  // nv, nh <= 2^24 so every count below fits in 64 bits.
  const std::uint64_t values = nv * nh + nv + nh + cov_values;
  const std::uint64_t payload = bytes.size() - kHeaderSize;
  if (payload / 8 < values) {
    throw DataError(Kind::truncated, "checkpoint: payload is truncated");
  }
  if (payload != 8 * values) {
    throw DataError(Kind::trailing_bytes,
                    "checkpoint: bytes past the parameter payload");
  }

  Reader in(bytes, kHeaderSize);
  const auto n_v = static_cast<Index>(nv);
  const auto n_h = static_cast<Index>(nh);
  Matrix w(n_v, n_h);
  for (Index i = 0; i < n_v; ++i) {
    for (Index j = 0; j < n_h; ++j) w(i, j) = in.f64();
  }
  Vector b(n_v);
  for (Index i = 0; i < n_v; ++i) b(i) = in.f64();
  Vector a(n_h);
  for (Index j = 0; j < n_h; ++j) a(j) = in.f64();
  if (!w.allFinite() || !b.allFinite() || !a.allFinite()) {
    throw DataError(Kind::non_finite, "checkpoint: non-finite parameter");
  }
  if (family == Family::bernoulli) {
    return RbmParams::bernoulli(std::move(w), std::move(b), std::move(a));
  }

  try {
    switch (kind) {
      case CovarianceKind::identity:
        return RbmParams::gaussian(std::move(w), std::move(b), std::move(a),
                                   CovarianceModel::identity(n_v));
      case CovarianceKind::isotropic:
        return RbmParams::gaussian(std::move(w), std::move(b), std::move(a),
                                   CovarianceModel::isotropic(n_v, in.f64()));
      case CovarianceKind::diagonal_log: {
        Vector logs(n_v);
        for (Index i = 0; i < n_v; ++i) logs(i) = in.f64();
        return RbmParams::gaussian(std::move(w), std::move(b), std::move(a),
                                   CovarianceModel::diagonal_log(std::move(logs)));
      }
      case CovarianceKind::full: {
        Matrix p(n_v, n_v);
        for (Index i = 0; i < n_v; ++i) {
          for (Index j = 0; j < n_v; ++j) p(i, j) = in.f64();
        }
        return RbmParams::gaussian(std::move(w), std::move(b), std::move(a),
                                   CovarianceModel::full(std::move(p)));
      }
    }
  } catch (const Error& e) {
    throw DataError(Kind::domain_violation,
                    std::string("checkpoint: invalid covariance: ") + e.what());
  }
  throw DataError(Kind::bad_header, "checkpoint: unreachable covariance kind");
}

void save_checkpoint(const std::filesystem::path& path,
                     const RbmParams& params) {
  write_file_bytes(path, encode_checkpoint(params));
}

RbmParams load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file_bytes(path));
}

}  // namespace ssdrbm
