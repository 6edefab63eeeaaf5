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

#include "ssdrbm/data.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <random>

#include "ssdrbm/errors.hpp"
#include "ssdrbm/sampler.hpp"

namespace ssdrbm {

namespace {

using Kind = DataError::Kind;

constexpr std::string_view kMatrixMagic = "RBMMAT1\n";
constexpr std::size_t kMaxHeaderLine = 256;
// Upper bound on the number of stored values, well below what a Matrix
// index or a size_t byte count could overflow on.
constexpr std::uint64_t kMaxValues = std::uint64_t{1} << 34;

std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

void put_le32(std::vector<std::uint8_t>& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

std::uint32_t read_le32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) |
         (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
}

// a * b, or DataError(dimension_overflow) past kMaxValues.
std::uint64_t checked_product(std::uint64_t a, std::uint64_t b,
                              const std::string& what) {
  if (a != 0 && b > kMaxValues / a) {
    throw DataError(Kind::dimension_overflow, what + ": dimensions overflow");
  }
  return a * b;
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty() || s.front() == '+' || s.front() == '-') return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

const char* to_string(Domain d) {
  switch (d) {
    case Domain::binary:
      return "binary";
    case Domain::unit:
      return "unit";
    case Domain::real:
      return "real";
  }
  return "?";
}

Domain parse_domain(std::string_view text) {
  if (text == "binary") return Domain::binary;
  if (text == "unit") return Domain::unit;
  if (text == "real") return Domain::real;
  throw DataError(Kind::bad_header,
                  "unknown domain '" + std::string(text) + "'");
}

void validate_dataset(const Dataset& ds) {
  if (ds.size() < 1 || ds.n_visible() < 1) {
    throw DataError(Kind::bad_dimensions, ds.name + ": dataset is empty");
  }
  if (!ds.examples.allFinite()) {
    throw DataError(Kind::non_finite, ds.name + ": non-finite value");
  }
  const auto& x = ds.examples.array();
  switch (ds.domain) {
    case Domain::binary:
      if (!(x == 0.0 || x == 1.0).all()) {
        throw DataError(Kind::domain_violation,
                        ds.name + ": binary dataset has a value outside {0, 1}");
      }
      break;
    case Domain::unit:
      if ((x < 0.0).any() || (x > 1.0).any()) {
        throw DataError(Kind::domain_violation,
                        ds.name + ": unit dataset has a value outside [0, 1]");
      }
      break;
    case Domain::real:
      break;
  }
}

Dataset parse_idx(std::span<const std::uint8_t> bytes, std::string name) {
  if (bytes.size() < 4) {
    throw DataError(Kind::truncated, name + ": IDX file shorter than its magic");
  }
  if (bytes[0] != 0 || bytes[1] != 0 || bytes[2] != 0x08) {
    throw DataError(Kind::bad_magic,
                    name + ": not an unsigned-byte IDX file (bad magic)");
  }
  const int ndims = bytes[3];
  if (ndims != 2 && ndims != 3) {
    throw DataError(Kind::bad_magic, name + ": IDX tensor must have 2 or 3 " +
                                         "dimensions, header says " +
                                         std::to_string(ndims));
  }
  const std::size_t header = 4 + 4 * static_cast<std::size_t>(ndims);
  if (bytes.size() < header) {
    throw DataError(Kind::truncated, name + ": IDX header is truncated");
  }
  std::uint64_t n = 0;
  std::uint64_t per_example = 1;
  for (int d = 0; d < ndims; ++d) {
    const std::uint32_t dim = read_be32(bytes.data() + 4 + 4 * d);
    if (dim == 0) {
      throw DataError(Kind::bad_dimensions,
                      name + ": IDX dimension " + std::to_string(d) + " is 0");
    }
    if (d == 0) {
      n = dim;
    } else {
      per_example = checked_product(per_example, dim, name);
    }
  }
  const std::uint64_t total = checked_product(n, per_example, name);
  const std::uint64_t payload = bytes.size() - header;
  if (payload < total) {
    throw DataError(Kind::truncated,
                    name + ": IDX payload has " + std::to_string(payload) +
                        " bytes, header promises " + std::to_string(total));
  }
  if (payload > total) {
    throw DataError(Kind::trailing_bytes,
                    name + ": IDX file has " + std::to_string(payload - total) +
                        " bytes past the payload");
  }

  Dataset ds;
  ds.name = std::move(name);
  ds.domain = Domain::unit;
  ds.examples.resize(static_cast<Index>(n), static_cast<Index>(per_example));
  const std::uint8_t* p = bytes.data() + header;
  for (Index i = 0; i < ds.examples.rows(); ++i) {
    for (Index j = 0; j < ds.examples.cols(); ++j) {
      ds.examples(i, j) = static_cast<double>(*p++) / 255.0;
    }
  }
  return ds;
}

Dataset load_idx(const std::filesystem::path& path) {
  return parse_idx(read_file_bytes(path), path.filename().string());
}

std::vector<std::uint8_t> encode_idx(const std::vector<std::uint32_t>& dims,
                                     std::span<const std::uint8_t> payload) {
  std::vector<std::uint8_t> out = {0, 0, 0x08,
                                   static_cast<std::uint8_t>(dims.size())};
  for (std::uint32_t d : dims) {
    for (int shift = 24; shift >= 0; shift -= 8) {
      out.push_back(static_cast<std::uint8_t>(d >> shift));
    }
  }
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Dataset parse_matrix_file(std::span<const std::uint8_t> bytes,
                          std::string name) {
  const std::size_t magic_len = kMatrixMagic.size();
  const std::size_t prefix = std::min(bytes.size(), magic_len);
  if (std::memcmp(bytes.data(), kMatrixMagic.data(), prefix) != 0) {
    throw DataError(Kind::bad_magic, name + ": missing RBMMAT1 magic");
  }
  if (bytes.size() < magic_len) {
    throw DataError(Kind::truncated, name + ": file shorter than its magic");
  }

  std::size_t eol = magic_len;
  while (eol < bytes.size() && bytes[eol] != '\n' &&
         eol - magic_len < kMaxHeaderLine) {
    ++eol;
  }
  if (eol >= bytes.size()) {
    throw DataError(Kind::truncated, name + ": header line is not terminated");
  }
  if (bytes[eol] != '\n') {
    throw DataError(Kind::bad_header, name + ": header line is too long");
  }
  const std::string_view line(
      reinterpret_cast<const char*>(bytes.data() + magic_len), eol - magic_len);

  std::string_view fields[3];
  std::size_t start = 0;
  for (int f = 0; f < 3; ++f) {
    const std::size_t sp = f < 2 ? line.find(' ', start) : line.size();
    if (sp == std::string_view::npos) {
      throw DataError(Kind::bad_header,
                      name + ": header must be 'N N_v domain'");
    }
    fields[f] = line.substr(start, sp - start);
    start = sp + 1;
  }
  std::uint64_t n = 0;
  std::uint64_t nv = 0;
  if (!parse_u64(fields[0], n) || !parse_u64(fields[1], nv)) {
    throw DataError(Kind::bad_header,
                    name + ": header counts are not decimal integers");
  }
  const Domain domain = parse_domain(fields[2]);
  if (n == 0 || nv == 0) {
    throw DataError(Kind::bad_dimensions, name + ": header has a zero count");
  }
  const std::uint64_t total = checked_product(n, nv, name);
  const std::uint64_t payload = bytes.size() - eol - 1;
  if (payload / 4 < total) {
    throw DataError(Kind::truncated,
                    name + ": payload holds fewer than N * N_v floats");
  }
  if (payload != 4 * total) {
    throw DataError(Kind::trailing_bytes,
                    name + ": bytes past the N * N_v float payload");
  }

  Dataset ds;
  ds.name = std::move(name);
  ds.domain = domain;
  ds.examples.resize(static_cast<Index>(n), static_cast<Index>(nv));
  const std::uint8_t* p = bytes.data() + eol + 1;
  for (Index i = 0; i < ds.examples.rows(); ++i) {
    for (Index j = 0; j < ds.examples.cols(); ++j, p += 4) {
      ds.examples(i, j) = std::bit_cast<float>(read_le32(p));
    }
  }
  validate_dataset(ds);
  return ds;
}

Dataset load_matrix_file(const std::filesystem::path& path) {
  return parse_matrix_file(read_file_bytes(path), path.filename().string());
}

std::vector<std::uint8_t> encode_matrix_file(const Dataset& ds) {
  validate_dataset(ds);
  std::vector<std::uint8_t> out(kMatrixMagic.begin(), kMatrixMagic.end());
  const std::string header = std::to_string(ds.size()) + " " +
                             std::to_string(ds.n_visible()) + " " +
                             to_string(ds.domain) + "\n";
  out.insert(out.end(), header.begin(), header.end());
  out.reserve(out.size() + 4 * static_cast<std::size_t>(ds.examples.size()));
  for (Index i = 0; i < ds.size(); ++i) {
    for (Index j = 0; j < ds.n_visible(); ++j) {
      put_le32(out, std::bit_cast<std::uint32_t>(
                        static_cast<float>(ds.examples(i, j))));
    }
  }
  return out;
}

void write_matrix_file(const std::filesystem::path& path, const Dataset& ds) {
  write_file_bytes(path, encode_matrix_file(ds));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError(Kind::io, "cannot open '" + path.string() + "'");
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw DataError(Kind::io, "read failed on '" + path.string() + "'");
  }
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) {
    throw DataError(Kind::io, "write failed on '" + path.string() + "'");
  }
}

Dataset binarize(const Dataset& ds, const BinarizeMode& mode) {
  validate_dataset(ds);
  if (ds.domain == Domain::real) {
    throw DataError(Kind::domain_violation,
                    ds.name + ": binarize needs values in [0, 1]");
  }
  Dataset out;
  out.name = ds.name;
  out.domain = Domain::binary;
  if (mode.kind == BinarizeMode::Kind::threshold) {
    out.examples = (ds.examples.array() >= mode.threshold).cast<double>();
  } else {
    RngStream rng = RngStream(mode.seed).fork(stream_tag::kBinarize);
    out.examples = sample_bernoulli(ds.examples, rng);
  }
  return out;
}

MinibatchPlan::MinibatchPlan(Index n_examples, Index batch_size,
                             std::uint64_t seed, std::int64_t epoch)
    : batch_size_(batch_size), order_(static_cast<std::size_t>(n_examples)) {
  if (batch_size < 1) throw PreconditionError("minibatches: B must be >= 1");
  if (n_examples < 1) throw PreconditionError("minibatches: empty dataset");
  std::iota(order_.begin(), order_.end(), Index{0});
  SplitMix64 gen = RngStream::substream(
      RngStream(seed).fork(stream_tag::kShuffle).seed(),
      static_cast<std::uint64_t>(epoch));
  std::shuffle(order_.begin(), order_.end(), gen);
}

Index MinibatchPlan::batch_count() const {
  const Index n = static_cast<Index>(order_.size());
  return (n + batch_size_ - 1) / batch_size_;
}

DataBatch MinibatchPlan::batch(const Dataset& ds, Index i) const {
  if (i < 0 || i >= batch_count()) {
    throw PreconditionError("minibatches: batch index out of range");
  }
  if (ds.size() != static_cast<Index>(order_.size())) {
    throw DimensionError("minibatches: plan and dataset sizes differ");
  }
  const Index begin = i * batch_size_;
  const Index end = std::min(begin + batch_size_, ds.size());
  DataBatch out(end - begin, ds.n_visible());
  for (Index r = begin; r < end; ++r) {
    out.row(r - begin) = ds.examples.row(order_[static_cast<std::size_t>(r)]);
  }
  return out;
}

std::vector<DataBatch> minibatches(const Dataset& ds, Index batch_size,
                                   std::uint64_t seed, std::int64_t epoch) {
  const MinibatchPlan plan(ds.size(), batch_size, seed, epoch);
  std::vector<DataBatch> out;
  out.reserve(static_cast<std::size_t>(plan.batch_count()));
  for (Index i = 0; i < plan.batch_count(); ++i) out.push_back(plan.batch(ds, i));
  return out;
}

Dataset sample_examples(const RbmParams& truth, Index n, int burn_in,
                        RngStream& rng, std::string name) {
  if (n < 1) throw PreconditionError("sample_examples: n must be >= 1");
  if (burn_in < 0) throw PreconditionError("sample_examples: burn_in < 0");
  ChainState state;
  state.visible = sample_bernoulli(
      Matrix::Constant(n, truth.n_visible(), 0.5), rng);
  for (int step = 0; step < burn_in; ++step) {
    state = gibbs_step(truth, state, rng);
  }
  Dataset ds;
  ds.name = std::move(name);
  ds.domain = truth.is_gaussian() ? Domain::real : Domain::binary;
  ds.examples = std::move(state.visible);
  return ds;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_visible < 1 || spec.n_hidden < 1) {
    throw PreconditionError("generate_synthetic: N_v and N_h must be >= 1");
  }
  if (!(spec.weight_variance >= 0.0)) {
    throw PreconditionError("generate_synthetic: weight variance < 0");
  }
  const RngStream root(spec.seed);
  SplitMix64 gen = root.fork(stream_tag::kTruth).next_engine();
  std::normal_distribution<double> normal(0.0, std::sqrt(spec.weight_variance));
  Matrix w(spec.n_visible, spec.n_hidden);
  for (Index j = 0; j < w.cols(); ++j) {
    for (Index i = 0; i < w.rows(); ++i) w(i, j) = normal(gen);
  }
  SyntheticData out{Dataset{}, Dataset{},
                    RbmParams::bernoulli(std::move(w),
                                         Vector::Zero(spec.n_visible),
                                         Vector::Zero(spec.n_hidden))};
  RngStream train_rng = root.fork(stream_tag::kSynthTrain);
  RngStream test_rng = root.fork(stream_tag::kSynthTest);
  out.train = sample_examples(out.truth, spec.n_train, spec.burn_in, train_rng,
                              "synthetic-train");
  out.test = sample_examples(out.truth, spec.n_test, spec.burn_in, test_rng,
                             "synthetic-test");
  return out;
}

}  // namespace ssdrbm
