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

#include "ssdrbm/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "ssdrbm/errors.hpp"

namespace ssdrbm {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

using Entries = std::map<std::string, Entry, std::less<>>;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const Entry& e,
                            const std::string& expected) {
  throw ConfigError("config line " + std::to_string(e.line) + ": key '" + key +
                    "' has value '" + e.value + "', expected " + expected);
}

class Resolver {
 public:
  explicit Resolver(Entries entries) : entries_(std::move(entries)) {}

  const Entry* find(std::string_view key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    used_.push_back(it->first);
    return &it->second;
  }

  template <typename T>
  void integer(std::string_view key, T& out) {
    const Entry* e = find(key);
    if (e == nullptr) return;
    T v{};
    const char* begin = e->value.data();
    const char* end = begin + e->value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
      bad_value(std::string(key), *e, "an integer");
    }
    out = v;
  }

  void real(std::string_view key, double& out) {
    const Entry* e = find(key);
    if (e == nullptr) return;
    double v = 0.0;
    const char* begin = e->value.data();
    const char* end = begin + e->value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
      bad_value(std::string(key), *e, "a finite number");
    }
    out = v;
  }

  void text(std::string_view key, std::string& out) {
    if (const Entry* e = find(key)) out = e->value;
  }

  template <typename T>
  void choice(std::string_view key, T& out,
              std::initializer_list<std::pair<const char*, T>> options) {
    const Entry* e = find(key);
    if (e == nullptr) return;
    std::string names;
    for (const auto& [name, value] : options) {
      if (e->value == name) {
        out = value;
        return;
      }
      names += names.empty() ? name : std::string(" | ") + name;
    }
    bad_value(std::string(key), *e, "one of " + names);
  }

  void reject_unused() const {
    for (const auto& [key, entry] : entries_) {
      bool seen = false;
      for (const auto& u : used_) seen = seen || u == key;
      if (!seen) {
        throw ConfigError("config line " + std::to_string(entry.line) +
                          ": unknown key '" + key + "'");
      }
    }
  }

 private:
  Entries entries_;
  std::vector<std::string> used_;
};

const std::initializer_list<std::pair<const char*, UpdateRule>> kRules = {
    {"sgd", UpdateRule::sgd},
    {"nesterov", UpdateRule::nesterov_sgd},
    {"nesterov_sgd", UpdateRule::nesterov_sgd},
    {"ssd", UpdateRule::ssd},
    {"frozen", UpdateRule::frozen},
};

const char* cov_name(CovarianceKind k) {
  return k == CovarianceKind::diagonal_log ? "diagonal" : to_string(k);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (n_hidden < 1) fail("hidden must be >= 1");
  if (dataset == DatasetSource::synthetic) {
    if (n_visible < 1) fail("visible must be >= 1");
    if (n_train < 1) fail("n_train must be >= 1");
    if (n_test < 1) fail("n_test must be >= 1");
    if (burn_in < 0) fail("burn_in must be >= 0");
    if (!(truth_variance >= 0.0)) fail("truth_variance must be >= 0");
  } else if (train_path.empty()) {
    fail("train_path is required for file datasets");
  }
  if (family == Family::bernoulli && covariance != CovarianceKind::identity) {
    fail("covariance applies to gaussian models only");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    fail("threshold must lie in [0, 1]");
  }
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (cd_k < 1) fail("cd_k must be >= 1");
  if (iterations < 0) fail("iterations must be >= 0");
  if (eval_interval < 1) fail("eval_interval must be >= 1");
  if (!(init_scale >= 0.0)) fail("init_scale must be >= 0");
  if (!(policy.momentum >= 0.0 && policy.momentum < 1.0)) {
    fail("momentum must lie in [0, 1)");
  }
  if (policy.weight_cap && !(*policy.weight_cap > 0.0)) {
    fail("weight_cap must be > 0 (0 disables the cap)");
  }
  try {
    policy.validate();
  } catch (const PreconditionError& e) {
    fail(e.what());
  }
}

RunConfig parse_config(std::string_view text) {
  Entries entries;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    if (!entries.emplace(key, Entry{value, line_no}).second) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
  }

  RunConfig c;
  Resolver r(std::move(entries));
  r.choice("family", c.family,
           {{"bernoulli", Family::bernoulli}, {"gaussian", Family::gaussian}});
  r.integer("hidden", c.n_hidden);
  r.integer("visible", c.n_visible);
  r.choice("covariance", c.covariance,
           {{"identity", CovarianceKind::identity},
            {"isotropic", CovarianceKind::isotropic},
            {"diagonal", CovarianceKind::diagonal_log},
            {"full", CovarianceKind::full}});
  r.choice("dataset", c.dataset,
           {{"synthetic", DatasetSource::synthetic},
            {"idx", DatasetSource::idx},
            {"matrix", DatasetSource::matrix}});
  r.text("train_path", c.train_path);
  r.text("test_path", c.test_path);
  r.integer("n_train", c.n_train);
  r.integer("n_test", c.n_test);
  r.integer("burn_in", c.burn_in);
  r.real("truth_variance", c.truth_variance);
  r.choice("binarize", c.binarize,
           {{"auto", BinarizeKind::automatic},
            {"none", BinarizeKind::none},
            {"threshold", BinarizeKind::threshold},
            {"stochastic", BinarizeKind::stochastic}});
  r.real("threshold", c.threshold);
  r.integer("batch_size", c.batch_size);
  r.integer("cd_k", c.cd_k);
  r.choice("cd_mode", c.cd_mode, {{"cd", CdMode::cd}, {"pcd", CdMode::pcd}});

  // Shared optimizer settings first, then per-block overrides, so the
  // result does not depend on line order.
  UpdateRule rule = UpdateRule::sgd;
  r.choice("optimizer", rule, kRules);
  StepSchedule schedule;
  schedule.base = 0.01;
  r.real("step", schedule.base);
  r.choice("schedule", schedule.kind,
           {{"fixed", StepSchedule::Kind::fixed},
            {"exponential", StepSchedule::Kind::exponential}});
  r.real("decay", schedule.decay);
  r.integer("decay_period", schedule.period);
  if (schedule.kind == StepSchedule::Kind::fixed) {
    schedule.decay = 1.0;
  }
  BlockPolicy* blocks[] = {&c.policy.w, &c.policy.b, &c.policy.a,
                           &c.policy.cov};
  const char* prefixes[] = {"w", "b", "a", "cov"};
  for (int i = 0; i < 4; ++i) {
    blocks[i]->rule = rule;
    blocks[i]->schedule = schedule;
    const std::string p = prefixes[i];
    r.choice(p + "_rule", blocks[i]->rule, kRules);
    r.real(p + "_step", blocks[i]->schedule.base);
  }
  r.real("momentum", c.policy.momentum);
  double cap = 0.0;
  r.real("weight_cap", cap);
  if (cap != 0.0) c.policy.weight_cap = cap;
  r.choice("svd_mode", c.policy.svd.kind,
           {{"exact", SvdMode::Kind::exact},
            {"randomized", SvdMode::Kind::randomized}});
  r.integer("svd_rank", c.policy.svd.target_rank);
  r.integer("svd_oversample", c.policy.svd.oversample);
  r.integer("svd_power_iters", c.policy.svd.power_iters);

  r.integer("iterations", c.iterations);
  r.integer("eval_interval", c.eval_interval);
  r.integer("seed", c.seed);
  r.real("init_scale", c.init_scale);
  r.text("init_checkpoint", c.init_checkpoint);
  r.text("out", c.out);
  r.choice("deterministic", c.deterministic, {{"true", true}, {"false", false}});
  r.reject_unused();
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const RunConfig& c) {
  std::ostringstream o;
  o << "family=" << to_string(c.family) << '\n'
    << "hidden=" << c.n_hidden << '\n'
    << "visible=" << c.n_visible << '\n'
    << "covariance=" << cov_name(c.covariance) << '\n';
  const char* sources[] = {"synthetic", "idx", "matrix"};
  o << "dataset=" << sources[static_cast<int>(c.dataset)] << '\n';
  if (!c.train_path.empty()) o << "train_path=" << c.train_path << '\n';
  if (!c.test_path.empty()) o << "test_path=" << c.test_path << '\n';
  o << "n_train=" << c.n_train << '\n'
    << "n_test=" << c.n_test << '\n'
    << "burn_in=" << c.burn_in << '\n'
    << "truth_variance=" << fmt(c.truth_variance) << '\n';
  const char* binarize[] = {"auto", "none", "threshold", "stochastic"};
  o << "binarize=" << binarize[static_cast<int>(c.binarize)] << '\n'
    << "threshold=" << fmt(c.threshold) << '\n'
    << "batch_size=" << c.batch_size << '\n'
    << "cd_k=" << c.cd_k << '\n'
    << "cd_mode=" << (c.cd_mode == CdMode::cd ? "cd" : "pcd") << '\n';
  // Schedule kind, decay and period are shared; the W block is canonical.
  const StepSchedule& s = c.policy.w.schedule;
  o << "schedule="
    << (s.kind == StepSchedule::Kind::fixed ? "fixed" : "exponential") << '\n'
    << "decay=" << fmt(s.decay) << '\n'
    << "decay_period=" << s.period << '\n';
  const BlockPolicy* blocks[] = {&c.policy.w, &c.policy.b, &c.policy.a,
                                 &c.policy.cov};
  const char* prefixes[] = {"w", "b", "a", "cov"};
  for (int i = 0; i < 4; ++i) {
    o << prefixes[i] << "_rule=" << to_string(blocks[i]->rule) << '\n'
      << prefixes[i] << "_step=" << fmt(blocks[i]->schedule.base) << '\n';
  }
  o << "momentum=" << fmt(c.policy.momentum) << '\n'
    << "weight_cap=" << fmt(c.policy.weight_cap.value_or(0.0)) << '\n'
    << "svd_mode="
    << (c.policy.svd.kind == SvdMode::Kind::exact ? "exact" : "randomized")
    << '\n'
    << "svd_rank=" << c.policy.svd.target_rank << '\n'
    << "svd_oversample=" << c.policy.svd.oversample << '\n'
    << "svd_power_iters=" << c.policy.svd.power_iters << '\n'
    << "iterations=" << c.iterations << '\n'
    << "eval_interval=" << c.eval_interval << '\n'
    << "seed=" << c.seed << '\n'
    << "init_scale=" << fmt(c.init_scale) << '\n';
  if (!c.init_checkpoint.empty()) {
    o << "init_checkpoint=" << c.init_checkpoint << '\n';
  }
  o << "out=" << c.out << '\n'
    << "deterministic=" << (c.deterministic ? "true" : "false") << '\n';
  return o.str();
}

}  // namespace ssdrbm
