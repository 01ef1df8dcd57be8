// Copyright 2026 The Oraclearn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ORACLEARN_CLI_H_
#define ORACLEARN_CLI_H_

// Experiment harness behind the `oraclearn` command: seeded trial batches,
// per-learner ceilings, CSV/JSON rendering.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oraclearn/learners.h"
#include "oraclearn/oracles.h"

namespace oraclearn {

struct RunConfig {
  std::string class_kind = "thresholds";
  std::size_t t = 16;
  std::size_t k = 1;
  std::size_t d = 1;
  std::string learner = "thr-sort-wc";
  std::string adversary = "adv-target";
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double delta = 0.01;
  std::map<OracleKind, std::size_t> budgets;
  bool agnostic = false;
  std::size_t phase = 64;
  std::size_t jobs = 1;
  std::string format = "csv";
};

const std::vector<std::string>& learner_ids();
const std::vector<std::string>& adversary_ids();

// Throws kInvalidArgument for unknown ids or incompatible combinations.
void validate(const RunConfig& config);
// FNV-1a over the fields that define an experiment (not seeds or output).
std::uint64_t config_hash(const RunConfig& config);

// One trial; its randomness depends only on (config, seed).
TrialRecord run_trial(const RunConfig& config, std::uint64_t seed);
// Seeds config.seed .. config.seed + trials - 1, merged in seed order.
std::vector<TrialRecord> run_batch(const RunConfig& config);

std::string format_csv(const RunConfig& config, const std::vector<TrialRecord>& trials);
std::string format_json(const RunConfig& config, const std::vector<TrialRecord>& trials);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAssertion = 3;
inline constexpr int kExitIo = 4;

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oraclearn

#endif  // ORACLEARN_CLI_H_
