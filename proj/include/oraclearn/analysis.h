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

#ifndef ORACLEARN_ANALYSIS_H_
#define ORACLEARN_ANALYSIS_H_

// Exhaustive game solvers, the tree-cost recursion behind the WC lower
// bound, entropy, and Pareto aggregation of trial batches.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oraclearn/core.h"
#include "oraclearn/learners.h"

namespace oraclearn {

inline constexpr std::size_t kMaxGameDomain = 10;

// Value of the realizable mistake-bound game. By default the adversary picks
// the next instance as well as its label; with `fixed_order` instances come in
// index order and only labels are adversarial.
std::size_t optimal_mistake_bound(const ExplicitClass& cls, bool fixed_order = false);

enum class GamePredictor { kSoa, kHalving };

struct WorstCase {
  std::size_t mistakes = 0;
  // Instance order and labels that realize the worst case.
  std::vector<Point> order;
  std::vector<Label> labels;
};

// Exhaustive adaptive adversary (order and labels) against a deterministic
// version-space predictor with ties toward 1.
WorstCase worst_case_mistakes(const ExplicitClass& cls, GamePredictor predictor);

struct TreeCostQuery {
  std::size_t n = 1;
  std::size_t depth_cap = 0;
};

inline constexpr std::size_t kMaxTreeCostN = 512;

// f(n, D) for all n <= max_n and D <= max_depth; nullopt marks infeasible.
class TreeCostTable {
 public:
  TreeCostTable(std::size_t max_n, std::size_t max_depth);
  std::optional<std::size_t> cost(std::size_t n, std::size_t depth) const;
  std::size_t max_n() const { return max_n_; }
  std::size_t max_depth() const { return max_depth_; }

 private:
  std::size_t max_n_;
  std::size_t max_depth_;
  std::vector<std::vector<std::size_t>> f_;
};

// Throws kInfeasible when n > 2^depth_cap.
std::size_t min_tree_cost(const TreeCostQuery& q);

// Depth cap used by the lower-bound sweep: floor(1.05 * log2 n).
std::size_t sweep_depth_cap(std::size_t n);

double binary_entropy(double x);

struct TrialBatch {
  std::string learner;
  std::uint64_t config_hash = 0;
  std::vector<TrialRecord> trials;
};

struct ParetoPoint {
  std::string learner;
  std::uint64_t config_hash = 0;
  std::size_t trials = 0;
  double mean_mistakes = 0.0;
  double mean_queries = 0.0;
  std::optional<double> mean_regret;
  bool on_frontier = false;
};

// Per-batch means ordered by (queries, mistakes, learner); a point is on the
// frontier when no other point is at least as good on both axes and better
// on one.
std::vector<ParetoPoint> pareto_aggregate(const std::vector<TrialBatch>& batches);
std::string pareto_csv(const std::vector<ParetoPoint>& points);

}  // namespace oraclearn

#endif  // ORACLEARN_ANALYSIS_H_
