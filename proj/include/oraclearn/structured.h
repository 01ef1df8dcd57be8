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

#ifndef ORACLEARN_STRUCTURED_H_
#define ORACLEARN_STRUCTURED_H_

// Learners that exploit the structure of thresholds, unions of k intervals
// and Hamming balls. Thresholds and intervals are hidden behind a session;
// the learners only see oracle answers and revealed labels.

#include <cstddef>
#include <optional>
#include <vector>

#include "oraclearn/core.h"
#include "oraclearn/learners.h"
#include "oraclearn/oracles.h"
#include "oraclearn/rng.h"

namespace oraclearn {

struct OrderedTrial {
  // Points in increasing rank as recovered by the learner.
  std::vector<Point> order;
  TrialRecord record;
};

// Threshold labelings induced by `order` (point order[i] has rank i), as an
// explicit class over `domain_size` points.
ExplicitClass thresholds_over(const std::vector<Point>& order, std::size_t domain_size);

// Merge sort with one WC comparison per pair, then halving over the induced
// thresholds.
OrderedTrial threshold_sort_wc(OracleSession& session, LabelSource& source);

// Per-round boundary snapshot kept for tests: r is the known 0-point of
// largest rank, l the known 1-point of smallest rank.
struct BoundaryTrace {
  std::vector<std::optional<Point>> r;
  std::vector<std::optional<Point>> l;
  // True when the round's point was inside the uncertainty region.
  std::vector<bool> sampled;
};

std::size_t rand_wc_sample_size(double delta);

TrialRecord threshold_rand_wc(OracleSession& session, LabelSource& source, double delta,
                              CounterRng& rng, BoundaryTrace* trace = nullptr);

// Sorts `points` by recursive ERM partitioning; 2(n - 1) ERM calls.
std::vector<Point> erm_partition_sort(ErmChannel& channel, std::vector<Point> points);

TrialRecord threshold_det_erm(ErmChannel& channel, LabelSource& source);
OrderedTrial threshold_det_erm_ordered(ErmChannel& channel, LabelSource& source);

// `delta` is validated but does not change the algorithm: its guarantee holds
// with probability one.
TrialRecord threshold_rand_erm(ErmChannel& channel, LabelSource& source, double delta,
                               CounterRng& rng);

std::size_t extreme_test_repetitions(std::size_t pool_size, double delta, double c = 1.0);

// True iff z took label 1 in the unique unrealizable labeling of every
// sampled (2k+1)-point set. Stops at the first repetition where it does not.
bool kintervals_extreme_test(OracleSession& session, const std::vector<Point>& pool, Point z,
                             std::size_t k, double delta, CounterRng& rng, double c = 1.0);

// Labelings of m rank-ordered positions with at most k maximal 1-blocks.
ExplicitClass kinterval_labelings(std::size_t m, std::size_t k);
std::size_t kinterval_class_size(std::size_t domain_size, std::size_t k);

struct KIntervalsTrial {
  // Peeled points, starting from one end of the rank order.
  std::vector<Point> peeled;
  // At most 2k+1 points whose relative order was not recovered.
  std::vector<Point> residual;
  TrialRecord record;
};

KIntervalsTrial kintervals_learn(OracleSession& session, LabelSource& source, std::size_t k,
                                 double delta, CounterRng& rng, double c = 1.0);

// True when `peeled` lists the lowest or the highest ranks in order.
bool order_recovered(const std::vector<Point>& peeled, const std::vector<std::size_t>& perm);

// One ERM call on the empty sample; predicts the returned concept throughout.
TrialRecord hamming_single_query(ErmChannel& channel, LabelSource& source);

// Recovers the center from the unique unrealizable labeling of the first d+1
// points and one ERM call, then runs SOA on the known ball. With
// `decision_via_erm` the 2^(d+1) tests use ERM calls instead of WC calls.
TrialRecord hamming_optimal(OracleSession& session, LabelSource& source, std::size_t d,
                            bool decision_via_erm = false);

}  // namespace oraclearn

#endif  // ORACLEARN_STRUCTURED_H_
