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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oraclearn/core.h"
#include "oraclearn/error.h"
#include "oraclearn/learners.h"
#include "oraclearn/oracles.h"
#include "oraclearn/rng.h"
#include "oraclearn/structured.h"

namespace oraclearn {
namespace {

Labeling threshold_target(const std::vector<std::size_t>& perm, std::size_t cut) {
  std::vector<Label> bits(perm.size());
  for (Point x = 0; x < perm.size(); ++x) bits[x] = perm[x] >= cut;
  return Labeling(bits);
}

std::vector<std::size_t> random_perm(CounterRng& rng, std::size_t n) {
  std::vector<std::size_t> p = identity_perm(n);
  rng.shuffle(p);
  return p;
}

TEST(SortWc, TwoPoints) {
  OracleSession s(HiddenClassSpec{ThresholdSpec{{1, 0}}});
  StreamSource src(Labeling::from_string("10"));
  const OrderedTrial out = threshold_sort_wc(s, src);
  EXPECT_EQ(out.record.queries.wc(), 1u);
  EXPECT_LE(out.record.mistakes, 2u);
  EXPECT_EQ(out.order, (std::vector<Point>{1, 0}));
}

TEST(SortWc, AllZeroTarget) {
  OracleSession s(HiddenClassSpec{identity_threshold(16)});
  StreamSource src(Labeling::constant(16, 0));
  EXPECT_LE(threshold_sort_wc(s, src).record.mistakes, 1u);
}

TEST(SortWc, RecoversEveryPermutationExhaustively) {
  for (std::size_t t = 1; t <= 8; ++t) {
    std::vector<std::size_t> perm = identity_perm(t);
    do {
      OracleSession s(HiddenClassSpec{ThresholdSpec{perm}});
      StreamSource src(threshold_target(perm, t / 2));
      const OrderedTrial out = threshold_sort_wc(s, src);
      ASSERT_EQ(out.order, points_by_rank(perm));
      const std::size_t lg = t <= 1 ? 0 : std::bit_width(t - 1);
      ASSERT_LE(out.record.queries.wc(), t * lg + t);
      ASSERT_LE(out.record.mistakes, std::bit_width(t));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(DetErm, TwoPointsAndIdentity) {
  {
    OracleSession s(HiddenClassSpec{identity_threshold(2)});
    SessionErmChannel ch(s);
    StreamSource src(Labeling::from_string("01"));
    const TrialRecord rec = threshold_det_erm(ch, src);
    EXPECT_EQ(rec.queries.erm(), 2u);
    EXPECT_LE(rec.mistakes, 2u);
  }
  OracleSession s(HiddenClassSpec{identity_threshold(64)});
  SessionErmChannel ch(s);
  StreamSource src(threshold_target(identity_perm(64), 40));
  const OrderedTrial out = threshold_det_erm_ordered(ch, src);
  EXPECT_EQ(out.order, points_by_rank(identity_perm(64)));
  EXPECT_LE(out.record.queries.erm(), 128u);
}

TEST(DetErm, RecoversEveryPermutationExhaustively) {
  for (std::size_t t = 1; t <= 7; ++t) {
    std::vector<std::size_t> perm = identity_perm(t);
    do {
      OracleSession s(HiddenClassSpec{ThresholdSpec{perm}});
      SessionErmChannel ch(s);
      StreamSource src(threshold_target(perm, (t + 1) / 2));
      const OrderedTrial out = threshold_det_erm_ordered(ch, src);
      ASSERT_EQ(out.order, points_by_rank(perm));
      ASSERT_LE(out.record.queries.erm(), 2 * t);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(DetErm, NotAThresholdClass) {
  // Every pair labelling is realizable on the full cube, so no order exists.
  OracleSession s(ExplicitClass::full_cube(3));
  SessionErmChannel ch(s);
  std::vector<Point> pts{0, 1, 2};
  EXPECT_THROW(erm_partition_sort(ch, pts), Error);
}

TEST(Sorting, RandomPermutationsAtScale) {
  CounterRng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<std::size_t> perm = random_perm(rng, 256);
    const std::vector<Point> want = points_by_rank(perm);
    if (trial % 2 == 0) {
      OracleSession s(HiddenClassSpec{ThresholdSpec{perm}}, TieBreakPolicy::kCanonicalMin,
                      TranscriptMode::kCountsOnly);
      StreamSource src(threshold_target(perm, rng.uniform_below(257)));
      ASSERT_EQ(threshold_sort_wc(s, src).order, want);
    } else {
      OracleSession s(HiddenClassSpec{ThresholdSpec{perm}}, TieBreakPolicy::kCanonicalMin,
                      TranscriptMode::kCountsOnly);
      SessionErmChannel ch(s);
      StreamSource src(threshold_target(perm, rng.uniform_below(257)));
      ASSERT_EQ(threshold_det_erm_ordered(ch, src).order, want);
    }
  }
}

TEST(RandWc, SampleSize) {
  EXPECT_EQ(rand_wc_sample_size(0.01), 166u);
  EXPECT_EQ(rand_wc_sample_size(0.5), 25u);
  EXPECT_THROW(rand_wc_sample_size(1.0), Error);
}

TEST(RandWc, SinglePoint) {
  for (Label y : {0, 1}) {
    OracleSession s(HiddenClassSpec{identity_threshold(1)});
    CounterRng rng(1);
    StreamSource src(Labeling::constant(1, y));
    const TrialRecord rec = threshold_rand_wc(s, src, 0.1, rng);
    EXPECT_LE(rec.mistakes, 1u);
    EXPECT_LE(rec.queries.wc(), 2u);
  }
}

TEST(RandWc, ForcedRoundsNeverErrAndRegionShrinks) {
  CounterRng seeds(42);
  const std::size_t t = 512;
  for (int trial = 0; trial < 40; ++trial) {
    const std::vector<std::size_t> perm = random_perm(seeds, t);
    const Labeling target = threshold_target(perm, seeds.uniform_below(t + 1));
    OracleSession s(HiddenClassSpec{ThresholdSpec{perm}}, TieBreakPolicy::kCanonicalMin,
                    TranscriptMode::kCountsOnly);
    CounterRng rng(seeds.next_u64());
    StreamSource src(target);
    BoundaryTrace trace;
    const TrialRecord rec = threshold_rand_wc(s, src, 0.01, rng, &trace);
    auto region = [&](std::size_t round, std::optional<Point> r, std::optional<Point> l) {
      std::size_t n = 0;
      for (Point x = round + 1; x < t; ++x) {
        if ((!r || perm[x] > perm[*r]) && (!l || perm[x] < perm[*l])) ++n;
      }
      return n;
    };
    std::size_t init_mistakes = 0;
    for (std::size_t i = 0; i < t; ++i) {
      const RoundRecord& round = rec.rounds[i];
      const bool had_boundaries = i > 0 && trace.r[i - 1] && trace.l[i - 1];
      if (!had_boundaries) {
        init_mistakes += round.mistake;
        continue;
      }
      if (!trace.sampled[i]) {
        ASSERT_FALSE(round.mistake) << "forced prediction was wrong at round " << i;
        continue;
      }
      if (round.mistake) {
        const std::size_t before = region(i, trace.r[i - 1], trace.l[i - 1]);
        const std::size_t after = region(i, trace.r[i], trace.l[i]);
        if (before >= 12) EXPECT_LE(6 * after, 5 * before) << "round " << i;
      }
    }
    EXPECT_LE(init_mistakes, 2u);
  }
}

TEST(RandErm, SmallDomainsExhaustiveTargets) {
  CounterRng seeds(43);
  for (std::size_t t : {1, 2, 5, 6, 9, 17, 40}) {
    const std::vector<std::size_t> perm = random_perm(seeds, t);
    const double cap = std::ceil(std::log(static_cast<double>(t)) / std::log(1.5)) + 5;
    for (std::size_t cut = 0; cut <= t; ++cut) {
      OracleSession s(HiddenClassSpec{ThresholdSpec{perm}});
      SessionErmChannel ch(s);
      CounterRng rng(seeds.next_u64());
      StreamSource src(threshold_target(perm, cut));
      const TrialRecord rec = threshold_rand_erm(ch, src, 0.01, rng);
      EXPECT_LE(static_cast<double>(rec.mistakes), cap) << "t=" << t << " cut=" << cut;
    }
  }
}

TEST(ExtremeTest, RepetitionFormula) {
  EXPECT_EQ(extreme_test_repetitions(4, 0.5), 3u);
  EXPECT_EQ(extreme_test_repetitions(10, 0.01), 47u);
  EXPECT_EQ(extreme_test_repetitions(10, 0.01, 2.0), 93u);
}

TEST(ExtremeTest, EndpointsNeverRejected) {
  CounterRng rng(44);
  for (std::size_t k = 1; k <= 2; ++k) {
    for (std::size_t u = 2 * k + 2; u <= 2 * k + 5; ++u) {
      const std::vector<std::size_t> perm = random_perm(rng, u);
      OracleSession s(HiddenClassSpec{KIntervalsSpec{perm, k}});
      std::vector<Point> pool(u);
      std::iota(pool.begin(), pool.end(), 0);
      const std::vector<Point> by_rank = points_by_rank(perm);
      EXPECT_TRUE(kintervals_extreme_test(s, pool, by_rank.front(), k, 0.01, rng));
      EXPECT_TRUE(kintervals_extreme_test(s, pool, by_rank.back(), k, 0.01, rng));
    }
  }
}

TEST(ExtremeTest, InteriorPointCaught) {
  // k=1, four points: the second-ranked point is labelled 0 in some draw.
  OracleSession s(HiddenClassSpec{KIntervalsSpec{identity_perm(4), 1}});
  const std::vector<Point> pool{0, 1, 2, 3};
  bool caught = false;
  for (std::uint64_t seed = 0; seed < 20 && !caught; ++seed) {
    CounterRng rng(seed);
    caught = !kintervals_extreme_test(s, pool, 1, 1, 0.5, rng);
  }
  EXPECT_TRUE(caught);
  CounterRng rng(0);
  EXPECT_FALSE(kintervals_extreme_test(s, pool, 1, 1, 1e-6, rng));
}

TEST(ExtremeTest, NoUnrealizableLabeling) {
  OracleSession s(ExplicitClass::full_cube(4));
  CounterRng rng(1);
  try {
    kintervals_extreme_test(s, {0, 1, 2, 3}, 0, 1, 0.5, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoUnrealizableLabeling);
  }
}

TEST(KIntervals, ClassSize) {
  for (std::size_t m = 0; m <= 9; ++m) {
    for (std::size_t k = 0; k <= 3; ++k) {
      EXPECT_EQ(kinterval_labelings(m == 0 ? 1 : m, k).size(), kinterval_class_size(m == 0 ? 1 : m, k));
    }
  }
  EXPECT_EQ(kinterval_class_size(4, 1), 11u);
}

TEST(KIntervals, LearnRecoversOrder) {
  CounterRng seeds(45);
  const std::size_t t = 8, k = 1;
  const double log_class = std::log2(static_cast<double>(kinterval_class_size(t, k)));
  std::size_t recovered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<std::size_t> perm = random_perm(seeds, t);
    const ExplicitClass cls = expand(KIntervalsSpec{perm, k});
    const Labeling target = cls.labelings()[seeds.uniform_below(cls.size())];
    OracleSession s(HiddenClassSpec{KIntervalsSpec{perm, k}});
    CounterRng rng(seeds.next_u64());
    StreamSource src(target);
    const KIntervalsTrial out = kintervals_learn(s, src, k, 0.01, rng);
    recovered += order_recovered(out.peeled, perm);
    EXPECT_LE(out.residual.size(), 2 * k + 1);
    EXPECT_LE(static_cast<double>(out.record.mistakes), log_class + 2 * k + 1);
  }
  EXPECT_GE(recovered, 99u);
}

TEST(KIntervals, DegenerateZero) {
  OracleSession s(HiddenClassSpec{KIntervalsSpec{identity_perm(6), 0}});
  CounterRng rng(3);
  StreamSource src(Labeling::constant(6, 0));
  EXPECT_EQ(kintervals_learn(s, src, 0, 0.1, rng).record.mistakes, 0u);
}

TEST(OrderRecovered, AcceptsReversal) {
  const std::vector<std::size_t> perm{2, 0, 1, 3};
  EXPECT_TRUE(order_recovered({1, 2, 0}, perm));
  EXPECT_TRUE(order_recovered({3, 0, 2}, perm));
  EXPECT_FALSE(order_recovered({1, 0, 2}, perm));
}

TEST(HammingOneQuery, RadiusZeroAndWorstCase) {
  {
    const Labeling c = Labeling::from_string("10110");
    OracleSession s(HiddenClassSpec{HammingBallSpec{c, 0}});
    SessionErmChannel ch(s);
    StreamSource src(c);
    const TrialRecord rec = hamming_single_query(ch, src);
    EXPECT_EQ(rec.mistakes, 0u);
    EXPECT_EQ(rec.queries.erm(), 1u);
  }
  OracleSession s(HiddenClassSpec{HammingBallSpec{Labeling::constant(8, 0), 2}});
  SessionErmChannel ch(s);
  StreamSource src(Labeling::from_string("01000100"));
  const TrialRecord rec = hamming_single_query(ch, src);
  EXPECT_EQ(rec.mistakes, 2u);
  EXPECT_EQ(rec.queries.erm(), 1u);
}

TEST(HammingOneQuery, TriangleBound) {
  CounterRng rng(46);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t t = 4 + rng.uniform_below(12), d = rng.uniform_below(4);
    std::vector<Label> c(t);
    for (Label& b : c) b = rng.bernoulli(0.5);
    std::vector<Label> tgt = c;
    std::vector<Point> all(t);
    std::iota(all.begin(), all.end(), 0);
    for (Point x : rng.sample_without_replacement(all, rng.uniform_below(d + 1))) tgt[x] ^= 1u;
    const TieBreakPolicy policy =
        trial % 2 ? TieBreakPolicy::kCanonicalMin : TieBreakPolicy::kAdversarialConstantMajority;
    OracleSession s(HiddenClassSpec{HammingBallSpec{Labeling(c), d}}, policy);
    SessionErmChannel ch(s);
    StreamSource src{Labeling(tgt)};
    const TrialRecord rec = hamming_single_query(ch, src);
    EXPECT_LE(rec.mistakes, 2 * d);
    EXPECT_EQ(rec.queries.erm(), 1u);
  }
}

TEST(HammingOptimal, ExhaustiveSmall) {
  const std::size_t t = 4, d = 1;
  for (std::uint32_t cm = 0; cm < 16; ++cm) {
    const Labeling center = from_mask(cm, t);
    const ExplicitClass ball = expand(HammingBallSpec{center, d});
    for (const Labeling& target : ball) {
      for (bool via_erm : {false, true}) {
        OracleSession s(HiddenClassSpec{HammingBallSpec{center, d}});
        StreamSource src(target);
        const TrialRecord rec = hamming_optimal(s, src, d, via_erm);
        EXPECT_LE(rec.mistakes, d);
        EXPECT_LE(rec.queries.total(), 5u);
      }
    }
  }
}

TEST(HammingOptimal, RadiusZero) {
  const Labeling c = Labeling::from_string("0110");
  OracleSession s(HiddenClassSpec{HammingBallSpec{c, 0}});
  StreamSource src(c);
  const TrialRecord rec = hamming_optimal(s, src, 0);
  EXPECT_EQ(rec.mistakes, 0u);
  EXPECT_LE(rec.queries.total(), 3u);
}

TEST(HammingOptimal, AmbiguousCenterOnWrongClass) {
  OracleSession s(ExplicitClass::full_cube(4));
  StreamSource src(Labeling::constant(4, 0));
  try {
    hamming_optimal(s, src, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAmbiguousCenter);
  }
}

}  // namespace
}  // namespace oraclearn
