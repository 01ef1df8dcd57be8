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

#include <cmath>
#include <set>

#include "oraclearn/core.h"
#include "oraclearn/error.h"
#include "oraclearn/learners.h"
#include "oraclearn/oracles.h"
#include "oraclearn/rng.h"
#include "oraclearn/structured.h"

namespace oraclearn {
namespace {

// Labels every round against the prediction.
class ContrarianSource final : public LabelSource {
 public:
  explicit ContrarianSource(std::size_t n) : n_(n) {}
  std::size_t length() const override { return n_; }
  Label reveal(std::size_t, Label prediction) override { return 1 - prediction; }

 private:
  std::size_t n_;
};

std::set<Labeling> as_set(const ExplicitClass& cls) { return {cls.begin(), cls.end()}; }

TEST(Enumerate, ThresholdCountAndBudget) {
  OracleSession s(HiddenClassSpec{identity_threshold(8)});
  const ExplicitClass cls = transductive_enumerate(s, 8, 1);
  EXPECT_EQ(cls.size(), 9u);
  EXPECT_LE(s.counts().wc(), 144u);
}

TEST(Enumerate, RadiusZeroIsSingleton) {
  const Labeling c = Labeling::from_string("010011");
  OracleSession s(HiddenClassSpec{HammingBallSpec{c, 0}});
  const ExplicitClass cls = transductive_enumerate(s, 6, 0);
  ASSERT_EQ(cls.size(), 1u);
  EXPECT_EQ(*cls.begin(), c);
  EXPECT_LE(s.counts().wc(), 12u);
}

TEST(Enumerate, MatchesExpansion) {
  CounterRng rng(31);
  for (std::size_t t = 1; t <= 12; ++t) {
    std::vector<std::size_t> perm = identity_perm(t);
    rng.shuffle(perm);
    std::vector<Label> bits(t);
    for (Label& b : bits) b = static_cast<Label>(rng.bernoulli(0.5));
    const std::vector<std::pair<HiddenClassSpec, std::size_t>> cases{
        {ThresholdSpec{perm}, 1},
        {KIntervalsSpec{perm, 1}, 2},
        {KIntervalsSpec{perm, 2}, 4},
        {HammingBallSpec{Labeling(bits), 2}, 2}};
    for (const auto& [spec, dcap] : cases) {
      OracleSession s(spec);
      const ExplicitClass got = transductive_enumerate(s, t, dcap);
      const ExplicitClass want = expand(spec);
      EXPECT_EQ(as_set(got), as_set(want)) << kind_name(spec) << " t=" << t;
      EXPECT_LE(s.counts().wc(), 2 * t * want.size());
    }
  }
}

TEST(Enumerate, BudgetGuardsVcMismatch) {
  // The full cube has VC dimension 6, far above the claimed cap.
  OracleSession s(ExplicitClass::full_cube(6));
  try {
    transductive_enumerate(s, 6, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kQueryBudgetExceeded);
  }
}

TEST(Soa, ThresholdStreamsWithinLd) {
  const ExplicitClass cls = expand(identity_threshold(8));
  for (const Labeling& target : cls) {
    StreamSource src(target);
    EXPECT_LE(run_soa(cls, src).mistakes, 3u);
  }
}

TEST(Soa, SingletonAndCube) {
  const ExplicitClass one({Labeling::from_string("0110")});
  StreamSource src(Labeling::from_string("0110"));
  EXPECT_EQ(run_soa(one, src).mistakes, 0u);
  ContrarianSource adversary(4);
  EXPECT_EQ(run_soa(ExplicitClass::full_cube(4), adversary).mistakes, 4u);
}

TEST(Soa, RejectsUnrealizableStream) {
  const ExplicitClass cls = expand(identity_threshold(4));
  StreamSource src(Labeling::from_string("1010"));
  try {
    run_soa(cls, src);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotRealizableStream);
  }
}

TEST(Halving, ThresholdsAndSingleton) {
  const ExplicitClass cls = expand(identity_threshold(8));
  for (const Labeling& target : cls) {
    StreamSource src(target);
    EXPECT_LE(run_halving(cls, src).mistakes, 3u);
  }
  const ExplicitClass one({Labeling::from_string("101")});
  StreamSource src(Labeling::from_string("101"));
  EXPECT_EQ(run_halving(one, src).mistakes, 0u);
}

TEST(Halving, WorstKIntervalStream) {
  const ExplicitClass cls = kinterval_labelings(10, 2);
  const double cap = std::log2(static_cast<double>(cls.size()));
  std::size_t worst = 0;
  for (const Labeling& target : cls) {
    StreamSource src(target);
    worst = std::max(worst, run_halving(cls, src).mistakes);
  }
  EXPECT_LE(static_cast<double>(worst), cap);
  EXPECT_GE(worst, 1u);
}

TEST(Halving, VersionSpaceAtLeastHalvesOnMistakes) {
  CounterRng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.uniform_below(6);
    std::vector<Labeling> hs;
    for (int i = 0; i < 12; ++i) {
      std::vector<Label> bits(n);
      for (Label& b : bits) b = static_cast<Label>(rng.bernoulli(0.5));
      hs.emplace_back(bits);
    }
    const ExplicitClass cls(hs);
    const Labeling target = cls.labelings()[rng.uniform_below(cls.size())];
    StreamSource src(target);
    const TrialRecord rec = run_halving(cls, src);
    VersionSpace vs(cls);
    for (const RoundRecord& r : rec.rounds) {
      const std::size_t before = vs.size();
      vs.restrict(r.instance, r.truth);
      if (r.mistake) EXPECT_LE(2 * vs.size(), before);
    }
    EXPECT_LE(static_cast<double>(rec.mistakes), std::log2(static_cast<double>(cls.size())));
  }
}

TEST(Mwu, RealizableRegretEqualsMistakes) {
  const ExplicitClass cls = expand(identity_threshold(32));
  StreamSource src(cls.labelings()[7]);
  const TrialRecord rec = run_mwu_agnostic(cls, src, default_mwu_eta(cls.size(), 32), 5);
  ASSERT_TRUE(rec.regret.has_value());
  EXPECT_DOUBLE_EQ(*rec.regret, static_cast<double>(rec.mistakes));
}

TEST(Mwu, SingletonHasNoRegret) {
  const ExplicitClass cls({Labeling::from_string("0101")});
  StreamSource src(Labeling::from_string("1111"));
  const TrialRecord rec = run_mwu_agnostic(cls, src, 1.0, 3);
  EXPECT_LE(*rec.regret, 0.0);
}

TEST(Mwu, DeterministicGivenSeed) {
  const ExplicitClass cls = expand(identity_threshold(20));
  StreamSource a(Labeling::from_string("01101001011010010110")), b = a;
  EXPECT_EQ(run_mwu_agnostic(cls, a, 0.3, 77).prediction_string(),
            run_mwu_agnostic(cls, b, 0.3, 77).prediction_string());
}

TEST(Mwu, MeanRegretUnderBoundOnNoise) {
  const std::size_t t = 256;
  const ExplicitClass cls = expand(identity_threshold(t));
  const double eta = default_mwu_eta(cls.size(), t);
  EXPECT_DOUBLE_EQ(eta, std::min(1.0, std::sqrt(2.0 * std::log(257.0) / 256.0)));
  const double bound = std::sqrt(t / 2.0 * std::log(t + 1.0)) + std::log(t + 1.0);
  EXPECT_DOUBLE_EQ(mwu_regret_bound(cls.size(), t), bound);
  double sum = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    CounterRng rng(seed);
    std::vector<Label> bits(t);
    for (Label& b : bits) b = static_cast<Label>(rng.bernoulli(0.5));
    StreamSource src{Labeling(bits)};
    sum += *run_mwu_agnostic(cls, src, eta, seed + 1000).regret;
  }
  EXPECT_LE(sum / 500.0, bound);
}

TEST(Simulation, HammingSingleQueryIdentical) {
  CounterRng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Label> c(10), tgt;
    for (Label& b : c) b = static_cast<Label>(rng.bernoulli(0.5));
    tgt = c;
    tgt[rng.uniform_below(10)] ^= 1u;
    const HiddenClassSpec spec = HammingBallSpec{Labeling(c), 2};
    OracleSession direct(spec), wrapped(spec);
    SessionErmChannel channel(direct);
    StreamSource s1{Labeling(tgt)}, s2{Labeling(tgt)};
    const TrialRecord a = hamming_single_query(channel, s1);
    const SimulationResult b = simulate_erm_with_wc(hamming_single_query, wrapped, s2);
    EXPECT_EQ(a.prediction_string(), b.record.prediction_string());
    EXPECT_EQ(b.simulated_erm_calls, a.queries.erm());
    EXPECT_LE(b.record.queries.wc(), 10u * a.queries.erm());
    EXPECT_LE(b.max_wc_per_call, 10u);
  }
}

TEST(Simulation, NoErmCallsMeansNoWcCalls) {
  OracleSession s(HiddenClassSpec{identity_threshold(5)});
  StreamSource src(Labeling::from_string("00111"));
  const SimulationResult r =
      simulate_erm_with_wc([](ErmChannel&, LabelSource& l) { return predict_zero(l); }, s, src);
  EXPECT_EQ(r.record.queries.wc(), 0u);
  EXPECT_EQ(r.simulated_erm_calls, 0u);
}

TEST(Simulation, ThresholdDetErmIdentical) {
  CounterRng rng(34);
  const std::size_t t = 64;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::size_t> perm = identity_perm(t);
    rng.shuffle(perm);
    const std::size_t cut = rng.uniform_below(t + 1);
    std::vector<Label> bits(t);
    for (Point x = 0; x < t; ++x) bits[x] = perm[x] >= cut;
    const HiddenClassSpec spec = ThresholdSpec{perm};
    OracleSession direct(spec), wrapped(spec);
    SessionErmChannel channel(direct);
    StreamSource s1{Labeling(bits)}, s2{Labeling(bits)};
    const TrialRecord a = threshold_det_erm(channel, s1);
    const SimulationResult b = simulate_erm_with_wc(threshold_det_erm, wrapped, s2);
    EXPECT_EQ(a.prediction_string(), b.record.prediction_string());
    EXPECT_EQ(a.mistakes, b.record.mistakes);
    EXPECT_LE(b.record.queries.wc(), t * a.queries.erm());
  }
}

TEST(Simulation, OnlineModeCatchesLookahead) {
  OracleSession s(HiddenClassSpec{identity_threshold(6)});
  StreamSource src(Labeling::from_string("000111"));
  const ErmLearner peeker = [](ErmChannel& ch, LabelSource& l) {
    ch.begin_round(0);
    ConceptPtr c = ch.erm({});
    c->at(5);
    return predict_zero(l);
  };
  try {
    simulate_erm_with_wc(peeker, s, src, SimulationMode::kOnline);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kContractViolation);
  }
}

TEST(Simulation, OnlineModeCatchesUnseenPairs) {
  OracleSession s(HiddenClassSpec{identity_threshold(6)});
  StreamSource src(Labeling::from_string("000111"));
  const ErmLearner cheater = [](ErmChannel& ch, LabelSource& l) {
    ch.erm({{4, 1}});
    return predict_zero(l);
  };
  EXPECT_THROW(simulate_erm_with_wc(cheater, s, src, SimulationMode::kOnline), Error);
}

TEST(ErmFollow, RecordsAreConsistent) {
  OracleSession s(HiddenClassSpec{identity_threshold(16)});
  SessionErmChannel ch(s, true);
  StreamSource src(Labeling::from_string("0000000011111111"));
  const TrialRecord rec = erm_follow(ch, src);
  std::size_t mistakes = 0;
  for (const RoundRecord& r : rec.rounds) mistakes += r.mistake;
  EXPECT_EQ(mistakes, rec.mistakes);
  EXPECT_EQ(rec.rounds.size(), 16u);
  EXPECT_EQ(rec.queries.restricted_erm(), s.counts().restricted_erm());
}

}  // namespace
}  // namespace oraclearn
