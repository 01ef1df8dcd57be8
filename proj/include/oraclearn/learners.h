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

#ifndef ORACLEARN_LEARNERS_H_
#define ORACLEARN_LEARNERS_H_

// Class-agnostic online learners and the oracle reductions they rely on.
// Round t always presents point t of the domain.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oraclearn/core.h"
#include "oraclearn/oracles.h"
#include "oraclearn/rng.h"

namespace oraclearn {

// The adversary's side of the protocol. `reveal` is called once per round,
// after the learner commits to a prediction.
class LabelSource {
 public:
  virtual ~LabelSource() = default;
  virtual std::size_t length() const = 0;
  virtual Label reveal(std::size_t t, Label prediction) = 0;
};

class StreamSource final : public LabelSource {
 public:
  explicit StreamSource(Labeling labels) : labels_(std::move(labels)) {}
  std::size_t length() const override { return labels_.size(); }
  Label reveal(std::size_t t, Label) override { return labels_[t]; }
  const Labeling& labels() const { return labels_; }

 private:
  Labeling labels_;
};

struct RoundRecord {
  Point instance = 0;
  Label predicted = 0;
  Label truth = 0;
  bool mistake = false;
  bool operator==(const RoundRecord&) const = default;
};

struct TrialRecord {
  std::vector<RoundRecord> rounds;
  std::size_t mistakes = 0;
  QueryCounts queries;
  std::uint64_t seed = 0;
  std::optional<double> regret;

  void add_round(Point x, Label predicted, Label truth);
  std::string prediction_string() const;
  // One row per round: instance,predicted,truth,mistake.
  std::string rounds_csv() const;
};

class VersionSpace {
 public:
  explicit VersionSpace(const ExplicitClass& cls);
  std::size_t size() const { return surviving_.size(); }
  bool empty() const { return surviving_.empty(); }
  const std::vector<Labeling>& surviving() const { return surviving_; }
  std::size_t count_with(Point x, Label y) const;
  void restrict(Point x, Label y);

 private:
  std::vector<Labeling> surviving_;
};

// SOA over the explicit class; prediction ties go to 1.
TrialRecord run_soa(const ExplicitClass& cls, LabelSource& source);
// Majority vote of the version space; ties go to 1.
TrialRecord run_halving(const ExplicitClass& cls, LabelSource& source);

double default_mwu_eta(std::size_t class_size, std::size_t horizon);
// Randomized weighted majority with weights (1 - eta)^loss. Regret is filled
// against the best labeling of the class in hindsight.
TrialRecord run_mwu_agnostic(const ExplicitClass& cls, LabelSource& source, double eta,
                             std::uint64_t seed);
double mwu_regret_bound(std::size_t class_size, std::size_t horizon);

// Recovers the class projected onto [0, horizon) by growing a prefix tree with
// two WC queries per surviving prefix. Throws kQueryBudgetExceeded past
// budget_multiplier * 2 * horizon * sauer_bound(d_cap, horizon) queries.
ExplicitClass transductive_enumerate(OracleSession& session, std::size_t horizon,
                                     std::size_t d_cap, double budget_multiplier = 1.0);

// Concept returned by an ERM channel, evaluated point by point.
class LazyConcept {
 public:
  virtual ~LazyConcept() = default;
  virtual Label at(Point x) = 0;
};
using ConceptPtr = std::shared_ptr<LazyConcept>;

// ERM access as seen by a learner, either straight through a session or
// simulated with WC queries. Learners call begin_round before predicting at
// round t and reveal once the label is known.
class ErmChannel {
 public:
  virtual ~ErmChannel() = default;
  virtual std::size_t domain_size() const = 0;
  // nullptr when the sample is not realizable.
  virtual ConceptPtr erm(const LabeledSample& sample) = 0;
  virtual void begin_round(std::size_t) {}
  virtual void reveal(std::size_t, Label) {}
  virtual QueryCounts counts() const = 0;
};

class SessionErmChannel final : public ErmChannel {
 public:
  // With `restricted`, queries go through restricted_erm_query against the
  // pairs revealed so far.
  explicit SessionErmChannel(OracleSession& session, bool restricted = false)
      : session_(session), restricted_(restricted) {}
  std::size_t domain_size() const override { return session_.domain_size(); }
  ConceptPtr erm(const LabeledSample& sample) override;
  void reveal(std::size_t t, Label y) override { history_ = history_.with(t, y); }
  QueryCounts counts() const override { return session_.counts(); }

 private:
  OracleSession& session_;
  bool restricted_;
  LabeledSample history_;
};

enum class SimulationMode {
  // Whole instance sequence known up front; any point may be evaluated.
  kTransductive,
  // Round t may evaluate only points <= t and query only revealed pairs.
  kOnline,
};

// ERM answers reconstructed from WC queries: one realizability check per call,
// then each undetermined point up to the evaluated one is fixed in index order
// to 0 when that stays realizable and to 1 otherwise.
class WcSimulatedErmChannel final : public ErmChannel {
 public:
  WcSimulatedErmChannel(OracleSession& session, SimulationMode mode);
  std::size_t domain_size() const override { return session_.domain_size(); }
  ConceptPtr erm(const LabeledSample& sample) override;
  void begin_round(std::size_t t) override { round_ = t; }
  void reveal(std::size_t t, Label y) override { history_ = history_.with(t, y); }
  QueryCounts counts() const override { return session_.counts(); }

  std::size_t simulated_calls() const { return calls_; }
  // Largest number of WC queries attributed to a single simulated call.
  std::size_t max_wc_per_call() const;

 private:
  class Simulated;
  OracleSession& session_;
  SimulationMode mode_;
  std::size_t round_ = 0;
  LabeledSample history_;
  std::size_t calls_ = 0;
  std::vector<std::shared_ptr<std::size_t>> per_call_;
};

using ErmLearner = std::function<TrialRecord(ErmChannel&, LabelSource&)>;

struct SimulationResult {
  TrialRecord record;
  std::size_t simulated_erm_calls = 0;
  std::size_t max_wc_per_call = 0;
};

SimulationResult simulate_erm_with_wc(const ErmLearner& learner, OracleSession& session,
                                      LabelSource& source,
                                      SimulationMode mode = SimulationMode::kTransductive);

// Keeps one ERM concept and predicts with it, refreshing it on the history
// after each mistake. Predicts 0 while no concept is held.
TrialRecord erm_follow(ErmChannel& channel, LabelSource& source);

// Predicts 0 throughout without touching any oracle.
TrialRecord predict_zero(LabelSource& source);

}  // namespace oraclearn

#endif  // ORACLEARN_LEARNERS_H_
