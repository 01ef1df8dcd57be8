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

#ifndef ORACLEARN_ADVERSARIES_H_
#define ORACLEARN_ADVERSARIES_H_

// Label-stream environments: fixed targets, the nested-cell construction over
// [0,1]^(T-1), the adaptive equivalence-class ERM adversary and the uniform
// random concept environment.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oraclearn/core.h"
#include "oraclearn/learners.h"
#include "oraclearn/oracles.h"
#include "oraclearn/rng.h"

namespace oraclearn {

StreamSource realizable_stream(const Labeling& target);

// ---------------------------------------------------------------------------
// Nested cells. Coordinates are integers in units of 2^-62, so 0 is the
// origin and secrets lie in [1, 2^62 - 1].

using CellPoint = std::vector<std::uint64_t>;

struct NestedQueryPair {
  CellPoint point;
  Label label;
};

class NestedCellAdversary;

// ERM answer: a cell labeling, evaluated through the adversary's cell map.
class NestedConcept {
 public:
  NestedConcept(const NestedCellAdversary* adversary, CellConcept cells)
      : adversary_(adversary), cells_(std::move(cells)) {}
  Label at(const CellPoint& point) const;
  const CellConcept& cells() const { return cells_; }

 private:
  const NestedCellAdversary* adversary_;
  CellConcept cells_;
};

class NestedCellAdversary {
 public:
  static constexpr std::size_t kDefaultPhaseLength = 64;

  // `cells` special points; agnostic mode presents each one phase_length
  // times with i.i.d. uniform labels.
  NestedCellAdversary(std::size_t cells, std::uint64_t seed, bool agnostic,
                      std::size_t phase_length = kDefaultPhaseLength);

  std::size_t cells() const { return cells_; }
  std::size_t horizon() const { return labels_.size(); }
  bool agnostic() const { return agnostic_; }
  std::size_t phase_length() const { return phase_; }

  // Instance of round t; only coordinates of already exposed cells are nonzero.
  CellPoint instance(std::size_t t) const;
  std::size_t cell_of_round(std::size_t t) const { return t / phase_; }
  // Number of leading coordinates that match the secret vector.
  std::size_t cell_of(const CellPoint& point) const;

  void begin_round(std::size_t t) { round_ = t; }
  // Error-minimizing concept labeling every unexposed cell alike with the
  // majority label of the query (ties toward 0). Throws kFutureCellTouched
  // when a query point lies in a cell beyond the current one.
  NestedConcept agnostic_erm(const std::vector<NestedQueryPair>& sample);
  Label label(std::size_t t) const { return labels_[t]; }

  std::size_t queries() const { return queries_; }
  std::size_t future_cell_events() const { return future_events_; }
  // Errors of the best concept of the class on the whole label stream.
  std::size_t best_in_class_errors() const;
  const std::vector<std::uint64_t>& secret_z() const { return z_; }

 private:
  std::vector<Label> revealed_bits(std::size_t current_cell) const;

  std::size_t cells_;
  bool agnostic_;
  std::size_t phase_;
  std::vector<std::uint64_t> z_;
  std::vector<Label> b_;
  std::vector<Label> labels_;
  std::size_t round_ = 0;
  std::size_t queries_ = 0;
  std::size_t future_events_ = 0;
};

// ERM-only learners for the nested-cell environment, keyed by CLI name.
const std::vector<std::string>& nested_learner_names();
TrialRecord run_nested(NestedCellAdversary& adversary, std::string_view learner,
                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// Equivalence-class adversary over thresholds on at most 2^d blocks.

struct EqClassBlock {
  Label label;
  std::vector<Point> members;
};

struct EqClassQuery {
  LabeledSample sample;
  std::optional<Labeling> answer;
};

struct WitnessReport {
  bool valid = false;
  std::string failure;
  std::size_t littlestone = 0;
  std::size_t blocks = 0;
};

class EqClassAdversary {
 public:
  EqClassAdversary(std::size_t horizon, std::size_t d);

  std::size_t horizon() const { return horizon_; }
  std::size_t max_blocks() const { return max_blocks_; }
  std::size_t blocks_revealed() const { return blocks_.size(); }
  bool budget_exceeded() const { return budget_exceeded_; }

  std::optional<Labeling> erm_query(const LabeledSample& sample);
  // Label of round t given the learner's prediction.
  Label label(std::size_t t, Label prediction);
  // Places leftover uncertain points and freezes the witness.
  void finish();

  // Thresholds over the final block order, as an explicit class.
  ExplicitClass witness_class() const;
  Labeling witness_target() const;
  WitnessReport validate_witness() const;
  const std::vector<EqClassQuery>& queries() const { return log_; }

 private:
  enum class Where : std::uint8_t { kOld, kCurrent, kUncertain };
  void open_block(Point x, Label y);
  void close_with(Label y);
  void concede();
  std::vector<std::size_t> block_order() const;
  std::optional<Labeling> truthful(const LabeledSample& sample) const;
  bool favorable_realizable(const LabeledSample& sample) const;
  Labeling cut_labeling(const std::vector<std::size_t>& order, std::size_t cut,
                        Label uncertain) const;

  std::size_t horizon_;
  std::size_t max_blocks_;
  std::vector<Where> where_;
  std::vector<std::size_t> block_of_;
  std::vector<EqClassBlock> blocks_;
  std::optional<Label> current_label_;
  std::size_t uncertain_ = 0;
  bool budget_exceeded_ = false;
  bool finished_ = false;
  std::vector<std::optional<Label>> labels_;
  std::vector<EqClassQuery> log_;
};

// Protocol adapters so generic ERM learners can play against the adversary.
class EqClassErmChannel final : public ErmChannel {
 public:
  explicit EqClassErmChannel(EqClassAdversary& adversary) : adversary_(adversary) {}
  std::size_t domain_size() const override { return adversary_.horizon(); }
  ConceptPtr erm(const LabeledSample& sample) override;
  QueryCounts counts() const override { return counts_; }

 private:
  EqClassAdversary& adversary_;
  QueryCounts counts_;
};

class EqClassLabelSource final : public LabelSource {
 public:
  explicit EqClassLabelSource(EqClassAdversary& adversary) : adversary_(adversary) {}
  std::size_t length() const override { return adversary_.horizon(); }
  Label reveal(std::size_t t, Label prediction) override { return adversary_.label(t, prediction); }

 private:
  EqClassAdversary& adversary_;
};

// ---------------------------------------------------------------------------
// Uniform random concept.

enum class UniformFamily {
  // The class is exactly {target}.
  kSingleton,
  // A threshold class whose hidden order puts the target's zeros first.
  kThresholds,
  // A k-interval class with that same order (the target is one block).
  kKIntervals,
  // A Hamming ball centered at the target.
  kHamming,
};

struct UniformEnvironment {
  Labeling target;
  ClassHandle handle;
};

UniformEnvironment uniform_concept_environment(std::size_t horizon, std::uint64_t seed,
                                               UniformFamily family = UniformFamily::kSingleton,
                                               std::size_t k = 1, std::size_t d = 1);

}  // namespace oraclearn

#endif  // ORACLEARN_ADVERSARIES_H_
