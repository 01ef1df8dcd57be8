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

#ifndef ORACLEARN_ORACLES_H_
#define ORACLEARN_ORACLES_H_

// Weak consistency and ERM oracles over explicit or hidden classes, with
// per-kind query counters, an append-only transcript and optional budgets.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oraclearn/core.h"

namespace oraclearn {

enum class OracleKind { kWeakConsistency = 0, kErm, kAgnosticErm, kRestrictedErm };
inline constexpr std::size_t kOracleKindCount = 4;

std::string_view oracle_kind_name(OracleKind kind);
std::optional<OracleKind> parse_oracle_kind(std::string_view name);

enum class TieBreakPolicy {
  // Lexicographically smallest admissible labeling.
  kCanonicalMin,
  // Admissible labeling built point by point preferring the majority label of
  // the query (ties toward 0): as constant as the class allows.
  kAdversarialConstantMajority,
};

enum class RealizabilityAnswer { kRealizable, kNotRealizable };

struct QueryCounts {
  std::array<std::size_t, kOracleKindCount> by_kind{};

  std::size_t& operator[](OracleKind kind) { return by_kind[static_cast<std::size_t>(kind)]; }
  std::size_t operator[](OracleKind kind) const { return by_kind[static_cast<std::size_t>(kind)]; }
  std::size_t wc() const { return (*this)[OracleKind::kWeakConsistency]; }
  std::size_t erm() const { return (*this)[OracleKind::kErm]; }
  std::size_t agnostic_erm() const { return (*this)[OracleKind::kAgnosticErm]; }
  std::size_t restricted_erm() const { return (*this)[OracleKind::kRestrictedErm]; }
  std::size_t total() const;

  QueryCounts& operator+=(const QueryCounts& other);
  bool operator==(const QueryCounts&) const = default;
};

QueryCounts operator-(const QueryCounts& a, const QueryCounts& b);

using ClassHandle = std::variant<ExplicitClass, HiddenClassSpec>;

std::size_t domain_size(const ClassHandle& handle);

struct TranscriptEntry {
  OracleKind kind;
  LabeledSample sample;
  std::string answer;
  QueryCounts counts_after;
};

enum class TranscriptMode { kFull, kCountsOnly };

// Cell-level view of the nested-cell construction. Cells [0, revealed) have
// known labels; every later cell shares `rest`.
struct CellConcept {
  std::vector<Label> revealed;
  Label rest = 0;

  Label at(std::size_t cell) const { return cell < revealed.size() ? revealed[cell] : rest; }
};

struct CellCounts {
  std::size_t zeros = 0;
  std::size_t ones = 0;
};

// Minimum-error concept of the nested-cell class given per-cell query counts.
// `revealed_bits` are the labels of the cells before the current one; `counts`
// has one entry per revealed cell plus a final entry for the current cell.
// Cells at and beyond the current one are labeled alike, so the answer is
// independent of every unrevealed secret.
CellConcept nested_min_error_concept(std::span<const Label> revealed_bits,
                                     const std::vector<CellCounts>& counts);
std::size_t nested_errors(const CellConcept& cc, const std::vector<CellCounts>& counts);

// Uncounted ground truth, used by adversaries and by tests.
bool class_realizes(const ClassHandle& handle, const LabeledSample& sample);

class OracleSession {
 public:
  explicit OracleSession(ClassHandle handle,
                         TieBreakPolicy policy = TieBreakPolicy::kCanonicalMin,
                         TranscriptMode mode = TranscriptMode::kFull);

  std::size_t domain_size() const { return domain_size_; }
  const ClassHandle& handle() const { return handle_; }
  TieBreakPolicy policy() const { return policy_; }

  RealizabilityAnswer wc_query(const LabeledSample& sample);
  bool realizable(const LabeledSample& sample) {
    return wc_query(sample) == RealizabilityAnswer::kRealizable;
  }
  // nullopt means "not realizable".
  std::optional<Labeling> erm_query(const LabeledSample& sample);
  // Throws kEmptySample on an empty query.
  Labeling agnostic_erm_query(const LabeledSample& sample);
  // Throws kIllegalQuery unless every pair of `sample` occurs in `history`.
  std::optional<Labeling> restricted_erm_query(const LabeledSample& sample,
                                               const LabeledSample& history);

  // A query that would push a kind past its budget throws kBudgetExceeded and
  // is not answered or counted.
  void set_budget(OracleKind kind, std::size_t max_queries);
  void clear_budgets();
  std::optional<std::size_t> budget(OracleKind kind) const {
    return budgets_[static_cast<std::size_t>(kind)];
  }

  const QueryCounts& counts() const { return counts_; }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  TranscriptMode transcript_mode() const { return mode_; }
  // Line-delimited records: kind, sample, answer, running counters (tab separated).
  std::string export_transcript() const;

  // Nested-cell classes only: round t lets queries touch points (cells) <= t.
  void set_current_round(std::size_t round) { current_round_ = round; }
  std::size_t current_round() const { return current_round_; }
  std::size_t future_cell_events() const { return future_cell_events_; }

 private:
  void charge(OracleKind kind);
  void record(OracleKind kind, const LabeledSample& sample, std::string answer);
  void check_domain(const LabeledSample& sample);
  Label preferred_label(const LabeledSample& sample) const;
  std::optional<Labeling> consistent_concept(const LabeledSample& sample);
  Labeling min_error_concept(const LabeledSample& sample);

  ClassHandle handle_;
  TieBreakPolicy policy_;
  TranscriptMode mode_;
  std::size_t domain_size_;
  QueryCounts counts_;
  std::array<std::optional<std::size_t>, kOracleKindCount> budgets_{};
  std::vector<TranscriptEntry> transcript_;
  std::size_t current_round_ = 0;
  std::size_t future_cell_events_ = 0;
};

}  // namespace oraclearn

#endif  // ORACLEARN_ORACLES_H_
