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

#include "oraclearn/oracles.h"

#include <algorithm>
#include <limits>
#include <sstream>

#include "oraclearn/error.h"

namespace oraclearn {
namespace {

constexpr std::size_t kInfeasible = std::numeric_limits<std::size_t>::max();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Per-point partial assignment used by the greedy tie-breaker.
using Fixed = std::vector<std::optional<Label>>;

// Rank of each cell in the nested-cell threshold order: 0-cells by increasing
// index, then 1-cells by decreasing index.
std::vector<std::size_t> nested_ranks(const std::vector<Label>& b) {
  std::vector<std::size_t> rank(b.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] == 0) rank[i] = next++;
  }
  for (std::size_t i = b.size(); i-- > 0;) {
    if (b[i] == 1) rank[i] = next++;
  }
  return rank;
}

bool threshold_realizes(const std::vector<std::size_t>& perm, const LabeledSample& s) {
  std::size_t max_zero = 0;
  bool any_zero = false;
  std::size_t min_one = std::numeric_limits<std::size_t>::max();
  for (const auto& [x, y] : s) {
    if (y == 0) {
      any_zero = true;
      max_zero = std::max(max_zero, perm[x]);
    } else {
      min_one = std::min(min_one, perm[x]);
    }
  }
  return !any_zero || max_zero < min_one;
}

bool kintervals_realizes(const KIntervalsSpec& spec, const LabeledSample& s) {
  std::vector<std::pair<std::size_t, Label>> by_rank;
  by_rank.reserve(s.size());
  for (const auto& [x, y] : s) by_rank.emplace_back(spec.perm[x], y);
  std::sort(by_rank.begin(), by_rank.end());
  std::size_t blocks = 0;
  Label prev = 0;
  for (const auto& [r, y] : by_rank) {
    if (y == 1 && prev == 0) ++blocks;
    prev = y;
  }
  return blocks <= spec.k;
}

bool hamming_realizes(const HammingBallSpec& spec, const LabeledSample& s) {
  std::size_t mismatches = 0;
  for (const auto& [x, y] : s) mismatches += (spec.center[x] != y);
  return mismatches <= spec.d;
}

// Minimum sample errors over concepts agreeing with `fixed`.
std::size_t kintervals_min_errors(const KIntervalsSpec& spec, const LabeledSample& s,
                                  const Fixed& fixed) {
  const std::size_t n = spec.perm.size();
  const std::size_t k = spec.k;
  std::vector<std::optional<Label>> sample_label(n);
  for (const auto& [x, y] : s) sample_label[x] = y;
  const std::vector<Point> order = points_by_rank(spec.perm);
  // dp[j][in]: j blocks opened so far, in = last point labeled 1.
  std::vector<std::array<std::size_t, 2>> dp(k + 1, {kInfeasible, kInfeasible});
  dp[0][0] = 0;
  for (Point x : order) {
    std::vector<std::array<std::size_t, 2>> nd(k + 1, {kInfeasible, kInfeasible});
    for (std::size_t j = 0; j <= k; ++j) {
      for (int in = 0; in < 2; ++in) {
        if (dp[j][in] == kInfeasible) continue;
        for (Label y = 0; y < 2; ++y) {
          if (fixed[x] && *fixed[x] != y) continue;
          std::size_t nj = j + ((y == 1 && in == 0) ? 1 : 0);
          if (nj > k) continue;
          std::size_t cost = dp[j][in] + ((sample_label[x] && *sample_label[x] != y) ? 1 : 0);
          nd[nj][y] = std::min(nd[nj][y], cost);
        }
      }
    }
    dp = std::move(nd);
  }
  std::size_t best = kInfeasible;
  for (const auto& row : dp) best = std::min({best, row[0], row[1]});
  return best;
}

std::size_t hamming_min_errors(const HammingBallSpec& spec, const LabeledSample& s,
                               const Fixed& fixed) {
  const std::size_t n = spec.center.size();
  std::vector<std::optional<Label>> sample_label(n);
  for (const auto& [x, y] : s) sample_label[x] = y;
  std::size_t away = 0, errors = 0, free_mismatch = 0;
  for (Point x = 0; x < n; ++x) {
    if (fixed[x]) {
      away += (*fixed[x] != spec.center[x]);
      if (sample_label[x] && *sample_label[x] != *fixed[x]) ++errors;
    } else if (sample_label[x] && *sample_label[x] != spec.center[x]) {
      ++free_mismatch;
    }
  }
  if (away > spec.d) return kInfeasible;
  return errors + free_mismatch - std::min(free_mismatch, spec.d - away);
}

// Greedy extension in index order: each point takes `prefer` unless that
// would raise the achievable error above the optimum.
template <class MinErrors>
Labeling greedy_min_error(std::size_t n, Label prefer, MinErrors&& min_errors) {
  Fixed fixed(n);
  const std::size_t opt = min_errors(fixed);
  std::vector<Label> bits(n);
  for (Point x = 0; x < n; ++x) {
    fixed[x] = prefer;
    if (min_errors(fixed) != opt) fixed[x] = static_cast<Label>(1 - prefer);
    bits[x] = *fixed[x];
  }
  return Labeling(std::move(bits));
}

std::size_t sample_errors(const Labeling& c, const LabeledSample& s) {
  std::size_t e = 0;
  for (const auto& [x, y] : s) e += (c[x] != y);
  return e;
}

Labeling explicit_min_error(const ExplicitClass& cls, const LabeledSample& s, Label prefer) {
  std::size_t best = kInfeasible;
  std::vector<const Labeling*> pool;
  for (const Labeling& c : cls) {
    std::size_t e = sample_errors(c, s);
    if (e < best) {
      best = e;
      pool.clear();
    }
    if (e == best) pool.push_back(&c);
  }
  for (Point x = 0; x < cls.domain_size() && pool.size() > 1; ++x) {
    bool has_pref = std::any_of(pool.begin(), pool.end(),
                                [&](const Labeling* c) { return (*c)[x] == prefer; });
    Label keep = has_pref ? prefer : static_cast<Label>(1 - prefer);
    std::erase_if(pool, [&](const Labeling* c) { return (*c)[x] != keep; });
  }
  return *pool.front();
}

// Threshold cuts sweep: cut j labels rank >= j with 1. Preferring 0 takes the
// largest optimal cut (pointwise smallest labeling), preferring 1 the smallest.
Labeling threshold_min_error(const std::vector<std::size_t>& perm, const LabeledSample& s,
                             Label prefer) {
  const std::size_t n = perm.size();
  std::vector<std::size_t> zeros_at(n, 0), ones_at(n, 0);
  std::size_t total_zeros = 0;
  for (const auto& [x, y] : s) {
    if (y == 0) {
      ++zeros_at[perm[x]];
      ++total_zeros;
    } else {
      ++ones_at[perm[x]];
    }
  }
  // errors(j) = ones below j + zeros at or above j.
  std::size_t ones_below = 0, zeros_above = total_zeros;
  std::size_t best = kInfeasible, best_cut = 0;
  for (std::size_t j = 0; j <= n; ++j) {
    std::size_t e = ones_below + zeros_above;
    if (e < best || (e == best && prefer == 0)) {
      best = e;
      best_cut = j;
    }
    if (j < n) {
      ones_below += ones_at[j];
      zeros_above -= zeros_at[j];
    }
  }
  std::vector<Label> bits(n);
  for (Point x = 0; x < n; ++x) bits[x] = perm[x] >= best_cut ? 1 : 0;
  return Labeling(std::move(bits));
}

Label majority_label(const LabeledSample& s) {
  std::size_t ones = 0;
  for (const auto& p : s) ones += p.label;
  return (2 * ones > s.size()) ? 1 : 0;
}

}  // namespace

std::string_view oracle_kind_name(OracleKind kind) {
  switch (kind) {
    case OracleKind::kWeakConsistency: return "wc";
    case OracleKind::kErm: return "erm";
    case OracleKind::kAgnosticErm: return "agnostic_erm";
    case OracleKind::kRestrictedErm: return "restricted_erm";
  }
  return "unknown";
}

std::optional<OracleKind> parse_oracle_kind(std::string_view name) {
  for (std::size_t i = 0; i < kOracleKindCount; ++i) {
    auto kind = static_cast<OracleKind>(i);
    if (oracle_kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::size_t QueryCounts::total() const {
  std::size_t t = 0;
  for (std::size_t c : by_kind) t += c;
  return t;
}

QueryCounts& QueryCounts::operator+=(const QueryCounts& other) {
  for (std::size_t i = 0; i < kOracleKindCount; ++i) by_kind[i] += other.by_kind[i];
  return *this;
}

QueryCounts operator-(const QueryCounts& a, const QueryCounts& b) {
  QueryCounts out;
  for (std::size_t i = 0; i < kOracleKindCount; ++i) out.by_kind[i] = a.by_kind[i] - b.by_kind[i];
  return out;
}

std::size_t domain_size(const ClassHandle& handle) {
  return std::visit(Overloaded{[](const ExplicitClass& c) { return c.domain_size(); },
                               [](const HiddenClassSpec& s) { return domain_size(s); }},
                    handle);
}

CellConcept nested_min_error_concept(std::span<const Label> revealed_bits,
                                     const std::vector<CellCounts>& counts) {
  const std::size_t t = revealed_bits.size();
  if (counts.size() != t + 1) {
    throw Error(ErrorCode::kInvalidArgument, "need one count per revealed cell plus the current cell");
  }
  // Units in threshold order; the current and all later cells form one block.
  constexpr std::size_t kMiddle = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> units;
  for (std::size_t i = 0; i < t; ++i) {
    if (revealed_bits[i] == 0) units.push_back(i);
  }
  const std::size_t middle_pos = units.size();
  units.push_back(kMiddle);
  for (std::size_t i = t; i-- > 0;) {
    if (revealed_bits[i] == 1) units.push_back(i);
  }
  auto unit_counts = [&](std::size_t u) -> const CellCounts& {
    return counts[u == kMiddle ? t : u];
  };
  std::size_t zeros_total = 0, ones_total = 0;
  for (const CellCounts& c : counts) {
    zeros_total += c.zeros;
    ones_total += c.ones;
  }
  const Label majority = ones_total > zeros_total ? 1 : 0;

  std::size_t best = kInfeasible, best_cut = 0;
  bool best_has_majority = false;
  std::size_t ones_below = 0, zeros_above = zeros_total;
  for (std::size_t j = 0; j <= units.size(); ++j) {
    const std::size_t e = ones_below + zeros_above;
    const Label middle_label = middle_pos >= j ? 1 : 0;
    const bool has_majority = middle_label == majority;
    if (e < best || (e == best && (has_majority || !best_has_majority))) {
      best = e;
      best_cut = j;
      best_has_majority = has_majority;
    }
    if (j < units.size()) {
      ones_below += unit_counts(units[j]).ones;
      zeros_above -= unit_counts(units[j]).zeros;
    }
  }
  CellConcept out;
  out.revealed.assign(t, 0);
  for (std::size_t pos = 0; pos < units.size(); ++pos) {
    const Label y = pos >= best_cut ? 1 : 0;
    if (units[pos] == kMiddle) {
      out.rest = y;
    } else {
      out.revealed[units[pos]] = y;
    }
  }
  return out;
}

std::size_t nested_errors(const CellConcept& cc, const std::vector<CellCounts>& counts) {
  std::size_t e = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    e += cc.at(i) == 1 ? counts[i].zeros : counts[i].ones;
  }
  return e;
}

bool class_realizes(const ClassHandle& handle, const LabeledSample& sample) {
  return std::visit(
      Overloaded{
          [&](const ExplicitClass& cls) {
            return std::any_of(cls.begin(), cls.end(),
                               [&](const Labeling& c) { return is_consistent(c, sample); });
          },
          [&](const HiddenClassSpec& spec) {
            return std::visit(
                Overloaded{
                    [&](const ThresholdSpec& s) { return threshold_realizes(s.perm, sample); },
                    [&](const KIntervalsSpec& s) { return kintervals_realizes(s, sample); },
                    [&](const HammingBallSpec& s) { return hamming_realizes(s, sample); },
                    [&](const NestedCellsSpec& s) {
                      return threshold_realizes(nested_ranks(s.b), sample);
                    }},
                spec);
          }},
      handle);
}

OracleSession::OracleSession(ClassHandle handle, TieBreakPolicy policy, TranscriptMode mode)
    : handle_(std::move(handle)), policy_(policy), mode_(mode) {
  if (auto* spec = std::get_if<HiddenClassSpec>(&handle_)) validate(*spec);
  domain_size_ = oraclearn::domain_size(handle_);
}

void OracleSession::set_budget(OracleKind kind, std::size_t max_queries) {
  budgets_[static_cast<std::size_t>(kind)] = max_queries;
}

void OracleSession::clear_budgets() { budgets_ = {}; }

void OracleSession::charge(OracleKind kind) {
  const auto& cap = budgets_[static_cast<std::size_t>(kind)];
  if (cap && counts_[kind] >= *cap) {
    throw Error(ErrorCode::kBudgetExceeded, std::string(oracle_kind_name(kind)) +
                                                " budget of " + std::to_string(*cap) +
                                                " exhausted");
  }
  ++counts_[kind];
}

void OracleSession::record(OracleKind kind, const LabeledSample& sample, std::string answer) {
  if (mode_ == TranscriptMode::kCountsOnly) return;
  transcript_.push_back(TranscriptEntry{kind, sample, std::move(answer), counts_});
}

void OracleSession::check_domain(const LabeledSample& sample) {
  if (sample.extent() > domain_size_) {
    throw Error(ErrorCode::kInvalidArgument, "query point outside the domain");
  }
  const auto* spec = std::get_if<HiddenClassSpec>(&handle_);
  if (spec && std::holds_alternative<NestedCellsSpec>(*spec) &&
      sample.extent() > current_round_ + 1) {
    ++future_cell_events_;
    throw Error(ErrorCode::kFutureCellTouched,
                "query touches cell " + std::to_string(sample.extent() - 1) + " at round " +
                    std::to_string(current_round_));
  }
}

Label OracleSession::preferred_label(const LabeledSample& sample) const {
  return policy_ == TieBreakPolicy::kCanonicalMin ? 0 : majority_label(sample);
}

Labeling OracleSession::min_error_concept(const LabeledSample& sample) {
  const Label prefer = preferred_label(sample);
  const std::size_t n = domain_size_;
  if (const auto* cls = std::get_if<ExplicitClass>(&handle_)) {
    return explicit_min_error(*cls, sample, prefer);
  }
  const auto& spec = std::get<HiddenClassSpec>(handle_);
  return std::visit(
      Overloaded{
          [&](const ThresholdSpec& s) { return threshold_min_error(s.perm, sample, prefer); },
          [&](const KIntervalsSpec& s) {
            return greedy_min_error(
                n, prefer, [&](const Fixed& f) { return kintervals_min_errors(s, sample, f); });
          },
          [&](const HammingBallSpec& s) {
            return greedy_min_error(
                n, prefer, [&](const Fixed& f) { return hamming_min_errors(s, sample, f); });
          },
          [&](const NestedCellsSpec& s) {
            // Only cells up to the current round may be touched; the answer is
            // a function of the bits before it.
            const std::size_t t = std::min(current_round_, n - 1);
            std::vector<CellCounts> counts(t + 1);
            for (const auto& [x, y] : sample) {
              auto& c = counts[std::min<std::size_t>(x, t)];
              (y == 0 ? c.zeros : c.ones) += 1;
            }
            CellConcept cc = nested_min_error_concept(
                std::span<const Label>(s.b.data(), t), counts);
            std::vector<Label> bits(n);
            for (std::size_t i = 0; i < n; ++i) bits[i] = cc.at(i);
            return Labeling(std::move(bits));
          }},
      spec);
}

std::optional<Labeling> OracleSession::consistent_concept(const LabeledSample& sample) {
  if (!class_realizes(handle_, sample)) return std::nullopt;
  Labeling c = min_error_concept(sample);
  if (!is_consistent(c, sample)) {
    throw Error(ErrorCode::kInconsistentOracle, "tie-breaker returned an inconsistent concept");
  }
  return c;
}

RealizabilityAnswer OracleSession::wc_query(const LabeledSample& sample) {
  check_domain(sample);
  charge(OracleKind::kWeakConsistency);
  const bool ok = class_realizes(handle_, sample);
  record(OracleKind::kWeakConsistency, sample, ok ? "realizable" : "not_realizable");
  return ok ? RealizabilityAnswer::kRealizable : RealizabilityAnswer::kNotRealizable;
}

std::optional<Labeling> OracleSession::erm_query(const LabeledSample& sample) {
  check_domain(sample);
  charge(OracleKind::kErm);
  auto c = consistent_concept(sample);
  record(OracleKind::kErm, sample, c ? c->to_string() : "not_realizable");
  return c;
}

Labeling OracleSession::agnostic_erm_query(const LabeledSample& sample) {
  if (sample.empty()) throw Error(ErrorCode::kEmptySample, "agnostic ERM needs a nonempty sample");
  check_domain(sample);
  charge(OracleKind::kAgnosticErm);
  Labeling c = min_error_concept(sample);
  record(OracleKind::kAgnosticErm, sample, c.to_string());
  return c;
}

std::optional<Labeling> OracleSession::restricted_erm_query(const LabeledSample& sample,
                                                            const LabeledSample& history) {
  for (const LabeledPoint& p : sample) {
    if (!history.contains(p)) {
      throw Error(ErrorCode::kIllegalQuery,
                  "pair " + std::to_string(p.point) + ":" + std::to_string(p.label) +
                      " was not revealed by the adversary");
    }
  }
  check_domain(sample);
  charge(OracleKind::kRestrictedErm);
  auto c = consistent_concept(sample);
  record(OracleKind::kRestrictedErm, sample, c ? c->to_string() : "not_realizable");
  return c;
}

std::string OracleSession::export_transcript() const {
  std::ostringstream out;
  for (const TranscriptEntry& e : transcript_) {
    out << oracle_kind_name(e.kind) << '\t' << e.sample.to_string() << '\t' << e.answer << '\t'
        << "wc=" << e.counts_after.wc() << ",erm=" << e.counts_after.erm()
        << ",agnostic_erm=" << e.counts_after.agnostic_erm()
        << ",restricted_erm=" << e.counts_after.restricted_erm() << '\n';
  }
  return out.str();
}

}  // namespace oraclearn
