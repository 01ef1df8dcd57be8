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

#include "oraclearn/adversaries.h"

#include <algorithm>
#include <bit>
#include <limits>

#include "oraclearn/error.h"

namespace oraclearn {
namespace {

constexpr std::uint64_t kSecretSpan = (std::uint64_t{1} << 62) - 1;

class FixedConcept final : public LazyConcept {
 public:
  explicit FixedConcept(Labeling c) : c_(std::move(c)) {}
  Label at(Point x) override { return c_[x]; }

 private:
  Labeling c_;
};

Label majority_of(std::size_t zeros, std::size_t ones) { return ones > zeros ? 1 : 0; }

}  // namespace

StreamSource realizable_stream(const Labeling& target) { return StreamSource(target); }

// ---------------------------------------------------------------------------
// Nested cells

Label NestedConcept::at(const CellPoint& point) const {
  return cells_.at(adversary_->cell_of(point));
}

NestedCellAdversary::NestedCellAdversary(std::size_t cells, std::uint64_t seed, bool agnostic,
                                         std::size_t phase_length)
    : cells_(cells), agnostic_(agnostic), phase_(agnostic ? phase_length : 1) {
  if (cells == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one cell");
  if (agnostic && phase_length == 0) throw Error(ErrorCode::kInvalidArgument, "phase length must be positive");
  CounterRng rng(seed);
  std::vector<std::uint64_t> seen;
  while (z_.size() + 1 < cells) {
    const std::uint64_t v = 1 + rng.uniform_below(kSecretSpan);
    if (std::find(z_.begin(), z_.end(), v) == z_.end()) z_.push_back(v);
  }
  b_.resize(cells);
  for (Label& bit : b_) bit = static_cast<Label>(rng.next_u64() & 1u);
  if (agnostic) {
    labels_.resize(cells * phase_);
    for (Label& y : labels_) y = static_cast<Label>(rng.next_u64() & 1u);
    // The best concept follows each phase's majority, so b is set to it.
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t ones = 0;
      for (std::size_t j = 0; j < phase_; ++j) ones += labels_[c * phase_ + j];
      b_[c] = majority_of(phase_ - ones, ones);
    }
  } else {
    labels_ = b_;
  }
}

CellPoint NestedCellAdversary::instance(std::size_t t) const {
  const std::size_t c = cell_of_round(t);
  CellPoint p(cells_ - 1, 0);
  for (std::size_t i = 0; i < c; ++i) p[i] = z_[i];
  return p;
}

std::size_t NestedCellAdversary::cell_of(const CellPoint& point) const {
  if (point.size() != cells_ - 1) throw Error(ErrorCode::kInvalidArgument, "point has the wrong dimension");
  std::size_t i = 0;
  while (i < z_.size() && point[i] == z_[i]) ++i;
  return i;
}

std::vector<Label> NestedCellAdversary::revealed_bits(std::size_t current_cell) const {
  return std::vector<Label>(b_.begin(), b_.begin() + static_cast<std::ptrdiff_t>(current_cell));
}

NestedConcept NestedCellAdversary::agnostic_erm(const std::vector<NestedQueryPair>& sample) {
  if (sample.empty()) throw Error(ErrorCode::kEmptySample, "agnostic ERM needs a nonempty sample");
  const std::size_t current = cell_of_round(round_);
  std::vector<CellCounts> counts(current + 1);
  for (const NestedQueryPair& q : sample) {
    const std::size_t c = cell_of(q.point);
    if (c > current) {
      ++future_events_;
      throw Error(ErrorCode::kFutureCellTouched,
                  "query reached cell " + std::to_string(c) + " during cell " + std::to_string(current));
    }
    (q.label == 0 ? counts[c].zeros : counts[c].ones) += 1;
  }
  ++queries_;
  const std::vector<Label> bits = revealed_bits(current);
  return NestedConcept(this, nested_min_error_concept(bits, counts));
}

std::size_t NestedCellAdversary::best_in_class_errors() const {
  std::size_t errors = 0;
  for (std::size_t t = 0; t < labels_.size(); ++t) errors += labels_[t] != b_[cell_of_round(t)];
  return errors;
}

const std::vector<std::string>& nested_learner_names() {
  static const std::vector<std::string> names{"erm-follow", "erm-refit", "erm-probe", "erm-perturb"};
  return names;
}

TrialRecord run_nested(NestedCellAdversary& adversary, std::string_view learner, std::uint64_t seed) {
  const auto& names = nested_learner_names();
  if (std::find(names.begin(), names.end(), learner) == names.end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown nested-cell learner '" + std::string(learner) + "'");
  }
  // Forked so a learner seeded like the adversary cannot replay its secrets.
  CounterRng rng = CounterRng(seed).fork(0x70657274ULL);
  const std::size_t start = adversary.queries();
  std::vector<NestedQueryPair> history;
  std::optional<NestedConcept> held;
  TrialRecord rec;
  rec.seed = seed;
  auto errors_on = [](const NestedConcept& c, const std::vector<NestedQueryPair>& s) {
    std::size_t e = 0;
    for (const auto& q : s) e += c.at(q.point) != q.label;
    return e;
  };
  for (std::size_t t = 0; t < adversary.horizon(); ++t) {
    adversary.begin_round(t);
    const CellPoint x = adversary.instance(t);
    Label pred = 0;
    if (learner == "erm-follow") {
      if (held) pred = held->at(x);
    } else if (learner == "erm-refit") {
      if (!history.empty()) pred = adversary.agnostic_erm(history).at(x);
    } else if (learner == "erm-probe") {
      std::size_t e[2];
      for (Label y = 0; y < 2; ++y) {
        auto probe = history;
        probe.push_back({x, y});
        e[y] = errors_on(adversary.agnostic_erm(probe), probe);
      }
      pred = e[1] < e[0] ? 1 : 0;
    } else {  // erm-perturb: a fresh point of the current cell.
      CellPoint w = x;
      const std::size_t c = adversary.cell_of_round(t);
      if (c < w.size()) w[c] = 1 + rng.uniform_below(kSecretSpan);
      auto probe = history;
      probe.push_back({w, 1});
      pred = adversary.agnostic_erm(probe).at(x);
    }
    const Label y = adversary.label(t);
    rec.add_round(t, pred, y);
    history.push_back({x, y});
    if (learner == "erm-follow" && pred != y) held = adversary.agnostic_erm(history);
  }
  rec.queries[OracleKind::kAgnosticErm] = adversary.queries() - start;
  rec.regret = static_cast<double>(rec.mistakes) - static_cast<double>(adversary.best_in_class_errors());
  return rec;
}

// ---------------------------------------------------------------------------
// Equivalence-class adversary

EqClassAdversary::EqClassAdversary(std::size_t horizon, std::size_t d)
    : horizon_(horizon),
      where_(horizon, Where::kUncertain),
      block_of_(horizon, 0),
      uncertain_(horizon),
      labels_(horizon) {
  if (d >= 16) throw Error(ErrorCode::kInvalidArgument, "dimension too large");
  max_blocks_ = std::size_t{1} << d;
  if (horizon < 2 * max_blocks_) {
    throw Error(ErrorCode::kInvalidArgument, "horizon must be at least 2^(d+1)");
  }
}

void EqClassAdversary::open_block(Point x, Label y) {
  for (const EqClassBlock& b : blocks_) {
    for (Point p : b.members) where_[p] = Where::kOld;
  }
  blocks_.push_back(EqClassBlock{y, {x}});
  where_[x] = Where::kCurrent;
  block_of_[x] = blocks_.size() - 1;
  labels_[x] = y;
  current_label_ = y;
  --uncertain_;
}

// Every uncertain point joins the current block (opening one labeled y when
// none exists).
void EqClassAdversary::close_with(Label y) {
  if (blocks_.empty()) {
    blocks_.push_back(EqClassBlock{y, {}});
    current_label_ = y;
  }
  EqClassBlock& c = blocks_.back();
  for (Point x = 0; x < horizon_; ++x) {
    if (where_[x] != Where::kUncertain) continue;
    c.members.push_back(x);
    where_[x] = Where::kCurrent;
    block_of_[x] = blocks_.size() - 1;
    labels_[x] = c.label;
  }
  uncertain_ = 0;
}

void EqClassAdversary::concede() {
  budget_exceeded_ = true;
  close_with(0);
}

void EqClassAdversary::finish() {
  if (uncertain_ > 0) close_with(0);
  finished_ = true;
}

std::vector<std::size_t> EqClassAdversary::block_order() const {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].label == 0) order.push_back(i);
  }
  for (std::size_t i = blocks_.size(); i-- > 0;) {
    if (blocks_[i].label == 1) order.push_back(i);
  }
  return order;
}

Labeling EqClassAdversary::cut_labeling(const std::vector<std::size_t>& order, std::size_t cut,
                                        Label uncertain) const {
  std::vector<Label> bits(horizon_, uncertain);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    for (Point x : blocks_[order[pos]].members) bits[x] = pos >= cut ? 1 : 0;
  }
  return Labeling(std::move(bits));
}

bool EqClassAdversary::favorable_realizable(const LabeledSample& sample) const {
  // Blocks sit at multiples of 4; uncertain points go between the two sides,
  // their zeros before their ones.
  const std::vector<std::size_t> order = block_order();
  std::vector<std::size_t> pos_of_block(blocks_.size());
  std::size_t zero_blocks = 0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    pos_of_block[order[pos]] = pos;
    zero_blocks += blocks_[order[pos]].label == 0;
  }
  std::size_t max_zero = 0, min_one = std::numeric_limits<std::size_t>::max();
  bool any_zero = false;
  for (const auto& [x, y] : sample) {
    std::size_t p;
    if (where_[x] == Where::kUncertain) {
      p = 4 * zero_blocks + (y == 0 ? 1 : 2);
    } else {
      const std::size_t bp = pos_of_block[block_of_[x]];
      p = 4 * bp + (bp >= zero_blocks ? 4 : 0);
    }
    if (y == 0) {
      any_zero = true;
      max_zero = std::max(max_zero, p);
    } else {
      min_one = std::min(min_one, p);
    }
  }
  return !any_zero || max_zero < min_one;
}

std::optional<Labeling> EqClassAdversary::truthful(const LabeledSample& sample) const {
  const std::vector<std::size_t> order = block_order();
  std::vector<std::size_t> pos_of_block(blocks_.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) pos_of_block[order[pos]] = pos;
  std::size_t max_zero = 0, min_one = order.size();
  bool any_zero = false;
  for (const auto& [x, y] : sample) {
    const std::size_t p = pos_of_block[block_of_[x]];
    if (y == 0) {
      any_zero = true;
      max_zero = std::max(max_zero, p);
    } else {
      min_one = std::min(min_one, p);
    }
  }
  if (any_zero && max_zero >= min_one) return std::nullopt;
  return cut_labeling(order, min_one, 0);
}

std::optional<Labeling> EqClassAdversary::erm_query(const LabeledSample& sample) {
  if (finished_) throw Error(ErrorCode::kContractViolation, "game is over");
  if (sample.extent() > horizon_) throw Error(ErrorCode::kInvalidArgument, "query point outside the domain");
  auto answer = [&](std::optional<Labeling> a) {
    log_.push_back(EqClassQuery{sample, a});
    return a;
  };
  if (log_.size() + 1 > horizon_ / 2 && !budget_exceeded_ && uncertain_ > 0) concede();
  if (uncertain_ == 0) return answer(truthful(sample));

  if (blocks_.empty()) {
    std::optional<Label> only;
    bool mixed = false;
    for (const auto& p : sample) {
      if (only && *only != p.label) mixed = true;
      only = p.label;
    }
    if (!mixed) return answer(Labeling::constant(horizon_, only.value_or(0)));
    // The earliest 1-labeled point opens the leftmost 0-block, which puts every
    // 0-labeled point of the query at or to its right.
    for (const auto& [x, y] : sample) {
      if (y == 1) {
        open_block(x, 0);
        break;
      }
    }
    if (blocks_.size() == max_blocks_) close_with(0);
    return answer(std::nullopt);
  }

  if (!favorable_realizable(sample)) return answer(std::nullopt);
  const Label yc = *current_label_;
  std::optional<Point> flip;
  bool has_current_label = false;
  for (const auto& [x, y] : sample) {
    if (where_[x] == Where::kOld) continue;
    if (y == yc) has_current_label = true;
    if (y != yc && where_[x] == Where::kUncertain && !flip) flip = x;
  }
  if (flip) {
    // Another point of the query with label yc exists once flip is removed
    // from consideration, unless flip is the only point of C and U queried.
    bool other = false;
    for (const auto& [x, y] : sample) {
      if (where_[x] != Where::kOld && x != *flip && y == yc) other = true;
    }
    if (other) {
      EqClassBlock& c = blocks_.back();
      c.members.push_back(*flip);
      where_[*flip] = Where::kCurrent;
      block_of_[*flip] = blocks_.size() - 1;
      labels_[*flip] = yc;
      --uncertain_;
      return answer(std::nullopt);
    }
  }
  // Cuts that keep the current block and the uncertain points together stay
  // valid wherever the uncertain points end up.
  const std::vector<std::size_t> order = block_order();
  const std::size_t current = blocks_.size() - 1;
  const std::size_t pc = static_cast<std::size_t>(
      std::find(order.begin(), order.end(), current) - order.begin());
  const Label preferred = (flip && !has_current_label) ? static_cast<Label>(1 - yc) : yc;
  for (Label family : {preferred, static_cast<Label>(1 - preferred)}) {
    // family 1: cuts at or left of the current block, nearest first.
    std::vector<std::size_t> cuts;
    if (family == 1) {
      for (std::size_t j = pc + 1; j-- > 0;) cuts.push_back(j);
    } else {
      for (std::size_t j = pc + 1; j <= order.size(); ++j) cuts.push_back(j);
    }
    for (std::size_t j : cuts) {
      Labeling c = cut_labeling(order, j, family);
      if (is_consistent(c, sample)) return answer(std::move(c));
    }
  }
  throw Error(ErrorCode::kContractViolation, "no robust concept fits a realizable query");
}

Label EqClassAdversary::label(std::size_t t, Label prediction) {
  if (finished_) throw Error(ErrorCode::kContractViolation, "game is over");
  if (t >= horizon_) throw Error(ErrorCode::kInvalidArgument, "round outside the horizon");
  if (where_[t] != Where::kUncertain) return *labels_[t];
  const Label y = static_cast<Label>(1 - prediction);
  open_block(t, y);
  if (blocks_.size() == max_blocks_) close_with(y);
  return y;
}

ExplicitClass EqClassAdversary::witness_class() const {
  if (uncertain_ > 0) throw Error(ErrorCode::kContractViolation, "witness needs a finished game");
  const std::vector<std::size_t> order = block_order();
  std::vector<Labeling> cuts;
  for (std::size_t j = 0; j <= order.size(); ++j) cuts.push_back(cut_labeling(order, j, 0));
  return ExplicitClass(std::move(cuts));
}

Labeling EqClassAdversary::witness_target() const {
  std::vector<Label> bits(horizon_);
  for (Point x = 0; x < horizon_; ++x) {
    if (!labels_[x]) throw Error(ErrorCode::kContractViolation, "witness needs a finished game");
    bits[x] = *labels_[x];
  }
  return Labeling(std::move(bits));
}

WitnessReport EqClassAdversary::validate_witness() const {
  WitnessReport report;
  report.blocks = blocks_.size();
  if (uncertain_ > 0) {
    report.failure = "uncertain points remain";
    return report;
  }
  const ExplicitClass cls = witness_class();
  const Labeling target = witness_target();
  if (blocks_.size() > max_blocks_) {
    report.failure = "too many blocks";
    return report;
  }
  if (!cls.contains(target)) {
    report.failure = "labels are not a threshold over the blocks";
    return report;
  }
  for (std::size_t i = 0; i < log_.size(); ++i) {
    const EqClassQuery& q = log_[i];
    const bool realizable = std::any_of(cls.begin(), cls.end(),
                                        [&](const Labeling& c) { return is_consistent(c, q.sample); });
    if (!q.answer && realizable) {
      report.failure = "query " + std::to_string(i) + " was realizable";
      return report;
    }
    if (q.answer && !(cls.contains(*q.answer) && is_consistent(*q.answer, q.sample))) {
      report.failure = "query " + std::to_string(i) + " answer is not a consistent witness concept";
      return report;
    }
  }
  if (horizon_ <= kMaxLittlestoneDomain) {
    report.littlestone = littlestone_dimension(cls);
    const std::size_t d = static_cast<std::size_t>(std::bit_width(max_blocks_) - 1);
    if (report.littlestone > d) {
      report.failure = "witness class exceeds the Littlestone budget";
      return report;
    }
  }
  report.valid = true;
  return report;
}

ConceptPtr EqClassErmChannel::erm(const LabeledSample& sample) {
  ++counts_[OracleKind::kErm];
  auto c = adversary_.erm_query(sample);
  if (!c) return nullptr;
  return std::make_shared<FixedConcept>(std::move(*c));
}

// ---------------------------------------------------------------------------
// Uniform random concept

UniformEnvironment uniform_concept_environment(std::size_t horizon, std::uint64_t seed,
                                               UniformFamily family, std::size_t k, std::size_t d) {
  if (horizon == 0) throw Error(ErrorCode::kInvalidArgument, "horizon must be positive");
  CounterRng rng(seed);
  std::vector<Label> bits(horizon);
  for (Label& b : bits) b = static_cast<Label>(rng.next_u64() & 1u);
  Labeling target(bits);
  auto zeros_first_perm = [&] {
    std::vector<Point> zeros, ones;
    for (Point x = 0; x < horizon; ++x) (bits[x] ? ones : zeros).push_back(x);
    rng.shuffle(zeros);
    rng.shuffle(ones);
    std::vector<std::size_t> perm(horizon);
    std::size_t r = 0;
    for (Point x : zeros) perm[x] = r++;
    for (Point x : ones) perm[x] = r++;
    return perm;
  };
  switch (family) {
    case UniformFamily::kSingleton:
      return {target, ExplicitClass({target})};
    case UniformFamily::kThresholds:
      return {target, HiddenClassSpec{ThresholdSpec{zeros_first_perm()}}};
    case UniformFamily::kKIntervals:
      if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k-interval family needs k >= 1");
      return {target, HiddenClassSpec{KIntervalsSpec{zeros_first_perm(), k}}};
    case UniformFamily::kHamming:
      return {target, HiddenClassSpec{HammingBallSpec{target, d}}};
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown family");
}

}  // namespace oraclearn
