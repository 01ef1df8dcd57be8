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

#include "oraclearn/core.h"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

#include "oraclearn/error.h"

namespace oraclearn {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDomainTooLarge: return "DomainTooLarge";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kConflictingLabels: return "ConflictingLabels";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kIllegalQuery: return "IllegalQuery";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kQueryBudgetExceeded: return "QueryBudgetExceeded";
    case ErrorCode::kNotRealizableStream: return "NotRealizableStream";
    case ErrorCode::kContractViolation: return "ContractViolation";
    case ErrorCode::kInconsistentOracle: return "InconsistentOracle";
    case ErrorCode::kNoUnrealizableLabeling: return "NoUnrealizableLabeling";
    case ErrorCode::kAmbiguousCenter: return "AmbiguousCenter";
    case ErrorCode::kFutureCellTouched: return "FutureCellTouched";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Labeling

Labeling::Labeling(std::vector<Label> bits) : bits_(std::move(bits)) {
  for (Label b : bits_) {
    if (b > 1) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  }
}

Labeling Labeling::constant(std::size_t size, Label value) {
  return Labeling(std::vector<Label>(size, value));
}

Labeling Labeling::from_string(std::string_view text) {
  std::vector<Label> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw Error(ErrorCode::kInvalidArgument,
                  "labeling strings contain only 0 and 1: '" + std::string(text) + "'");
    }
    bits.push_back(static_cast<Label>(c - '0'));
  }
  return Labeling(std::move(bits));
}

Labeling Labeling::with(Point x, Label y) const {
  Labeling copy = *this;
  copy.bits_.at(x) = y;
  return copy;
}

std::size_t Labeling::hamming_distance(const Labeling& other) const {
  if (other.size() != size()) {
    throw Error(ErrorCode::kInvalidArgument, "labelings of different lengths");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) d += bits_[i] != other.bits_[i];
  return d;
}

std::size_t Labeling::count_ones() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), Label{1}));
}

std::string Labeling::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
  return s;
}

// ---------------------------------------------------------------------------
// LabeledSample

LabeledSample::LabeledSample(std::initializer_list<LabeledPoint> pairs)
    : LabeledSample(std::vector<LabeledPoint>(pairs)) {}

LabeledSample::LabeledSample(std::vector<LabeledPoint> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (pairs_[i].label > 1) {
      throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    }
    if (i > 0 && pairs_[i].point == pairs_[i - 1].point) {
      throw Error(ErrorCode::kConflictingLabels,
                  "point " + std::to_string(pairs_[i].point) + " carries both labels");
    }
  }
}

LabeledSample LabeledSample::restrict(const Labeling& labeling,
                                      const std::vector<Point>& points) {
  std::vector<LabeledPoint> pairs;
  pairs.reserve(points.size());
  for (Point x : points) pairs.push_back({x, labeling[x]});
  return LabeledSample(std::move(pairs));
}

std::optional<Label> LabeledSample::label_of(Point x) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), x,
                             [](const LabeledPoint& p, Point v) { return p.point < v; });
  if (it == pairs_.end() || it->point != x) return std::nullopt;
  return it->label;
}

bool LabeledSample::contains(const LabeledPoint& pair) const {
  auto label = label_of(pair.point);
  return label.has_value() && *label == pair.label;
}

LabeledSample LabeledSample::with(Point x, Label y) const {
  if (y > 1) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  LabeledSample copy = *this;
  auto it = std::lower_bound(copy.pairs_.begin(), copy.pairs_.end(), x,
                             [](const LabeledPoint& p, Point v) { return p.point < v; });
  if (it != copy.pairs_.end() && it->point == x) {
    if (it->label != y) {
      throw Error(ErrorCode::kConflictingLabels,
                  "point " + std::to_string(x) + " carries both labels");
    }
    return copy;
  }
  copy.pairs_.insert(it, LabeledPoint{x, y});
  return copy;
}

std::size_t LabeledSample::extent() const {
  return pairs_.empty() ? 0 : pairs_.back().point + 1;
}

std::string LabeledSample::to_string() const {
  std::string out;
  for (const auto& p : pairs_) {
    if (!out.empty()) out += ',';
    out += std::to_string(p.point);
    out += ':';
    out += static_cast<char>('0' + p.label);
  }
  return out;
}

bool is_consistent(const Labeling& labeling, const LabeledSample& sample) {
  for (const auto& [x, y] : sample) {
    if (x >= labeling.size() || labeling[x] != y) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// ExplicitClass

ExplicitClass::ExplicitClass(std::vector<Labeling> labelings) : labelings_(std::move(labelings)) {
  if (labelings_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "a concept class needs at least one labeling");
  }
  domain_size_ = labelings_.front().size();
  for (const auto& l : labelings_) {
    if (l.size() != domain_size_) {
      throw Error(ErrorCode::kInvalidArgument, "labelings of different lengths in one class");
    }
  }
  std::sort(labelings_.begin(), labelings_.end());
  labelings_.erase(std::unique(labelings_.begin(), labelings_.end()), labelings_.end());
}

ExplicitClass ExplicitClass::full_cube(std::size_t domain_size) {
  if (domain_size > kMaxVcDomain) {
    throw Error(ErrorCode::kDomainTooLarge, "full cube over more than 24 points");
  }
  std::vector<Labeling> all;
  all.reserve(std::size_t{1} << domain_size);
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << domain_size); ++m) {
    all.push_back(from_mask(m, domain_size));
  }
  return ExplicitClass(std::move(all));
}

ExplicitClass ExplicitClass::parse(std::string_view text) {
  std::vector<Labeling> labelings;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (!line.empty()) labelings.push_back(Labeling::from_string(line));
    start = end + 1;
  }
  return ExplicitClass(std::move(labelings));
}

bool ExplicitClass::contains(const Labeling& labeling) const {
  return std::binary_search(labelings_.begin(), labelings_.end(), labeling);
}

ExplicitClass ExplicitClass::reordered(const std::vector<Point>& order) const {
  if (order.size() != domain_size_) {
    throw Error(ErrorCode::kInvalidArgument, "reordering must cover the whole domain");
  }
  std::vector<Labeling> out;
  out.reserve(labelings_.size());
  for (const auto& l : labelings_) {
    std::vector<Label> bits(domain_size_);
    for (std::size_t i = 0; i < domain_size_; ++i) bits[i] = l[order[i]];
    out.emplace_back(std::move(bits));
  }
  return ExplicitClass(std::move(out));
}

std::string ExplicitClass::serialize() const {
  std::string out;
  for (const auto& l : labelings_) {
    out += l.to_string();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hidden specs

namespace {

void check_perm(const std::vector<std::size_t>& perm) {
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t r : perm) {
    if (r >= perm.size() || seen[r]) {
      throw Error(ErrorCode::kInvalidArgument, "ordering is not a permutation");
    }
    seen[r] = true;
  }
}

}  // namespace

std::size_t domain_size(const HiddenClassSpec& spec) {
  struct Visitor {
    std::size_t operator()(const ThresholdSpec& s) const { return s.perm.size(); }
    std::size_t operator()(const KIntervalsSpec& s) const { return s.perm.size(); }
    std::size_t operator()(const HammingBallSpec& s) const { return s.center.size(); }
    std::size_t operator()(const NestedCellsSpec& s) const { return s.b.size(); }
  };
  return std::visit(Visitor{}, spec);
}

void validate(const HiddenClassSpec& spec) {
  if (const auto* t = std::get_if<ThresholdSpec>(&spec)) {
    check_perm(t->perm);
  } else if (const auto* k = std::get_if<KIntervalsSpec>(&spec)) {
    check_perm(k->perm);
  } else if (const auto* n = std::get_if<NestedCellsSpec>(&spec)) {
    if (n->b.empty() || n->z.size() + 1 != n->b.size()) {
      throw Error(ErrorCode::kInvalidArgument, "nested cells need |z| = |b| - 1 >= 0");
    }
    std::vector<std::uint64_t> sorted = n->z;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::kInvalidArgument, "nested cell secrets must be distinct");
    }
    if (!sorted.empty() && sorted.front() == 0) {
      throw Error(ErrorCode::kInvalidArgument, "nested cell secrets must lie in (0,1)");
    }
    for (Label b : n->b) {
      if (b > 1) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    }
  }
}

std::string_view kind_name(const HiddenClassSpec& spec) {
  switch (spec.index()) {
    case 0: return "thresholds";
    case 1: return "kintervals";
    case 2: return "hamming";
    default: return "nested";
  }
}

std::vector<std::size_t> identity_perm(std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  return perm;
}

ThresholdSpec identity_threshold(std::size_t domain_size) {
  return ThresholdSpec{identity_perm(domain_size)};
}

std::vector<Point> points_by_rank(const std::vector<std::size_t>& perm) {
  std::vector<Point> by_rank(perm.size());
  for (Point x = 0; x < perm.size(); ++x) by_rank[perm[x]] = x;
  return by_rank;
}

std::size_t max_expand_labelings() {
  if (const char* env = std::getenv("ORACLEARN_MAX_EXPAND")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::size_t{1} << 20;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __uint128_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::size_t>::max()) return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(r);
}

std::size_t sauer_bound(std::size_t d, std::size_t n) {
  std::size_t total = 0;
  for (std::size_t i = 0; i <= std::min(d, n); ++i) {
    const std::size_t c = binomial(n, i);
    if (c > std::numeric_limits<std::size_t>::max() - total) {
      return std::numeric_limits<std::size_t>::max();
    }
    total += c;
  }
  return total;
}

ExplicitClass expand(const HiddenClassSpec& spec) { return expand(spec, max_expand_labelings()); }

ExplicitClass expand(const HiddenClassSpec& spec, std::size_t cap) {
  validate(spec);
  if (std::holds_alternative<NestedCellsSpec>(spec)) {
    throw Error(ErrorCode::kUnsupported, "nested-cell classes live on a continuous domain");
  }
  const std::size_t n = domain_size(spec);
  auto check_cap = [cap](std::size_t count) {
    if (count > cap) {
      throw Error(ErrorCode::kDomainTooLarge,
                  std::to_string(count) + " labelings exceed the cap of " + std::to_string(cap));
    }
  };

  std::vector<Labeling> out;
  if (const auto* t = std::get_if<ThresholdSpec>(&spec)) {
    check_cap(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      std::vector<Label> bits(n);
      for (Point x = 0; x < n; ++x) bits[x] = t->perm[x] >= j ? 1 : 0;
      out.emplace_back(std::move(bits));
    }
  } else if (const auto* k = std::get_if<KIntervalsSpec>(&spec)) {
    std::size_t count = 0;
    for (std::size_t j = 0; j <= k->k; ++j) count += binomial(n + 1, 2 * j);
    check_cap(count);
    out.reserve(count);
    // Walk rank positions left to right, tracking open blocks.
    std::vector<Label> by_rank(n, 0);
    std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t r, std::size_t blocks) {
      if (r == n) {
        std::vector<Label> bits(n);
        for (Point x = 0; x < n; ++x) bits[x] = by_rank[k->perm[x]];
        out.emplace_back(std::move(bits));
        return;
      }
      by_rank[r] = 0;
      walk(r + 1, blocks);
      const bool opens = r == 0 || by_rank[r - 1] == 0;
      if (!opens || blocks < k->k) {
        by_rank[r] = 1;
        walk(r + 1, blocks + (opens ? 1 : 0));
        by_rank[r] = 0;
      }
    };
    walk(0, 0);
  } else {
    const auto& h = std::get<HammingBallSpec>(spec);
    check_cap(sauer_bound(h.d, n));
    std::vector<Label> bits = h.center.bits();
    std::function<void(Point, std::size_t)> flip = [&](Point from, std::size_t left) {
      out.emplace_back(bits);
      if (left == 0) return;
      for (Point x = from; x < n; ++x) {
        bits[x] ^= 1u;
        flip(x + 1, left - 1);
        bits[x] ^= 1u;
      }
    };
    flip(0, h.d);
  }
  return ExplicitClass(std::move(out));
}

}  // namespace oraclearn
