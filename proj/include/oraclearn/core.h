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

#ifndef ORACLEARN_CORE_H_
#define ORACLEARN_CORE_H_

// Finite domains, labelings, concept classes and the exhaustive dimension
// solvers that the rest of the library uses as ground truth.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace oraclearn {

using Label = std::uint8_t;
// Index of an instance in [0, T). Instance x_t of round t is point t.
using Point = std::size_t;

class Labeling {
 public:
  Labeling() = default;
  explicit Labeling(std::vector<Label> bits);

  static Labeling constant(std::size_t size, Label value);
  // Parses a string of '0'/'1' characters.
  static Labeling from_string(std::string_view text);

  std::size_t size() const { return bits_.size(); }
  Label operator[](Point x) const { return bits_[x]; }
  const std::vector<Label>& bits() const { return bits_; }

  Labeling with(Point x, Label y) const;
  std::size_t hamming_distance(const Labeling& other) const;
  std::size_t count_ones() const;

  std::string to_string() const;

  // Lexicographic with point 0 most significant; matches string order.
  auto operator<=>(const Labeling&) const = default;

 private:
  std::vector<Label> bits_;
};

struct LabeledPoint {
  Point point;
  Label label;

  auto operator<=>(const LabeledPoint&) const = default;
};

// A set of (point, label) pairs kept sorted by point. Consistent duplicates
// collapse; conflicting duplicates throw kConflictingLabels.
class LabeledSample {
 public:
  LabeledSample() = default;
  LabeledSample(std::initializer_list<LabeledPoint> pairs);
  explicit LabeledSample(std::vector<LabeledPoint> pairs);

  // Every point of `labeling` restricted to `points`.
  static LabeledSample restrict(const Labeling& labeling,
                                const std::vector<Point>& points);

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }
  const std::vector<LabeledPoint>& pairs() const { return pairs_; }

  std::optional<Label> label_of(Point x) const;
  bool contains(Point x) const { return label_of(x).has_value(); }
  bool contains(const LabeledPoint& pair) const;
  // Copy with one more pair; throws on conflict.
  LabeledSample with(Point x, Label y) const;
  // Largest point index plus one (0 for the empty sample).
  std::size_t extent() const;

  // "0:1,3:0" rendering used in transcripts.
  std::string to_string() const;

  bool operator==(const LabeledSample&) const = default;

 private:
  std::vector<LabeledPoint> pairs_;
};

bool is_consistent(const Labeling& labeling, const LabeledSample& sample);

class ExplicitClass {
 public:
  // Sorts and deduplicates; throws kInvalidArgument when empty or ragged.
  explicit ExplicitClass(std::vector<Labeling> labelings);

  static ExplicitClass full_cube(std::size_t domain_size);
  // Parses newline-separated labeling strings; blank lines are ignored.
  static ExplicitClass parse(std::string_view text);

  std::size_t domain_size() const { return domain_size_; }
  std::size_t size() const { return labelings_.size(); }
  const std::vector<Labeling>& labelings() const { return labelings_; }
  auto begin() const { return labelings_.begin(); }
  auto end() const { return labelings_.end(); }

  bool contains(const Labeling& labeling) const;
  // The class seen through a reordering of the domain: point i of the result
  // is point order[i] of this class.
  ExplicitClass reordered(const std::vector<Point>& order) const;

  // Canonical serialization: sorted labeling strings, one per line.
  std::string serialize() const;

  bool operator==(const ExplicitClass&) const = default;

 private:
  std::size_t domain_size_ = 0;
  std::vector<Labeling> labelings_;
};

// Hidden-structure classes. Orientation for thresholds and intervals: a point's
// rank is perm[point]; threshold concept j labels x with 1 iff rank(x) >= j.
struct ThresholdSpec {
  std::vector<std::size_t> perm;
};

struct KIntervalsSpec {
  std::vector<std::size_t> perm;
  std::size_t k = 1;
};

struct HammingBallSpec {
  Labeling center;
  std::size_t d = 0;
};

// Nested-cell construction over [0,1]^(T-1). Secrets are integers in units of
// 2^-62; z has T-1 pairwise-distinct nonzero entries and b has T bits.
struct NestedCellsSpec {
  std::vector<std::uint64_t> z;
  std::vector<Label> b;
};

using HiddenClassSpec =
    std::variant<ThresholdSpec, KIntervalsSpec, HammingBallSpec, NestedCellsSpec>;

std::size_t domain_size(const HiddenClassSpec& spec);
// Throws kInvalidArgument when a bijection, distinctness or length invariant fails.
void validate(const HiddenClassSpec& spec);
std::string_view kind_name(const HiddenClassSpec& spec);

ThresholdSpec identity_threshold(std::size_t domain_size);
std::vector<std::size_t> identity_perm(std::size_t n);

// Domain points sorted by rank under `perm`.
std::vector<Point> points_by_rank(const std::vector<std::size_t>& perm);

// Labeling-count ceiling for expand(); ORACLEARN_MAX_EXPAND overrides.
std::size_t max_expand_labelings();

ExplicitClass expand(const HiddenClassSpec& spec);
ExplicitClass expand(const HiddenClassSpec& spec, std::size_t cap);

// Sum_{i<=d} C(n, i), saturating at SIZE_MAX.
std::size_t sauer_bound(std::size_t d, std::size_t n);
std::size_t binomial(std::size_t n, std::size_t k);

// Exhaustive over point subsets; domain_size <= 24.
std::size_t vc_dimension(const ExplicitClass& cls);
// Memoized minimax over version spaces; domain_size <= 16, size <= 4096.
std::size_t littlestone_dimension(const ExplicitClass& cls);

inline constexpr std::size_t kMaxVcDomain = 24;
inline constexpr std::size_t kMaxLittlestoneDomain = 16;
inline constexpr std::size_t kMaxLittlestoneLabelings = 4096;

// Reusable Littlestone solver over labelings packed as bitmasks (bit i is the
// label of point i). The memo persists across calls, which SOA relies on.
class LittlestoneSolver {
 public:
  explicit LittlestoneSolver(std::size_t domain_size);

  // `masks` must be sorted and unique.
  std::size_t solve(const std::vector<std::uint32_t>& masks);
  std::size_t domain_size() const { return domain_size_; }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct MaskHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const;
  };

  std::size_t domain_size_;
  std::unordered_map<std::vector<std::uint32_t>, std::size_t, MaskHash> memo_;
};

std::uint32_t to_mask(const Labeling& labeling);
Labeling from_mask(std::uint32_t mask, std::size_t domain_size);
std::vector<std::uint32_t> to_masks(const ExplicitClass& cls);

}  // namespace oraclearn

#endif  // ORACLEARN_CORE_H_
