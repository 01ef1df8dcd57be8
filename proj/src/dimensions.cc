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

#include <algorithm>
#include <bit>

#include "oraclearn/core.h"
#include "oraclearn/error.h"

namespace oraclearn {

std::uint32_t to_mask(const Labeling& labeling) {
  if (labeling.size() > 32) {
    throw Error(ErrorCode::kDomainTooLarge, "bitmask view limited to 32 points");
  }
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < labeling.size(); ++i) m |= std::uint32_t{labeling[i]} << i;
  return m;
}

Labeling from_mask(std::uint32_t mask, std::size_t domain_size) {
  std::vector<Label> bits(domain_size);
  for (std::size_t i = 0; i < domain_size; ++i) bits[i] = static_cast<Label>((mask >> i) & 1u);
  return Labeling(std::move(bits));
}

std::vector<std::uint32_t> to_masks(const ExplicitClass& cls) {
  std::vector<std::uint32_t> masks;
  masks.reserve(cls.size());
  for (const auto& l : cls) masks.push_back(to_mask(l));
  std::sort(masks.begin(), masks.end());
  return masks;
}

namespace {

std::uint32_t extract_bits(std::uint32_t value, std::uint32_t subset) {
  std::uint32_t out = 0;
  std::uint32_t bit = 0;
  while (subset != 0) {
    const int i = std::countr_zero(subset);
    out |= ((value >> i) & 1u) << bit;
    ++bit;
    subset &= subset - 1;
  }
  return out;
}

bool shatters(const std::vector<std::uint32_t>& masks, std::uint32_t subset, std::size_t size,
              std::vector<char>& seen) {
  const std::size_t patterns = std::size_t{1} << size;
  std::fill(seen.begin(), seen.begin() + static_cast<std::ptrdiff_t>(patterns), 0);
  std::size_t found = 0;
  for (std::uint32_t m : masks) {
    const std::uint32_t p = extract_bits(m, subset);
    if (!seen[p]) {
      seen[p] = 1;
      if (++found == patterns) return true;
    }
  }
  return false;
}

}  // namespace

std::size_t vc_dimension(const ExplicitClass& cls) {
  const std::size_t n = cls.domain_size();
  if (n > kMaxVcDomain) {
    throw Error(ErrorCode::kDomainTooLarge, "VC dimension solver limited to 24 points");
  }
  const auto masks = to_masks(cls);
  const auto log_size = static_cast<std::size_t>(std::bit_width(masks.size()) - 1);
  const std::size_t max_size = std::min(n, log_size);
  std::vector<char> seen(std::size_t{1} << max_size);

  // Shattering is hereditary, so the first size with no shattered subset ends
  // the search.
  std::size_t best = 0;
  for (std::size_t s = 1; s <= max_size; ++s) {
    bool any = false;
    const std::uint32_t limit = std::uint32_t{1} << n;
    // Gosper's hack over s-subsets of n bits.
    for (std::uint32_t subset = (std::uint32_t{1} << s) - 1; subset < limit;) {
      if (shatters(masks, subset, s, seen)) {
        any = true;
        break;
      }
      const std::uint32_t c = subset & (0u - subset);
      const std::uint32_t r = subset + c;
      if (r == 0) break;
      subset = (((r ^ subset) >> 2) / c) | r;
    }
    if (!any) break;
    best = s;
  }
  return best;
}

std::size_t LittlestoneSolver::MaskHash::operator()(const std::vector<std::uint32_t>& v) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint32_t m : v) {
    h ^= m;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

LittlestoneSolver::LittlestoneSolver(std::size_t domain_size) : domain_size_(domain_size) {
  if (domain_size > kMaxLittlestoneDomain) {
    throw Error(ErrorCode::kDomainTooLarge, "Littlestone solver limited to 16 points");
  }
}

std::size_t LittlestoneSolver::solve(const std::vector<std::uint32_t>& masks) {
  if (masks.size() <= 1) return 0;
  if (auto it = memo_.find(masks); it != memo_.end()) return it->second;

  // d(V) <= floor(log2 |V|): a depth-d shattered tree needs 2^d concepts.
  const auto ceiling = static_cast<std::size_t>(std::bit_width(masks.size()) - 1);
  std::size_t best = 0;
  std::vector<std::uint32_t> zeros, ones;
  for (std::size_t x = 0; x < domain_size_ && best < ceiling; ++x) {
    zeros.clear();
    ones.clear();
    for (std::uint32_t m : masks) ((m >> x) & 1u ? ones : zeros).push_back(m);
    if (zeros.empty() || ones.empty()) continue;
    auto& small = zeros.size() <= ones.size() ? zeros : ones;
    auto& large = zeros.size() <= ones.size() ? ones : zeros;
    // 1 + min(a, b) <= 1 + log2|small|; skip points that cannot beat `best`.
    const auto small_ceiling = static_cast<std::size_t>(std::bit_width(small.size()) - 1);
    if (1 + small_ceiling <= best) continue;
    const std::size_t a = solve(small);
    if (1 + a <= best) continue;
    const std::size_t b = solve(large);
    best = std::max(best, 1 + std::min(a, b));
  }
  memo_.emplace(masks, best);
  return best;
}

std::size_t littlestone_dimension(const ExplicitClass& cls) {
  if (cls.domain_size() > kMaxLittlestoneDomain || cls.size() > kMaxLittlestoneLabelings) {
    throw Error(ErrorCode::kDomainTooLarge,
                "Littlestone solver limited to 16 points and 4096 labelings");
  }
  LittlestoneSolver solver(cls.domain_size());
  return solver.solve(to_masks(cls));
}

}  // namespace oraclearn
