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

#include "oraclearn/structured.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "oraclearn/error.h"

namespace oraclearn {
namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
}

// {(a,0),(b,1)} is realizable by a threshold iff a ranks below b.
bool ranks_below(OracleSession& session, Point a, Point b) {
  return session.realizable(LabeledSample{{a, 0}, {b, 1}});
}

class PointPool {
 public:
  explicit PointPool(std::size_t n) : slot_(n) {
    items_.resize(n);
    for (Point x = 0; x < n; ++x) {
      items_[x] = x;
      slot_[x] = x;
    }
  }
  std::size_t size() const { return items_.size(); }
  Point operator[](std::size_t i) const { return items_[i]; }
  bool contains(Point x) const { return slot_[x] != kAbsent; }
  void remove(Point x) {
    const std::size_t i = slot_[x];
    if (i == kAbsent) return;
    const Point last = items_.back();
    items_[i] = last;
    slot_[last] = i;
    items_.pop_back();
    slot_[x] = kAbsent;
  }

 private:
  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
  std::vector<Point> items_;
  std::vector<std::size_t> slot_;
};

void kinterval_fill(std::size_t m, std::size_t k, std::size_t pos, std::size_t blocks, bool in_block,
                    std::vector<Label>& bits, std::vector<Labeling>& out) {
  if (pos == m) {
    out.emplace_back(bits);
    return;
  }
  bits[pos] = 0;
  kinterval_fill(m, k, pos + 1, blocks, false, bits, out);
  if (in_block || blocks < k) {
    bits[pos] = 1;
    kinterval_fill(m, k, pos + 1, in_block ? blocks : blocks + 1, true, bits, out);
  }
}

}  // namespace

ExplicitClass thresholds_over(const std::vector<Point>& order, std::size_t domain_size) {
  std::vector<Labeling> out;
  out.reserve(order.size() + 1);
  for (std::size_t j = 0; j <= order.size(); ++j) {
    std::vector<Label> bits(domain_size, 0);
    for (std::size_t i = j; i < order.size(); ++i) bits[order[i]] = 1;
    out.emplace_back(std::move(bits));
  }
  return ExplicitClass(std::move(out));
}

OrderedTrial threshold_sort_wc(OracleSession& session, LabelSource& source) {
  const QueryCounts start = session.counts();
  const std::size_t n = session.domain_size();
  std::unordered_map<std::size_t, bool> cache;
  auto below = [&](Point a, Point b) {
    const std::size_t key = a * n + b;
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const bool r = ranks_below(session, a, b);
    cache.emplace(key, r);
    cache.emplace(b * n + a, !r);
    return r;
  };

  std::vector<Point> order(n), buffer(n);
  for (Point x = 0; x < n; ++x) order[x] = x;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width, hi = std::min(n, lo + 2 * width);
      std::size_t i = lo, j = mid, o = lo;
      while (i < mid && j < hi) buffer[o++] = below(order[i], order[j]) ? order[i++] : order[j++];
      while (i < mid) buffer[o++] = order[i++];
      while (j < hi) buffer[o++] = order[j++];
      std::copy(buffer.begin() + static_cast<std::ptrdiff_t>(lo),
                buffer.begin() + static_cast<std::ptrdiff_t>(hi),
                order.begin() + static_cast<std::ptrdiff_t>(lo));
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!below(order[i], order[i + 1])) {
      throw Error(ErrorCode::kInconsistentOracle, "comparisons do not form a total order");
    }
  }
  OrderedTrial out;
  out.record = run_halving(thresholds_over(order, n), source);
  out.record.queries = session.counts() - start;
  out.order = std::move(order);
  return out;
}

std::size_t rand_wc_sample_size(double delta) {
  check_delta(delta);
  return static_cast<std::size_t>(std::ceil(36.0 * std::log(1.0 / delta)));
}

TrialRecord threshold_rand_wc(OracleSession& session, LabelSource& source, double delta,
                              CounterRng& rng, BoundaryTrace* trace) {
  const std::size_t m = rand_wc_sample_size(delta);
  const QueryCounts start = session.counts();
  const std::size_t n = session.domain_size();
  if (source.length() > n) throw Error(ErrorCode::kInvalidArgument, "label stream longer than the domain");

  std::optional<Point> r, l;
  std::size_t r_version = 0, l_version = 0;
  std::vector<std::optional<Label>> known(n);
  PointPool pool(n);
  // Boundary version against which a point was last confirmed inside.
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> inside_r(n, kNever), inside_l(n, kNever);

  auto classify = [&](Point z) -> std::optional<Label> {
    if (inside_r[z] != r_version) {
      if (ranks_below(session, z, *r)) return Label{0};
      inside_r[z] = r_version;
    }
    if (inside_l[z] != l_version) {
      if (ranks_below(session, *l, z)) return Label{1};
      inside_l[z] = l_version;
    }
    return std::nullopt;
  };

  auto estimate = [&](Point x) -> Label {
    std::unordered_map<Point, bool> left_of_x;
    std::size_t drawn = 0, left = 0;
    while (drawn < m && pool.size() > 1) {
      const Point z = pool[rng.uniform_below(pool.size())];
      if (z == x) continue;
      if (auto c = classify(z)) {
        known[z] = *c;
        pool.remove(z);
        continue;
      }
      auto it = left_of_x.find(z);
      if (it == left_of_x.end()) it = left_of_x.emplace(z, ranks_below(session, z, x)).first;
      left += it->second;
      ++drawn;
    }
    if (drawn == 0) return 0;
    return 3 * left >= 2 * drawn ? 1 : 0;
  };

  TrialRecord rec;
  for (std::size_t t = 0; t < source.length(); ++t) {
    const Point x = t;
    Label pred = 0;
    bool sampled = false;
    const bool boundaries = r && l;
    if (known[x]) {
      pred = *known[x];
    } else if (!boundaries) {
      pred = (l && !r) ? 1 : 0;
    } else if (auto c = classify(x)) {
      pred = *c;
    } else {
      sampled = true;
      pred = estimate(x);
    }
    const Label y = source.reveal(t, pred);
    rec.add_round(x, pred, y);
    const bool was_known = known[x].has_value();
    known[x] = y;
    pool.remove(x);

    if (sampled) {
      // x lay strictly between r and l, so it becomes the new boundary.
      if (y == 0) {
        r = x;
        ++r_version;
      } else {
        l = x;
        ++l_version;
      }
    } else if (!boundaries && !was_known) {
      if (y == 0 && (!r || ranks_below(session, *r, x))) {
        r = x;
        ++r_version;
      } else if (y == 1 && (!l || ranks_below(session, x, *l))) {
        l = x;
        ++l_version;
      }
    }
    if (trace) {
      trace->r.push_back(r);
      trace->l.push_back(l);
      trace->sampled.push_back(sampled);
    }
  }
  rec.queries = session.counts() - start;
  return rec;
}

std::vector<Point> erm_partition_sort(ErmChannel& channel, std::vector<Point> points) {
  if (points.size() <= 1) return points;
  const Point z1 = points[0], z2 = points[1];
  ConceptPtr forward = channel.erm(LabeledSample{{z1, 0}, {z2, 1}});
  ConceptPtr flipped = channel.erm(LabeledSample{{z1, 1}, {z2, 0}});
  if ((forward != nullptr) == (flipped != nullptr)) {
    throw Error(ErrorCode::kInconsistentOracle,
                "exactly one orientation of a pair must be realizable by a threshold");
  }
  ConceptPtr c = forward ? forward : flipped;
  std::vector<Point> low, high;
  for (Point p : points) (c->at(p) == 0 ? low : high).push_back(p);
  std::vector<Point> out = erm_partition_sort(channel, std::move(low));
  std::vector<Point> upper = erm_partition_sort(channel, std::move(high));
  out.insert(out.end(), upper.begin(), upper.end());
  return out;
}

OrderedTrial threshold_det_erm_ordered(ErmChannel& channel, LabelSource& source) {
  const QueryCounts start = channel.counts();
  const std::size_t n = channel.domain_size();
  std::vector<Point> all(n);
  for (Point x = 0; x < n; ++x) all[x] = x;
  OrderedTrial out;
  out.order = erm_partition_sort(channel, std::move(all));
  out.record = run_halving(thresholds_over(out.order, n), source);
  out.record.queries = channel.counts() - start;
  return out;
}

TrialRecord threshold_det_erm(ErmChannel& channel, LabelSource& source) {
  return threshold_det_erm_ordered(channel, source).record;
}

TrialRecord threshold_rand_erm(ErmChannel& channel, LabelSource& source, double delta,
                               CounterRng& rng) {
  check_delta(delta);
  constexpr std::size_t kBaseCase = 5;
  const QueryCounts start = channel.counts();
  const std::size_t n = channel.domain_size();
  if (source.length() > n) throw Error(ErrorCode::kInvalidArgument, "label stream longer than the domain");

  // side: 0 = known 0, 1 = known 1, 2 = unknown.
  std::vector<Label> side(n, 2);
  std::vector<Point> unknown(n);
  for (Point x = 0; x < n; ++x) unknown[x] = x;
  std::vector<Label> split(n, 0);
  bool have_split = false;
  std::vector<std::optional<Label>> revealed(n);

  // Exact order of the final small region and its surviving cuts.
  bool base = false;
  std::vector<std::size_t> position(n, 0);
  std::vector<std::size_t> cuts;
  auto enter_base = [&] {
    base = true;
    const std::vector<Point> order = erm_partition_sort(channel, unknown);
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    for (std::size_t j = 0; j <= order.size(); ++j) {
      bool ok = true;
      for (std::size_t i = 0; i < order.size() && ok; ++i) {
        if (revealed[order[i]] && *revealed[order[i]] != (i >= j ? 1 : 0)) ok = false;
      }
      if (ok) cuts.push_back(j);
    }
  };
  auto make_split = [&] {
    const std::size_t u = unknown.size();
    while (true) {
      const std::vector<Point> z = rng.sample_without_replacement(unknown, 2);
      ConceptPtr c = channel.erm(LabeledSample{{z[0], 0}, {z[1], 1}});
      if (!c) c = channel.erm(LabeledSample{{z[0], 1}, {z[1], 0}});
      if (!c) throw Error(ErrorCode::kInconsistentOracle, "neither orientation of a pair is realizable");
      std::size_t ones = 0;
      for (Point p : unknown) ones += (split[p] = c->at(p));
      if (3 * std::min(ones, u - ones) >= u) break;
    }
    have_split = true;
  };

  if (unknown.size() <= kBaseCase) enter_base();
  TrialRecord rec;
  for (std::size_t t = 0; t < source.length(); ++t) {
    const Point x = t;
    channel.begin_round(t);
    Label pred;
    if (side[x] != 2) {
      pred = side[x];
    } else if (base) {
      std::size_t ones = 0;
      for (std::size_t j : cuts) ones += position[x] >= j;
      pred = 2 * ones >= cuts.size() ? 1 : 0;
    } else {
      if (!have_split) make_split();
      pred = split[x];
    }
    const Label y = source.reveal(t, pred);
    rec.add_round(x, pred, y);
    channel.reveal(t, y);
    revealed[x] = y;
    if (side[x] != 2) continue;
    if (base) {
      std::erase_if(cuts, [&](std::size_t j) { return (position[x] >= j ? 1 : 0) != y; });
      continue;
    }
    if (pred == y) continue;
    // The predicted side of x is falsified; the other side is settled.
    const Label settled = pred == 0 ? 1 : 0;
    std::vector<Point> keep;
    for (Point p : unknown) {
      if (split[p] == pred) {
        keep.push_back(p);
      } else {
        side[p] = settled;
      }
    }
    unknown = std::move(keep);
    have_split = false;
    if (unknown.size() <= kBaseCase) enter_base();
  }
  rec.queries = channel.counts() - start;
  return rec;
}

std::size_t extreme_test_repetitions(std::size_t pool_size, double delta, double c) {
  check_delta(delta);
  return static_cast<std::size_t>(
      std::ceil(c * static_cast<double>(pool_size) * std::log(1.0 / delta)));
}

bool kintervals_extreme_test(OracleSession& session, const std::vector<Point>& pool, Point z,
                             std::size_t k, double delta, CounterRng& rng, double c) {
  if (pool.size() < 2 * k + 2) {
    throw Error(ErrorCode::kInvalidArgument, "extreme-point test needs at least 2k+2 points");
  }
  std::vector<Point> others;
  others.reserve(pool.size());
  for (Point p : pool) {
    if (p != z) others.push_back(p);
  }
  if (others.size() + 1 != pool.size()) throw Error(ErrorCode::kInvalidArgument, "z must be in the pool");
  const std::size_t reps = extreme_test_repetitions(pool.size(), delta, c);
  const std::size_t width = 2 * k + 1;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    std::vector<Point> pts = rng.sample_without_replacement(others, 2 * k);
    pts.push_back(z);
    std::sort(pts.begin(), pts.end());
    const std::size_t z_slot =
        static_cast<std::size_t>(std::find(pts.begin(), pts.end(), z) - pts.begin());
    std::size_t unrealizable = 0;
    Label z_label = 0;
    for (std::uint32_t mask = 0; mask < (1u << width); ++mask) {
      std::vector<LabeledPoint> pairs;
      pairs.reserve(width);
      for (std::size_t i = 0; i < width; ++i) pairs.push_back({pts[i], static_cast<Label>((mask >> i) & 1u)});
      if (!session.realizable(LabeledSample(std::move(pairs)))) {
        ++unrealizable;
        z_label = static_cast<Label>((mask >> z_slot) & 1u);
      }
    }
    if (unrealizable != 1) {
      throw Error(ErrorCode::kNoUnrealizableLabeling,
                  std::to_string(unrealizable) + " unrealizable labelings among 2k+1 points");
    }
    if (z_label == 0) return false;
  }
  return true;
}

ExplicitClass kinterval_labelings(std::size_t m, std::size_t k) {
  std::vector<Labeling> out;
  std::vector<Label> bits(m, 0);
  kinterval_fill(m, k, 0, 0, false, bits, out);
  return ExplicitClass(std::move(out));
}

std::size_t kinterval_class_size(std::size_t domain_size, std::size_t k) {
  std::size_t total = 0;
  for (std::size_t j = 0; j <= k && 2 * j <= domain_size + 1; ++j) total += binomial(domain_size + 1, 2 * j);
  return total;
}

KIntervalsTrial kintervals_learn(OracleSession& session, LabelSource& source, std::size_t k,
                                 double delta, CounterRng& rng, double c) {
  check_delta(delta);
  const QueryCounts start = session.counts();
  const std::size_t n = session.domain_size();
  KIntervalsTrial out;
  if (k == 0) {
    out.record = predict_zero(source);
    return out;
  }
  if (n < 2 * k + 2) throw Error(ErrorCode::kInvalidArgument, "domain needs at least 2k+2 points");

  std::vector<Point> pool(n);
  for (Point x = 0; x < n; ++x) pool[x] = x;
  auto is_endpoint = [&](Point z) {
    return kintervals_extreme_test(session, pool, z, k, delta, rng, c);
  };
  auto peel = [&](Point z) {
    out.peeled.push_back(z);
    std::erase(pool, z);
  };

  // The first iteration finds both ends: the first is peeled, the second is
  // pinned and never peeled, so peeling proceeds from one end.
  std::vector<Point> ends;
  for (Point z : pool) {
    if (is_endpoint(z)) {
      ends.push_back(z);
      if (ends.size() == 2) break;
    }
  }
  if (ends.size() < 2) throw Error(ErrorCode::kInconsistentOracle, "fewer than two endpoints found");
  const Point pinned = ends[1];
  peel(ends[0]);
  while (pool.size() >= 2 * k + 2) {
    std::optional<Point> next;
    for (Point z : pool) {
      if (z != pinned && is_endpoint(z)) {
        next = z;
        break;
      }
    }
    if (!next) throw Error(ErrorCode::kInconsistentOracle, "no endpoint besides the pinned one");
    peel(*next);
  }
  out.residual = pool;

  std::vector<std::optional<std::size_t>> position(n);
  for (std::size_t i = 0; i < out.peeled.size(); ++i) position[out.peeled[i]] = i;
  VersionSpace v(kinterval_labelings(out.peeled.size(), k));
  TrialRecord rec;
  for (std::size_t t = 0; t < source.length(); ++t) {
    const auto& pos = position[t];
    Label pred = 0;
    if (pos && !v.empty()) pred = 2 * v.count_with(*pos, 1) >= v.size() ? 1 : 0;
    const Label y = source.reveal(t, pred);
    rec.add_round(t, pred, y);
    // An empty version space means the order was not recovered; predict 0.
    if (pos && !v.empty()) v.restrict(*pos, y);
  }
  rec.queries = session.counts() - start;
  out.record = std::move(rec);
  return out;
}

bool order_recovered(const std::vector<Point>& peeled, const std::vector<std::size_t>& perm) {
  const std::size_t n = perm.size();
  bool forward = true, backward = true;
  for (std::size_t i = 0; i < peeled.size(); ++i) {
    forward = forward && perm[peeled[i]] == i;
    backward = backward && perm[peeled[i]] == n - 1 - i;
  }
  return forward || backward;
}

TrialRecord hamming_single_query(ErmChannel& channel, LabelSource& source) {
  const QueryCounts start = channel.counts();
  channel.begin_round(0);
  ConceptPtr c = channel.erm(LabeledSample{});
  if (!c) throw Error(ErrorCode::kInconsistentOracle, "ERM on the empty sample returned nothing");
  TrialRecord rec;
  for (std::size_t t = 0; t < source.length(); ++t) {
    channel.begin_round(t);
    const Label pred = c->at(t);
    const Label y = source.reveal(t, pred);
    rec.add_round(t, pred, y);
    channel.reveal(t, y);
  }
  rec.queries = channel.counts() - start;
  return rec;
}

TrialRecord hamming_optimal(OracleSession& session, LabelSource& source, std::size_t d,
                            bool decision_via_erm) {
  const std::size_t n = session.domain_size();
  if (n < d + 1) throw Error(ErrorCode::kInvalidArgument, "domain needs at least d+1 points");
  if (d + 1 > 20) throw Error(ErrorCode::kDomainTooLarge, "radius too large for exhaustive tests");
  const QueryCounts start = session.counts();
  std::size_t unrealizable = 0;
  std::uint32_t bad = 0;
  for (std::uint32_t mask = 0; mask < (1u << (d + 1)); ++mask) {
    std::vector<LabeledPoint> pairs;
    for (Point i = 0; i <= d; ++i) pairs.push_back({i, static_cast<Label>((mask >> i) & 1u)});
    LabeledSample s(std::move(pairs));
    const bool ok = decision_via_erm ? session.erm_query(s).has_value() : session.realizable(s);
    if (!ok) {
      ++unrealizable;
      bad = mask;
    }
  }
  if (unrealizable != 1) {
    throw Error(ErrorCode::kAmbiguousCenter,
                std::to_string(unrealizable) + " unrealizable labelings of the first d+1 points");
  }
  std::vector<Label> head(d + 1);
  for (Point i = 0; i <= d; ++i) head[i] = static_cast<Label>(1 - ((bad >> i) & 1u));
  std::vector<LabeledPoint> far;
  for (Point i = 0; i < d; ++i) far.push_back({i, static_cast<Label>(1 - head[i])});
  auto c = session.erm_query(LabeledSample(std::move(far)));
  if (!c || (*c)[d] != head[d]) {
    throw Error(ErrorCode::kAmbiguousCenter, "ERM answer does not pin the center");
  }
  std::vector<Label> center = c->bits();
  for (Point i = 0; i < d; ++i) center[i] = head[i];
  TrialRecord rec = run_soa(expand(HammingBallSpec{Labeling(std::move(center)), d}), source);
  rec.queries = session.counts() - start;
  return rec;
}

}  // namespace oraclearn
