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

#include "oraclearn/analysis.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "oraclearn/error.h"

namespace oraclearn {
namespace {

using Masks = std::vector<std::uint32_t>;

void split(const Masks& v, Point x, Masks& zeros, Masks& ones) {
  zeros.clear();
  ones.clear();
  for (std::uint32_t m : v) ((m >> x) & 1u ? ones : zeros).push_back(m);
}

class GameSolver {
 public:
  GameSolver(std::size_t n, bool fixed_order) : n_(n), fixed_(fixed_order) {}

  std::size_t value(const Masks& v, Point next) {
    if (fixed_) return fixed_value(v, next);
    return adaptive_value(v);
  }

 private:
  static std::size_t combine(std::size_t a, std::size_t b) { return a == b ? a + 1 : std::max(a, b); }

  std::size_t adaptive_value(const Masks& v) {
    if (v.size() <= 1) return 0;
    if (auto it = memo_.find(v); it != memo_.end()) return it->second;
    std::size_t best = 0;
    Masks zeros, ones;
    for (Point x = 0; x < n_; ++x) {
      split(v, x, zeros, ones);
      if (zeros.empty() || ones.empty()) continue;
      best = std::max(best, combine(adaptive_value(zeros), adaptive_value(ones)));
    }
    memo_.emplace(v, best);
    return best;
  }

  std::size_t fixed_value(const Masks& v, Point t) {
    if (v.size() <= 1 || t == n_) return 0;
    Masks key = v;
    key.push_back(static_cast<std::uint32_t>(t) | 0x80000000u);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Masks zeros, ones;
    split(v, t, zeros, ones);
    std::size_t out;
    if (zeros.empty()) {
      out = fixed_value(ones, t + 1);
    } else if (ones.empty()) {
      out = fixed_value(zeros, t + 1);
    } else {
      out = combine(fixed_value(zeros, t + 1), fixed_value(ones, t + 1));
    }
    memo_.emplace(std::move(key), out);
    return out;
  }

  std::size_t n_;
  bool fixed_;
  std::map<Masks, std::size_t> memo_;
};

void check_game_domain(const ExplicitClass& cls) {
  if (cls.domain_size() > kMaxGameDomain) {
    throw Error(ErrorCode::kDomainTooLarge, "game solver limited to 10 points");
  }
}

class WorstCaseSolver {
 public:
  WorstCaseSolver(std::size_t n, GamePredictor predictor) : n_(n), predictor_(predictor), ld_(n) {}

  struct Entry {
    std::size_t value = 0;
    Point x = 0;
    Label y = 0;
  };

  const Entry& solve(const Masks& v) {
    if (auto it = memo_.find(v); it != memo_.end()) return it->second;
    Entry best;
    Masks zeros, ones;
    for (Point x = 0; x < n_; ++x) {
      split(v, x, zeros, ones);
      if (zeros.empty() || ones.empty()) continue;
      const Label pred = predict(zeros, ones);
      const std::size_t a = (pred != 0) + solve(zeros).value;
      const std::size_t b = (pred != 1) + solve(ones).value;
      if (a > best.value) best = Entry{a, x, 0};
      if (b > best.value) best = Entry{b, x, 1};
    }
    return memo_.emplace(v, best).first->second;
  }

 private:
  Label predict(const Masks& zeros, const Masks& ones) {
    if (predictor_ == GamePredictor::kHalving) return ones.size() >= zeros.size() ? 1 : 0;
    return ld_.solve(ones) >= ld_.solve(zeros) ? 1 : 0;
  }

  std::size_t n_;
  GamePredictor predictor_;
  LittlestoneSolver ld_;
  std::map<Masks, Entry> memo_;
};

}  // namespace

std::size_t optimal_mistake_bound(const ExplicitClass& cls, bool fixed_order) {
  check_game_domain(cls);
  Masks v = to_masks(cls);
  std::sort(v.begin(), v.end());
  GameSolver solver(cls.domain_size(), fixed_order);
  return solver.value(v, 0);
}

WorstCase worst_case_mistakes(const ExplicitClass& cls, GamePredictor predictor) {
  check_game_domain(cls);
  Masks v = to_masks(cls);
  std::sort(v.begin(), v.end());
  WorstCaseSolver solver(cls.domain_size(), predictor);
  WorstCase out;
  out.mistakes = solver.solve(v).value;
  // Follow the recorded choices, then finish the order with the untouched
  // points labeled by the surviving concept.
  std::vector<bool> used(cls.domain_size(), false);
  while (v.size() > 1) {
    const auto& e = solver.solve(v);
    if (e.value == 0) break;
    out.order.push_back(e.x);
    out.labels.push_back(e.y);
    used[e.x] = true;
    std::erase_if(v, [&](std::uint32_t m) { return ((m >> e.x) & 1u) != e.y; });
  }
  for (Point x = 0; x < cls.domain_size(); ++x) {
    if (used[x]) continue;
    out.order.push_back(x);
    out.labels.push_back(static_cast<Label>((v.front() >> x) & 1u));
  }
  return out;
}

TreeCostTable::TreeCostTable(std::size_t max_n, std::size_t max_depth)
    : max_n_(max_n), max_depth_(max_depth) {
  if (max_n == 0) throw Error(ErrorCode::kInvalidArgument, "tree root value must be positive");
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  f_.assign(max_depth + 1, std::vector<std::size_t>(max_n + 1, kInf));
  for (std::size_t d = 0; d <= max_depth; ++d) {
    f_[d][1] = 0;
    if (d == 0) continue;
    for (std::size_t n = 2; n <= max_n; ++n) {
      std::size_t best = kInf;
      for (std::size_t y = 1; y <= n / 2; ++y) {
        const std::size_t a = f_[d - 1][y], b = f_[d - 1][n - y];
        if (a == kInf || b == kInf) continue;
        best = std::min(best, y + a + b);
      }
      f_[d][n] = best;
    }
  }
}

std::optional<std::size_t> TreeCostTable::cost(std::size_t n, std::size_t depth) const {
  if (n == 0 || n > max_n_ || depth > max_depth_) {
    throw Error(ErrorCode::kOutOfRange, "tree-cost query outside the table");
  }
  const std::size_t v = f_[depth][n];
  if (v == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return v;
}

std::size_t min_tree_cost(const TreeCostQuery& q) {
  if (q.n == 0) throw Error(ErrorCode::kInvalidArgument, "tree root value must be positive");
  if (q.n > kMaxTreeCostN) throw Error(ErrorCode::kOutOfRange, "tree root value limited to 512");
  // Every split shrinks the larger child by at least one, so depth n-1 suffices.
  const std::size_t useful = q.n - 1;
  const std::size_t depth = std::min(q.depth_cap, useful);
  TreeCostTable table(q.n, depth);
  auto c = table.cost(q.n, depth);
  if (!c) {
    throw Error(ErrorCode::kInfeasible, "no tree of depth " + std::to_string(q.depth_cap) +
                                            " has root value " + std::to_string(q.n));
  }
  return *c;
}

std::size_t sweep_depth_cap(std::size_t n) {
  return static_cast<std::size_t>(std::floor(1.05 * std::log2(static_cast<double>(n))));
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::kOutOfRange, "entropy argument outside [0, 1]");
  auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  return term(x) + term(1.0 - x);
}

std::vector<ParetoPoint> pareto_aggregate(const std::vector<TrialBatch>& batches) {
  if (batches.empty()) throw Error(ErrorCode::kEmptyBatch, "no batches to aggregate");
  std::vector<ParetoPoint> points;
  for (const TrialBatch& b : batches) {
    if (b.trials.empty()) throw Error(ErrorCode::kEmptyBatch, "batch '" + b.learner + "' has no trials");
    ParetoPoint p;
    p.learner = b.learner;
    p.config_hash = b.config_hash;
    p.trials = b.trials.size();
    double m = 0, q = 0, r = 0;
    bool all_regret = true;
    for (const TrialRecord& t : b.trials) {
      m += static_cast<double>(t.mistakes);
      q += static_cast<double>(t.queries.total());
      if (t.regret) {
        r += *t.regret;
      } else {
        all_regret = false;
      }
    }
    const double n = static_cast<double>(b.trials.size());
    p.mean_mistakes = m / n;
    p.mean_queries = q / n;
    if (all_regret) p.mean_regret = r / n;
    points.push_back(std::move(p));
  }
  for (ParetoPoint& p : points) {
    p.on_frontier = std::none_of(points.begin(), points.end(), [&](const ParetoPoint& o) {
      return o.mean_queries <= p.mean_queries && o.mean_mistakes <= p.mean_mistakes &&
             (o.mean_queries < p.mean_queries || o.mean_mistakes < p.mean_mistakes);
    });
  }
  std::sort(points.begin(), points.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    if (a.mean_queries != b.mean_queries) return a.mean_queries < b.mean_queries;
    if (a.mean_mistakes != b.mean_mistakes) return a.mean_mistakes < b.mean_mistakes;
    return a.learner < b.learner;
  });
  return points;
}

std::string pareto_csv(const std::vector<ParetoPoint>& points) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6);
  out << "learner,mean_mistakes,mean_queries,trials,on_frontier\n";
  for (const ParetoPoint& p : points) {
    out << p.learner << ',' << p.mean_mistakes << ',' << p.mean_queries << ',' << p.trials << ','
        << (p.on_frontier ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace oraclearn
