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

#include "oraclearn/learners.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oraclearn/error.h"

namespace oraclearn {

void TrialRecord::add_round(Point x, Label predicted, Label truth) {
  const bool mistake = predicted != truth;
  rounds.push_back(RoundRecord{x, predicted, truth, mistake});
  mistakes += mistake;
}

std::string TrialRecord::prediction_string() const {
  std::string out;
  out.reserve(rounds.size());
  for (const RoundRecord& r : rounds) out.push_back(static_cast<char>('0' + r.predicted));
  return out;
}

std::string TrialRecord::rounds_csv() const {
  std::ostringstream out;
  out << "instance,predicted,truth,mistake\n";
  for (const RoundRecord& r : rounds) {
    out << r.instance << ',' << int{r.predicted} << ',' << int{r.truth} << ',' << int{r.mistake}
        << '\n';
  }
  return out.str();
}

VersionSpace::VersionSpace(const ExplicitClass& cls) : surviving_(cls.labelings()) {}

std::size_t VersionSpace::count_with(Point x, Label y) const {
  return static_cast<std::size_t>(std::count_if(
      surviving_.begin(), surviving_.end(), [&](const Labeling& c) { return c[x] == y; }));
}

void VersionSpace::restrict(Point x, Label y) {
  std::erase_if(surviving_, [&](const Labeling& c) { return c[x] != y; });
}

namespace {

void check_horizon(std::size_t domain, const LabelSource& source) {
  if (source.length() > domain) {
    throw Error(ErrorCode::kInvalidArgument, "label stream longer than the domain");
  }
}

[[noreturn]] void not_realizable(std::size_t t) {
  throw Error(ErrorCode::kNotRealizableStream,
              "version space emptied at round " + std::to_string(t));
}

}  // namespace

TrialRecord run_soa(const ExplicitClass& cls, LabelSource& source) {
  check_horizon(cls.domain_size(), source);
  LittlestoneSolver solver(cls.domain_size());
  std::vector<std::uint32_t> v = to_masks(cls);
  std::sort(v.begin(), v.end());
  TrialRecord rec;
  std::vector<std::uint32_t> zeros, ones;
  for (std::size_t t = 0; t < source.length(); ++t) {
    zeros.clear();
    ones.clear();
    for (std::uint32_t m : v) ((m >> t) & 1u ? ones : zeros).push_back(m);
    Label pred;
    if (zeros.empty()) {
      pred = 1;
    } else if (ones.empty()) {
      pred = 0;
    } else {
      pred = solver.solve(ones) >= solver.solve(zeros) ? 1 : 0;
    }
    const Label y = source.reveal(t, pred);
    rec.add_round(t, pred, y);
    v = y == 1 ? ones : zeros;
    if (v.empty()) not_realizable(t);
  }
  return rec;
}

TrialRecord run_halving(const ExplicitClass& cls, LabelSource& source) {
  check_horizon(cls.domain_size(), source);
  VersionSpace v(cls);
  TrialRecord rec;
  for (std::size_t t = 0; t < source.length(); ++t) {
    const std::size_t ones = v.count_with(t, 1);
    const Label pred = 2 * ones >= v.size() ? 1 : 0;
    const Label y = source.reveal(t, pred);
    rec.add_round(t, pred, y);
    v.restrict(t, y);
    if (v.empty()) not_realizable(t);
  }
  return rec;
}

double default_mwu_eta(std::size_t class_size, std::size_t horizon) {
  if (class_size <= 1 || horizon == 0) return 1.0;
  return std::min(1.0, std::sqrt(2.0 * std::log(static_cast<double>(class_size)) /
                                 static_cast<double>(horizon)));
}

double mwu_regret_bound(std::size_t class_size, std::size_t horizon) {
  const double ln_n = std::log(static_cast<double>(class_size));
  return std::sqrt(static_cast<double>(horizon) / 2.0 * ln_n) + ln_n;
}

TrialRecord run_mwu_agnostic(const ExplicitClass& cls, LabelSource& source, double eta,
                             std::uint64_t seed) {
  if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "eta must lie in (0, 1]");
  check_horizon(cls.domain_size(), source);
  const std::size_t horizon = source.length();
  CounterRng rng(seed);
  // Weights are (1 - eta)^(loss - min_loss); precomputed by excess loss.
  std::vector<double> power(horizon + 1);
  for (std::size_t i = 0; i <= horizon; ++i) power[i] = std::pow(1.0 - eta, static_cast<double>(i));
  std::vector<std::size_t> loss(cls.size(), 0);
  std::size_t min_loss = 0;
  TrialRecord rec;
  rec.seed = seed;
  for (std::size_t t = 0; t < horizon; ++t) {
    double total = 0.0, ones = 0.0;
    for (std::size_t i = 0; i < cls.size(); ++i) {
      const double w = power[loss[i] - min_loss];
      total += w;
      if (cls.labelings()[i][t] == 1) ones += w;
    }
    const Label pred = rng.bernoulli(ones / total) ? 1 : 0;
    const Label y = source.reveal(t, pred);
    rec.add_round(t, pred, y);
    for (std::size_t i = 0; i < cls.size(); ++i) loss[i] += (cls.labelings()[i][t] != y);
    min_loss = *std::min_element(loss.begin(), loss.end());
  }
  rec.regret = static_cast<double>(rec.mistakes) - static_cast<double>(min_loss);
  return rec;
}

ExplicitClass transductive_enumerate(OracleSession& session, std::size_t horizon,
                                     std::size_t d_cap, double budget_multiplier) {
  if (horizon > session.domain_size()) {
    throw Error(ErrorCode::kInvalidArgument, "horizon exceeds the session's domain");
  }
  const double sauer = static_cast<double>(sauer_bound(d_cap, horizon));
  const double cap = budget_multiplier * 2.0 * static_cast<double>(horizon) * sauer;
  std::size_t used = 0;
  std::vector<LabeledSample> prefixes{LabeledSample{}};
  for (std::size_t t = 0; t < horizon; ++t) {
    std::vector<LabeledSample> next;
    for (const LabeledSample& p : prefixes) {
      for (Label y = 0; y < 2; ++y) {
        if (static_cast<double>(used + 1) > cap) {
          throw Error(ErrorCode::kQueryBudgetExceeded,
                      "enumeration passed its query budget; is the VC cap too small?");
        }
        ++used;
        LabeledSample extended = p.with(t, y);
        if (session.realizable(extended)) next.push_back(std::move(extended));
      }
    }
    prefixes = std::move(next);
  }
  std::vector<Labeling> out;
  out.reserve(prefixes.size());
  for (const LabeledSample& p : prefixes) {
    std::vector<Label> bits(horizon);
    for (const auto& [x, y] : p) bits[x] = y;
    out.emplace_back(std::move(bits));
  }
  return ExplicitClass(std::move(out));
}

namespace {

class FixedConcept final : public LazyConcept {
 public:
  explicit FixedConcept(Labeling c) : c_(std::move(c)) {}
  Label at(Point x) override { return c_[x]; }

 private:
  Labeling c_;
};

}  // namespace

ConceptPtr SessionErmChannel::erm(const LabeledSample& sample) {
  auto c = restricted_ ? session_.restricted_erm_query(sample, history_) : session_.erm_query(sample);
  if (!c) return nullptr;
  return std::make_shared<FixedConcept>(std::move(*c));
}

class WcSimulatedErmChannel::Simulated final : public LazyConcept {
 public:
  Simulated(WcSimulatedErmChannel& owner, const LabeledSample& sample,
            std::shared_ptr<std::size_t> spent)
      : owner_(owner), known_(sample), spent_(std::move(spent)) {}

  Label at(Point x) override {
    if (x >= owner_.domain_size()) throw Error(ErrorCode::kInvalidArgument, "point outside domain");
    if (owner_.mode_ == SimulationMode::kOnline && x > owner_.round_) {
      throw Error(ErrorCode::kContractViolation,
                  "evaluated point " + std::to_string(x) + " at round " +
                      std::to_string(owner_.round_));
    }
    for (; next_ <= x; ++next_) {
      if (known_.contains(next_)) continue;
      ++*spent_;
      const bool zero_ok = owner_.session_.realizable(known_.with(next_, 0));
      known_ = known_.with(next_, zero_ok ? 0 : 1);
    }
    return *known_.label_of(x);
  }

 private:
  WcSimulatedErmChannel& owner_;
  LabeledSample known_;
  Point next_ = 0;
  std::shared_ptr<std::size_t> spent_;
};

WcSimulatedErmChannel::WcSimulatedErmChannel(OracleSession& session, SimulationMode mode)
    : session_(session), mode_(mode) {}

ConceptPtr WcSimulatedErmChannel::erm(const LabeledSample& sample) {
  if (mode_ == SimulationMode::kOnline) {
    for (const LabeledPoint& p : sample) {
      if (!history_.contains(p)) {
        throw Error(ErrorCode::kContractViolation,
                    "query pair " + std::to_string(p.point) + " was not revealed");
      }
    }
  }
  ++calls_;
  auto spent = std::make_shared<std::size_t>(0);
  per_call_.push_back(spent);
  if (!sample.empty()) {
    ++*spent;
    if (!session_.realizable(sample)) return nullptr;
  }
  return std::make_shared<Simulated>(*this, sample, std::move(spent));
}

std::size_t WcSimulatedErmChannel::max_wc_per_call() const {
  std::size_t best = 0;
  for (const auto& p : per_call_) best = std::max(best, *p);
  return best;
}

SimulationResult simulate_erm_with_wc(const ErmLearner& learner, OracleSession& session,
                                      LabelSource& source, SimulationMode mode) {
  WcSimulatedErmChannel channel(session, mode);
  SimulationResult out;
  out.record = learner(channel, source);
  out.simulated_erm_calls = channel.simulated_calls();
  out.max_wc_per_call = channel.max_wc_per_call();
  return out;
}

TrialRecord erm_follow(ErmChannel& channel, LabelSource& source) {
  const QueryCounts start = channel.counts();
  TrialRecord rec;
  LabeledSample history;
  channel.begin_round(0);
  ConceptPtr c = channel.erm(history);
  for (std::size_t t = 0; t < source.length(); ++t) {
    channel.begin_round(t);
    const Label pred = c ? c->at(t) : 0;
    const Label y = source.reveal(t, pred);
    rec.add_round(t, pred, y);
    channel.reveal(t, y);
    history = history.with(t, y);
    if (pred != y) c = channel.erm(history);
  }
  rec.queries = channel.counts() - start;
  return rec;
}

TrialRecord predict_zero(LabelSource& source) {
  TrialRecord rec;
  for (std::size_t t = 0; t < source.length(); ++t) rec.add_round(t, 0, source.reveal(t, 0));
  return rec;
}

}  // namespace oraclearn
