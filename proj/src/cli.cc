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

#include "oraclearn/cli.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "oraclearn/adversaries.h"
#include "oraclearn/analysis.h"
#include "oraclearn/core.h"
#include "oraclearn/error.h"
#include "oraclearn/rng.h"
#include "oraclearn/structured.h"

namespace oraclearn {
namespace {

enum RngTag : std::uint64_t { kTagClass = 1, kTagTarget = 2, kTagLearner = 3 };

std::size_t ceil_log2(std::size_t n) {
  return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
}

bool one_of(const std::string& s, std::initializer_list<const char*> options) {
  return std::any_of(options.begin(), options.end(), [&](const char* o) { return s == o; });
}

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

HiddenClassSpec draw_spec(const RunConfig& c, CounterRng rng) {
  if (c.class_kind == "thresholds" || c.class_kind == "kintervals") {
    std::vector<std::size_t> perm = identity_perm(c.t);
    rng.shuffle(perm);
    if (c.class_kind == "thresholds") return ThresholdSpec{std::move(perm)};
    return KIntervalsSpec{std::move(perm), c.k};
  }
  std::vector<Label> center(c.t);
  for (Label& b : center) b = static_cast<Label>(rng.next_u64() & 1u);
  return HammingBallSpec{Labeling(std::move(center)), c.d};
}

Labeling draw_target(const HiddenClassSpec& spec, const RunConfig& c, CounterRng rng) {
  const std::size_t n = c.t;
  std::vector<Label> bits(n, 0);
  if (const auto* s = std::get_if<ThresholdSpec>(&spec)) {
    const std::size_t cut = rng.uniform_below(n + 1);
    for (Point x = 0; x < n; ++x) bits[x] = s->perm[x] >= cut ? 1 : 0;
  } else if (const auto* s = std::get_if<KIntervalsSpec>(&spec)) {
    // A random number of blocks, then distinct boundaries among the n+1 gaps.
    const std::size_t blocks = std::min<std::size_t>(rng.uniform_below(s->k + 1), (n + 1) / 2);
    std::vector<std::size_t> gaps(n + 1);
    for (std::size_t i = 0; i <= n; ++i) gaps[i] = i;
    std::vector<std::size_t> cuts = rng.sample_without_replacement(gaps, 2 * blocks);
    std::sort(cuts.begin(), cuts.end());
    for (Point x = 0; x < n; ++x) {
      const std::size_t r = s->perm[x];
      const auto above = static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), r) - cuts.begin());
      bits[x] = above % 2 == 1 ? 1 : 0;
    }
  } else {
    const auto& h = std::get<HammingBallSpec>(spec);
    bits = h.center.bits();
    const std::size_t radius = rng.uniform_below(h.d + 1);
    std::vector<Point> all(n);
    for (Point x = 0; x < n; ++x) all[x] = x;
    for (Point x : rng.sample_without_replacement(all, radius)) bits[x] ^= 1u;
  }
  return Labeling(std::move(bits));
}

std::size_t vc_cap(const RunConfig& c) {
  if (c.class_kind == "thresholds") return 1;
  if (c.class_kind == "kintervals") return 2 * c.k;
  return c.d;
}

void apply_budgets(const RunConfig& c, OracleSession& session) {
  for (const auto& [kind, n] : c.budgets) session.set_budget(kind, n);
}

// Learners that run against a session over a hidden or explicit class.
TrialRecord dispatch(const RunConfig& c, OracleSession& session, LabelSource& source,
                     CounterRng& rng) {
  const std::string& l = c.learner;
  if (l == "thr-sort-wc") return threshold_sort_wc(session, source).record;
  if (l == "thr-rand-wc") return threshold_rand_wc(session, source, c.delta, rng);
  if (l == "kint-wc") return kintervals_learn(session, source, c.k, c.delta, rng).record;
  if (l == "ham-opt") return hamming_optimal(session, source, c.d);
  if (l == "predict-0") return predict_zero(source);
  if (l == "enum-halving" || l == "enum-soa") {
    const QueryCounts start = session.counts();
    const ExplicitClass cls = transductive_enumerate(session, c.t, vc_cap(c));
    TrialRecord rec = l == "enum-soa" ? run_soa(cls, source) : run_halving(cls, source);
    rec.queries = session.counts() - start;
    return rec;
  }
  if (l == "ham-1q-wc" || l == "thr-det-erm-wc") {
    ErmLearner fn = l == "ham-1q-wc" ? ErmLearner(hamming_single_query) : ErmLearner(threshold_det_erm);
    return simulate_erm_with_wc(fn, session, source).record;
  }
  SessionErmChannel channel(session, l == "erm-follow");
  if (l == "thr-det-erm") return threshold_det_erm(channel, source);
  if (l == "thr-rand-erm") return threshold_rand_erm(channel, source, c.delta, rng);
  if (l == "ham-1q") return hamming_single_query(channel, source);
  if (l == "erm-follow") return erm_follow(channel, source);
  config_error("learner '" + l + "' cannot run against a session");
}

[[noreturn]] void ceiling(const std::string& what) {
  throw Error(ErrorCode::kContractViolation, "ceiling exceeded: " + what);
}

// Per-trial guarantees of the deterministic learners under realizable targets.
void check_ceilings(const RunConfig& c, const TrialRecord& r) {
  const std::size_t t = c.t;
  const std::string& l = c.learner;
  const std::size_t ld_bound = ceil_log2(t + 1);
  if (l == "thr-sort-wc") {
    if (r.queries.wc() > t * ceil_log2(t) + t) ceiling("thr-sort-wc WC queries");
    if (r.mistakes > ld_bound) ceiling("thr-sort-wc mistakes");
  } else if (l == "thr-det-erm") {
    if (r.queries.erm() > 2 * t) ceiling("thr-det-erm ERM queries");
    if (r.mistakes > ld_bound) ceiling("thr-det-erm mistakes");
  } else if (l == "thr-det-erm-wc") {
    if (r.queries.wc() > t * 2 * t) ceiling("thr-det-erm-wc WC queries");
    if (r.mistakes > ld_bound) ceiling("thr-det-erm-wc mistakes");
  } else if (l == "ham-1q") {
    if (r.queries.erm() != 1) ceiling("ham-1q must make exactly one ERM query");
    if (r.mistakes > 2 * c.d) ceiling("ham-1q mistakes");
  } else if (l == "ham-1q-wc") {
    if (r.queries.wc() > t) ceiling("ham-1q-wc WC queries");
    if (r.mistakes > 2 * c.d) ceiling("ham-1q-wc mistakes");
  } else if (l == "ham-opt") {
    if (r.queries.total() > (std::size_t{1} << (c.d + 1)) + 1) ceiling("ham-opt queries");
    if (r.mistakes > c.d) ceiling("ham-opt mistakes");
  } else if (l == "kint-wc") {
    const double cap = 5.0 * std::pow(static_cast<double>(t), 3) * std::pow(4.0, static_cast<double>(c.k));
    if (static_cast<double>(r.queries.wc()) > cap) ceiling("kint-wc WC queries");
  } else if (l == "enum-halving" || l == "enum-soa") {
    if (r.queries.wc() > 2 * t * sauer_bound(vc_cap(c), t)) ceiling(l + " WC queries");
  }
}

// Remembers every round so a trial cut short by its budget can be completed.
class RecordingSource final : public LabelSource {
 public:
  explicit RecordingSource(LabelSource& inner) : inner_(inner) {}
  std::size_t length() const override { return inner_.length(); }
  Label reveal(std::size_t t, Label prediction) override {
    const Label y = inner_.reveal(t, prediction);
    record.add_round(t, prediction, y);
    return y;
  }
  TrialRecord record;

 private:
  LabelSource& inner_;
};

// Budget exhaustion is a legal outcome here: the learner predicts 0 for the
// rounds it never reached.
TrialRecord dispatch_with_fallback(const RunConfig& c, OracleSession& session, LabelSource& source,
                                   CounterRng& rng) {
  RecordingSource recording(source);
  try {
    return dispatch(c, session, recording, rng);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kBudgetExceeded) throw;
  }
  TrialRecord rec = std::move(recording.record);
  for (std::size_t t = rec.rounds.size(); t < source.length(); ++t) rec.add_round(t, 0, source.reveal(t, 0));
  rec.queries = session.counts();
  return rec;
}

UniformFamily family_of(const std::string& kind) {
  if (kind == "thresholds") return UniformFamily::kThresholds;
  if (kind == "kintervals") return UniformFamily::kKIntervals;
  if (kind == "hamming") return UniformFamily::kHamming;
  return UniformFamily::kSingleton;
}

std::string fixed6(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::string describe(const RunConfig& c) {
  std::ostringstream s;
  s << "learner=" << c.learner << " adversary=" << c.adversary << " class=" << c.class_kind
    << " t=" << c.t << " k=" << c.k << " d=" << c.d << " delta=" << fixed6(c.delta)
    << " agnostic=" << (c.agnostic ? 1 : 0) << " phase=" << c.phase;
  for (const auto& [kind, n] : c.budgets) s << " budget_" << oracle_kind_name(kind) << '=' << n;
  return s.str();
}

struct Summary {
  std::vector<double> mean;
  std::vector<double> max;
  bool regret = false;
};

std::vector<double> row_values(const TrialRecord& r) {
  return {static_cast<double>(r.mistakes), static_cast<double>(r.queries.wc()),
          static_cast<double>(r.queries.erm()), static_cast<double>(r.queries.agnostic_erm()),
          static_cast<double>(r.queries.restricted_erm()), r.regret.value_or(0.0)};
}

Summary summarize(const std::vector<TrialRecord>& trials) {
  Summary s;
  s.mean.assign(6, 0.0);
  s.max.assign(6, -std::numeric_limits<double>::infinity());
  s.regret = !trials.empty() && std::all_of(trials.begin(), trials.end(),
                                            [](const TrialRecord& r) { return r.regret.has_value(); });
  for (const TrialRecord& r : trials) {
    const auto v = row_values(r);
    for (std::size_t i = 0; i < v.size(); ++i) {
      s.mean[i] += v[i];
      s.max[i] = std::max(s.max[i], v[i]);
    }
  }
  for (double& m : s.mean) m /= static_cast<double>(std::max<std::size_t>(1, trials.size()));
  return s;
}

constexpr const char* kColumns = "mistakes,wc_queries,erm_queries,agnostic_erm_queries,restricted_erm_queries,regret";

}  // namespace

const std::vector<std::string>& learner_ids() {
  static const std::vector<std::string> ids{
      "thr-sort-wc", "thr-rand-wc", "thr-det-erm", "thr-rand-erm", "kint-wc",
      "ham-1q",      "ham-opt",     "enum-halving", "enum-soa",    "erm-follow",
      "ham-1q-wc",   "thr-det-erm-wc", "mwu",       "predict-0",   "erm-refit",
      "erm-probe",   "erm-perturb"};
  return ids;
}

const std::vector<std::string>& adversary_ids() {
  static const std::vector<std::string> ids{"adv-target", "adv-nested", "adv-eqclass", "adv-uniform",
                                            "adv-noise"};
  return ids;
}

void validate(const RunConfig& c) {
  const auto& ls = learner_ids();
  if (std::find(ls.begin(), ls.end(), c.learner) == ls.end()) config_error("unknown learner '" + c.learner + "'");
  const auto& as = adversary_ids();
  if (std::find(as.begin(), as.end(), c.adversary) == as.end()) {
    config_error("unknown adversary '" + c.adversary + "'");
  }
  if (!one_of(c.class_kind, {"thresholds", "kintervals", "hamming"})) {
    config_error("unknown class '" + c.class_kind + "'");
  }
  if (c.t == 0) config_error("--t must be at least 1");
  if (c.trials == 0) config_error("--trials must be at least 1");
  if (!(c.delta > 0.0 && c.delta < 1.0)) config_error("--delta must lie in (0, 1)");
  if (c.jobs == 0) config_error("--jobs must be at least 1");
  const std::string& l = c.learner;
  const bool nested_learner = one_of(l, {"erm-follow", "erm-refit", "erm-probe", "erm-perturb"});
  if (c.adversary == "adv-nested") {
    if (!nested_learner) config_error("adv-nested runs the ERM-only learners erm-follow, erm-refit, erm-probe, erm-perturb");
    return;
  }
  if (one_of(l, {"erm-refit", "erm-probe", "erm-perturb"})) config_error(l + " runs only against adv-nested");
  if (c.agnostic) config_error("--agnostic applies to adv-nested only");
  if (c.adversary == "adv-eqclass") {
    if (!one_of(l, {"erm-follow", "predict-0"})) config_error("adv-eqclass runs erm-follow or predict-0");
    return;
  }
  if (l == "mwu") {
    if (!one_of(c.adversary, {"adv-target", "adv-noise"})) config_error("mwu runs against adv-target or adv-noise");
    return;
  }
  if (c.adversary == "adv-noise") config_error("adv-noise runs mwu or predict-0");
  const bool thr = one_of(l, {"thr-sort-wc", "thr-rand-wc", "thr-det-erm", "thr-rand-erm", "thr-det-erm-wc"});
  const bool ham = one_of(l, {"ham-1q", "ham-opt", "ham-1q-wc"});
  if (thr && c.class_kind != "thresholds") config_error(l + " needs --class thresholds");
  if (l == "kint-wc" && c.class_kind != "kintervals") config_error("kint-wc needs --class kintervals");
  if (ham && c.class_kind != "hamming") config_error(l + " needs --class hamming");
}

std::uint64_t config_hash(const RunConfig& c) {
  const std::string s = describe(c);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

TrialRecord run_trial(const RunConfig& c, std::uint64_t seed) {
  CounterRng root(seed);
  CounterRng learner_rng = root.fork(kTagLearner);
  TrialRecord rec;
  if (c.adversary == "adv-nested") {
    NestedCellAdversary adv(c.t, seed, c.agnostic, c.phase);
    rec = run_nested(adv, c.learner, learner_rng.next_u64());
  } else if (c.adversary == "adv-eqclass") {
    EqClassAdversary adv(c.t, c.d);
    EqClassErmChannel channel(adv);
    EqClassLabelSource source(adv);
    rec = c.learner == "predict-0" ? predict_zero(source) : erm_follow(channel, source);
    adv.finish();
    const WitnessReport report = adv.validate_witness();
    if (!report.valid) throw Error(ErrorCode::kContractViolation, "witness failed: " + report.failure);
  } else if (c.adversary == "adv-noise") {
    const HiddenClassSpec spec = draw_spec(c, root.fork(kTagClass));
    CounterRng labels_rng = root.fork(kTagTarget);
    std::vector<Label> bits(c.t);
    for (Label& b : bits) b = static_cast<Label>(labels_rng.next_u64() & 1u);
    StreamSource source{Labeling(bits)};
    if (c.learner == "predict-0") {
      rec = predict_zero(source);
    } else {
      const ExplicitClass cls = expand(spec);
      rec = run_mwu_agnostic(cls, source, default_mwu_eta(cls.size(), c.t), learner_rng.next_u64());
    }
  } else if (c.adversary == "adv-uniform") {
    UniformEnvironment env = uniform_concept_environment(c.t, seed, family_of(c.class_kind), c.k, c.d);
    OracleSession session(env.handle, TieBreakPolicy::kCanonicalMin, TranscriptMode::kCountsOnly);
    apply_budgets(c, session);
    StreamSource source(env.target);
    rec = dispatch_with_fallback(c, session, source, learner_rng);
  } else {
    const HiddenClassSpec spec = draw_spec(c, root.fork(kTagClass));
    const Labeling target = draw_target(spec, c, root.fork(kTagTarget));
    StreamSource source(target);
    if (c.learner == "mwu") {
      const ExplicitClass cls = expand(spec);
      rec = run_mwu_agnostic(cls, source, default_mwu_eta(cls.size(), c.t), learner_rng.next_u64());
    } else {
      OracleSession session(spec, TieBreakPolicy::kCanonicalMin, TranscriptMode::kCountsOnly);
      apply_budgets(c, session);
      rec = dispatch(c, session, source, learner_rng);
      check_ceilings(c, rec);
    }
  }
  rec.seed = seed;
  return rec;
}

std::vector<TrialRecord> run_batch(const RunConfig& c) {
  validate(c);
  std::vector<TrialRecord> out(c.trials);
  std::vector<std::exception_ptr> errors(c.trials);
  auto work = [&](std::size_t worker) {
    for (std::size_t i = worker; i < c.trials; i += c.jobs) {
      try {
        out[i] = run_trial(c, c.seed + i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (c.jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(c.jobs, c.trials); ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::string format_csv(const RunConfig& c, const std::vector<TrialRecord>& trials) {
  std::ostringstream out;
  const Summary s = summarize(trials);
  out << "# oraclearn-csv v1\n";
  out << "# " << describe(c) << " trials=" << trials.size() << " seed=" << c.seed
      << " config_hash=" << hex64(config_hash(c)) << '\n';
  out << "seed," << kColumns << '\n';
  for (const TrialRecord& r : trials) {
    out << r.seed << ',' << r.mistakes << ',' << r.queries.wc() << ',' << r.queries.erm() << ','
        << r.queries.agnostic_erm() << ',' << r.queries.restricted_erm() << ','
        << (r.regret ? fixed6(*r.regret) : "") << '\n';
  }
  out << "# summary\n";
  out << "stat," << kColumns << '\n';
  for (const auto& [name, values] : {std::pair{"mean", s.mean}, std::pair{"max", s.max}}) {
    out << name;
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << ',';
      if (i + 1 < values.size() || s.regret) out << fixed6(values[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::string format_json(const RunConfig& c, const std::vector<TrialRecord>& trials) {
  using nlohmann::ordered_json;
  const Summary s = summarize(trials);
  ordered_json j;
  j["format"] = "oraclearn-json v1";
  j["config"] = {{"learner", c.learner}, {"adversary", c.adversary}, {"class", c.class_kind},
                 {"t", c.t},             {"k", c.k},                 {"d", c.d},
                 {"delta", c.delta},     {"agnostic", c.agnostic},   {"phase", c.phase},
                 {"trials", trials.size()}, {"seed", c.seed}};
  j["config_hash"] = hex64(config_hash(c));
  ordered_json rows = ordered_json::array();
  for (const TrialRecord& r : trials) {
    ordered_json row = {{"seed", r.seed},
                        {"mistakes", r.mistakes},
                        {"queries",
                         {{"wc", r.queries.wc()},
                          {"erm", r.queries.erm()},
                          {"agnostic_erm", r.queries.agnostic_erm()},
                          {"restricted_erm", r.queries.restricted_erm()}}}};
    if (r.regret) row["regret"] = *r.regret;
    rows.push_back(std::move(row));
  }
  j["trials"] = std::move(rows);
  const char* names[] = {"mistakes", "wc_queries", "erm_queries", "agnostic_erm_queries",
                         "restricted_erm_queries", "regret"};
  ordered_json mean, max;
  for (std::size_t i = 0; i < 6; ++i) {
    if (i == 5 && !s.regret) continue;
    mean[names[i]] = s.mean[i];
    max[names[i]] = s.max[i];
  }
  j["summary"] = {{"mean", mean}, {"max", max}};
  return j.dump(2) + "\n";
}

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDomainTooLarge:
    case ErrorCode::kUnsupported:
    case ErrorCode::kOutOfRange:
      return kExitConfig;
    case ErrorCode::kIoError:
      return kExitIo;
    default:
      return kExitAssertion;
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot open '" + path + "' for writing");
  f << text;
  if (!f.flush()) throw Error(ErrorCode::kIoError, "write to '" + path + "' failed");
}

std::string value_of(const std::string& line, const std::string& key) {
  const std::string needle = key + "=";
  std::size_t at = 0;
  while ((at = line.find(needle, at)) != std::string::npos) {
    if (at == 0 || line[at - 1] == ' ') break;
    ++at;
  }
  if (at == std::string::npos) return "";
  const std::size_t from = at + needle.size();
  return line.substr(from, line.find(' ', from) - from);
}

// Parses a file written by `run` back into a batch.
TrialBatch read_run_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  TrialBatch batch;
  auto bad = [&](const std::string& why) { return Error(ErrorCode::kInvalidArgument, path + ": " + why); };
  if (!text.empty() && text.front() == '{') {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("config") || !j.contains("trials")) throw bad("not an oraclearn JSON run");
    batch.learner = j["config"].value("learner", "");
    batch.config_hash = std::stoull(j.value("config_hash", "0"), nullptr, 16);
    for (const auto& row : j["trials"]) {
      TrialRecord r;
      r.seed = row.value("seed", std::uint64_t{0});
      r.mistakes = row.value("mistakes", std::size_t{0});
      for (OracleKind k : {OracleKind::kWeakConsistency, OracleKind::kErm, OracleKind::kAgnosticErm,
                           OracleKind::kRestrictedErm}) {
        r.queries[k] = row["queries"].value(std::string(oracle_kind_name(k)), std::size_t{0});
      }
      if (row.contains("regret")) r.regret = row["regret"].get<double>();
      batch.trials.push_back(std::move(r));
    }
    return batch;
  }
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "# oraclearn-csv v1") throw bad("missing '# oraclearn-csv v1' header");
  if (!std::getline(in, line)) throw bad("missing config line");
  batch.learner = value_of(line, "learner");
  const std::string hash = value_of(line, "config_hash");
  if (batch.learner.empty() || hash.empty()) throw bad("config line lacks learner or config_hash");
  batch.config_hash = std::stoull(hash, nullptr, 16);
  std::getline(in, line);  // column header
  while (std::getline(in, line) && line.rfind("#", 0) != 0) {
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() < 6) throw bad("short row '" + line + "'");
    TrialRecord r;
    try {
      r.seed = std::stoull(cells[0]);
      r.mistakes = std::stoull(cells[1]);
      r.queries[OracleKind::kWeakConsistency] = std::stoull(cells[2]);
      r.queries[OracleKind::kErm] = std::stoull(cells[3]);
      r.queries[OracleKind::kAgnosticErm] = std::stoull(cells[4]);
      r.queries[OracleKind::kRestrictedErm] = std::stoull(cells[5]);
      if (cells.size() > 6 && !cells[6].empty()) r.regret = std::stod(cells[6]);
    } catch (const std::exception&) {
      throw bad("malformed row '" + line + "'");
    }
    batch.trials.push_back(std::move(r));
  }
  return batch;
}

void add_class_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--class", c.class_kind, "thresholds | kintervals | hamming");
  cmd->add_option("--t", c.t, "domain size / horizon");
  cmd->add_option("--k", c.k, "number of intervals");
  cmd->add_option("--d", c.d, "Hamming radius or target dimension");
  cmd->add_option("--seed", c.seed, "base seed");
}

void parse_budgets(const std::vector<std::string>& specs, RunConfig& c) {
  for (const std::string& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) config_error("--budget expects kind=N, got '" + s + "'");
    const auto kind = parse_oracle_kind(s.substr(0, eq));
    if (!kind) config_error("unknown oracle kind in --budget '" + s + "'");
    try {
      std::size_t used = 0;
      const unsigned long long n = std::stoull(s.substr(eq + 1), &used);
      if (used != s.size() - eq - 1) throw std::invalid_argument("trailing");
      c.budgets[*kind] = static_cast<std::size_t>(n);
    } catch (const std::exception&) {
      config_error("bad count in --budget '" + s + "'");
    }
  }
}

std::string dims_report(const RunConfig& c) {
  const HiddenClassSpec spec = draw_spec(c, CounterRng(c.seed).fork(kTagClass));
  const ExplicitClass cls = expand(spec);
  std::ostringstream out;
  out << "class " << kind_name(spec) << "\n";
  out << "t " << c.t << "\n";
  out << "size " << cls.size() << "\n";
  out << "vc " << vc_dimension(cls) << "\n";
  if (std::holds_alternative<KIntervalsSpec>(spec)) {
    out << "note vc is the brute-force value; the closed form is 2k = " << 2 * c.k << "\n";
  }
  if (cls.domain_size() <= kMaxLittlestoneDomain && cls.size() <= kMaxLittlestoneLabelings) {
    out << "littlestone " << littlestone_dimension(cls) << "\n";
  } else {
    out << "littlestone n/a\n";
  }
  return out.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"oraclearn: online learning with consistency and ERM oracles"};
  app.require_subcommand(1);
  RunConfig c;
  std::vector<std::string> budgets;
  std::string out_path;

  CLI::App* run = app.add_subcommand("run", "run a seeded batch of trials");
  add_class_options(run, c);
  run->add_option("--learner", c.learner, "learner id");
  run->add_option("--adversary", c.adversary, "adversary id");
  run->add_option("--trials", c.trials, "number of trials");
  run->add_option("--delta", c.delta, "confidence parameter");
  run->add_option("--budget", budgets, "per-oracle cap, e.g. wc=50")->take_all();
  run->add_option("--out", out_path, "output file (default stdout)");
  run->add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--agnostic", c.agnostic, "agnostic labels (adv-nested)");
  run->add_option("--phase", c.phase, "copies per cell in agnostic mode");
  run->add_option("--jobs", c.jobs, "worker threads");

  CLI::App* dims = app.add_subcommand("dims", "size, VC and Littlestone dimension of a class");
  add_class_options(dims, c);

  std::size_t tree_n = 1, tree_depth = 0;
  double depth_factor = 1.05;
  bool sweep = false;
  CLI::App* tree = app.add_subcommand("treecost", "minimum tree cost against 0.1 n log2 n");
  tree->add_option("--n", tree_n, "root value");
  CLI::Option* depth_opt = tree->add_option("--depth", tree_depth, "depth cap (overrides --depth-factor)");
  tree->add_option("--depth-factor", depth_factor, "depth cap = floor(factor * log2 n)");
  tree->add_flag("--sweep", sweep, "check every n <= 512");

  std::vector<std::string> pareto_learners, pareto_files;
  CLI::App* pareto = app.add_subcommand("pareto", "frontier over run files, or over learners run here");
  pareto->add_option("files", pareto_files, "CSV or JSON files written by run");
  add_class_options(pareto, c);
  pareto->add_option("--learner", pareto_learners, "learner ids to run when no files are given")->take_all();
  pareto->add_option("--adversary", c.adversary, "adversary id");
  pareto->add_option("--trials", c.trials, "trials per learner");
  pareto->add_option("--delta", c.delta, "confidence parameter");
  pareto->add_option("--out", out_path, "output file (default stdout)");

  std::optional<std::size_t> dcap;
  double multiplier = 1.0;
  CLI::App* enumerate = app.add_subcommand("enumerate", "recover a hidden class with WC queries");
  add_class_options(enumerate, c);
  enumerate->add_option("--dcap", dcap, "VC cap for the query budget");
  enumerate->add_option("--multiplier", multiplier, "budget multiplier");
  enumerate->add_option("--out", out_path, "output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      parse_budgets(budgets, c);
      const std::vector<TrialRecord> trials = run_batch(c);
      emit(c.format == "json" ? format_json(c, trials) : format_csv(c, trials), out_path, out);
    } else if (*dims) {
      emit(dims_report(c), "", out);
    } else if (*tree) {
      std::ostringstream s;
      if (sweep) {
        s << "n,depth,cost,bound,ok\n";
        const TreeCostTable table(kMaxTreeCostN, ceil_log2(kMaxTreeCostN) + 1);
        bool all = true;
        for (std::size_t n = 2; n <= kMaxTreeCostN; ++n) {
          // The capped depth can be too shallow for any tree; fall back to the
          // shallowest feasible one, which only lowers the cost.
          const std::size_t depth = std::max(sweep_depth_cap(n), ceil_log2(n));
          const auto cost = table.cost(n, depth);
          const double bound = 0.1 * static_cast<double>(n) * std::log2(static_cast<double>(n));
          const bool ok = !cost || static_cast<double>(*cost) >= bound;
          all = all && ok;
          s << n << ',' << depth << ',' << (cost ? std::to_string(*cost) : "infeasible") << ','
            << fixed6(bound) << ',' << (ok ? 1 : 0) << '\n';
        }
        out << s.str();
        return all ? kExitOk : kExitAssertion;
      }
      const std::size_t depth =
          depth_opt->count() > 0 || tree_n <= 1
              ? tree_depth
              : static_cast<std::size_t>(std::floor(depth_factor * std::log2(static_cast<double>(tree_n)) + 1e-9));
      const std::size_t cost = min_tree_cost(TreeCostQuery{tree_n, depth});
      const double bound = tree_n <= 1 ? 0.0 : 0.1 * static_cast<double>(tree_n) * std::log2(static_cast<double>(tree_n));
      const bool ok = static_cast<double>(cost) >= bound;
      s << "n " << tree_n << "\ndepth " << depth << "\ncost " << cost << "\nbound " << fixed6(bound) << '\n'
        << (ok ? "PASS" : "FAIL") << '\n';
      out << s.str();
      if (!ok) return kExitAssertion;
    } else if (*pareto) {
      std::vector<TrialBatch> batches;
      for (const std::string& path : pareto_files) batches.push_back(read_run_file(path));
      if (!pareto_files.empty()) pareto_learners.clear();
      for (const std::string& l : pareto_learners) {
        RunConfig lc = c;
        lc.learner = l;
        batches.push_back(TrialBatch{l, config_hash(lc), run_batch(lc)});
      }
      emit(pareto_csv(pareto_aggregate(batches)), out_path, out);
    } else if (*enumerate) {
      const HiddenClassSpec spec = draw_spec(c, CounterRng(c.seed).fork(kTagClass));
      OracleSession session(spec, TieBreakPolicy::kCanonicalMin, TranscriptMode::kCountsOnly);
      const ExplicitClass cls = transductive_enumerate(session, c.t, dcap.value_or(vc_cap(c)), multiplier);
      std::ostringstream s;
      s << "# " << kind_name(spec) << " t=" << c.t << " labelings=" << cls.size()
        << " wc_queries=" << session.counts().wc() << '\n'
        << cls.serialize();
      emit(s.str(), out_path, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitAssertion;
  }
  return kExitOk;
}

}  // namespace oraclearn
