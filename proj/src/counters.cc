// Copyright 2026 The privrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privrl/counters.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "privrl/strings.h"
#include "json.hpp"

namespace privrl {

int TreeDepth(int64_t capacity) {
  const uint64_t t = static_cast<uint64_t>(std::max<int64_t>(capacity, 2));
  return static_cast<int>(std::bit_width(t - 1));
}

absl::StatusOr<double> CounterErrorBound(int64_t capacity, double epsilon,
                                         double beta) {
  if (capacity < 1) return absl::InvalidArgumentError("T must be >= 1");
  if (!(epsilon > 0.0)) return absl::InvalidArgumentError("epsilon must be > 0");
  if (!(beta > 0.0 && beta < 1.0)) {
    return absl::InvalidArgumentError("beta must lie in (0, 1)");
  }
  const double lg = std::log2(static_cast<double>(std::max<int64_t>(capacity, 2)));
  return (4.0 / epsilon) * std::log(1.0 / beta) * std::pow(lg, 2.5);
}

absl::StatusOr<PrivateCounter> PrivateCounter::Create(int64_t capacity,
                                                      double epsilon) {
  if (capacity < 1) return absl::InvalidArgumentError("capacity must be >= 1");
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError("counter epsilon must be > 0");
  }
  PrivateCounter c;
  c.capacity_ = capacity;
  c.epsilon_ = epsilon;
  c.depth_ = TreeDepth(capacity);
  c.mode_ = std::isinf(epsilon) ? NoiseMode::kNoiseFree : NoiseMode::kLaplace;
  c.per_level_epsilon_ = epsilon / c.depth_;
  c.clean_.assign(c.depth_ + 1, 0.0);
  c.noisy_.assign(c.depth_ + 1, 0.0);
  return c;
}

absl::StatusOr<double> PrivateCounter::Feed(double value, Rng& rng) {
  if (t_ >= capacity_) {
    return absl::OutOfRangeError(
        StrCat("counter capacity ", capacity_, " exceeded"));
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    return absl::InvalidArgumentError(
        StrCat("counter symbol ", value, " outside [0,1]"));
  }
  ++t_;
  const uint64_t bits = static_cast<uint64_t>(t_);
  const int i = std::countr_zero(bits);
  double partial = value;
  for (int j = 0; j < i; ++j) {
    partial += clean_[j];
    clean_[j] = 0.0;
    noisy_[j] = 0.0;
  }
  clean_[i] = partial;
  noisy_[i] = partial;
  if (mode_ == NoiseMode::kLaplace) {
    noisy_[i] += SampleLaplace(rng, 1.0 / per_level_epsilon_);
  }
  double raw = 0.0;
  for (int j = 0; j <= depth_; ++j) {
    if ((bits >> j) & 1U) raw += noisy_[j];
  }
  terms_in_last_release_ = std::popcount(bits);
  last_release_ = std::max(raw, last_release_);
  return last_release_;
}

double PrivateCounter::ExactPrefixSum() const {
  double sum = 0.0;
  const uint64_t bits = static_cast<uint64_t>(t_);
  for (int j = 0; j <= depth_; ++j) {
    if ((bits >> j) & 1U) sum += clean_[j];
  }
  return sum;
}

namespace {

using nlohmann::json;

constexpr char kCounterFormat[] = "privrl-counter";
constexpr int kCounterVersion = 1;

json EpsilonToJson(double epsilon) {
  return std::isinf(epsilon) ? json(nullptr) : json(epsilon);
}

}  // namespace

std::string PrivateCounter::ToJson() const {
  json doc;
  doc["format"] = kCounterFormat;
  doc["version"] = kCounterVersion;
  doc["capacity"] = capacity_;
  doc["epsilon"] = EpsilonToJson(epsilon_);
  doc["t"] = t_;
  doc["last_release"] = last_release_;
  doc["clean"] = clean_;
  doc["noisy"] = noisy_;
  return doc.dump() + "\n";
}

absl::StatusOr<PrivateCounter> PrivateCounter::FromJson(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() ||
      doc.value("format", "") != kCounterFormat) {
    return absl::InvalidArgumentError("not a counter checkpoint");
  }
  if (doc.value("version", 0) != kCounterVersion) {
    return absl::InvalidArgumentError("unsupported counter checkpoint version");
  }
  try {
    const double epsilon =
        doc.at("epsilon").is_null() ? kNoPrivacy : doc.at("epsilon").get<double>();
    auto counter = Create(doc.at("capacity").get<int64_t>(), epsilon);
    if (!counter.ok()) return counter.status();
    counter->t_ = doc.at("t").get<int64_t>();
    counter->last_release_ = doc.at("last_release").get<double>();
    counter->clean_ = doc.at("clean").get<std::vector<double>>();
    counter->noisy_ = doc.at("noisy").get<std::vector<double>>();
    if (counter->t_ < 0 || counter->t_ > counter->capacity_ ||
        static_cast<int>(counter->clean_.size()) != counter->depth_ + 1 ||
        counter->noisy_.size() != counter->clean_.size()) {
      return absl::InvalidArgumentError("inconsistent counter checkpoint");
    }
    counter->terms_in_last_release_ =
        std::popcount(static_cast<uint64_t>(counter->t_));
    return counter;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        StrCat("malformed counter checkpoint: ", e.what()));
  }
}

EpisodeSymbols SymbolsForEpisode(int num_states, int num_actions, int horizon,
                                 const Trajectory& trajectory) {
  const size_t sah = static_cast<size_t>(num_states) * num_actions * horizon;
  EpisodeSymbols sym{std::vector<double>(sah, 0.0),
                     std::vector<double>(sah, 0.0),
                     std::vector<double>(sah * num_states, 0.0)};
  for (int h = 0; h < horizon; ++h) {
    const Step& step = trajectory.steps[h];
    const size_t idx =
        (static_cast<size_t>(step.state) * num_actions + step.action) * horizon + h;
    sym.rewards[idx] = step.reward;
    sym.visits[idx] = 1.0;
    sym.transitions[idx * num_states + step.next_state] = 1.0;
  }
  return sym;
}

namespace {

FamilyDelta Delta(const std::vector<double>& first,
                  const std::vector<double>& second) {
  FamilyDelta d;
  for (size_t i = 0; i < first.size(); ++i) {
    const double diff = first[i] - second[i];
    if (diff > 0.0) d.removed += diff;
    if (diff < 0.0) d.added -= diff;
  }
  return d;
}

}  // namespace

SensitivityReport EpisodeSensitivity(int num_states, int num_actions,
                                     int horizon, const Trajectory& first,
                                     const Trajectory& second) {
  const EpisodeSymbols a =
      SymbolsForEpisode(num_states, num_actions, horizon, first);
  const EpisodeSymbols b =
      SymbolsForEpisode(num_states, num_actions, horizon, second);
  return {Delta(a.rewards, b.rewards), Delta(a.visits, b.visits),
          Delta(a.transitions, b.transitions)};
}

double FamilyErrorBound(int num_states, int num_actions, int horizon,
                        double epsilon, double beta, int64_t capacity) {
  if (std::isinf(epsilon)) return 0.0;
  const double counters = static_cast<double>(
      FamilyCounterCount(num_states, num_actions, horizon));
  const double log_t = std::log(static_cast<double>(capacity));
  return (3.0 / epsilon) * horizon * std::log(counters / BetaPrime(beta)) *
         std::pow(log_t, 2.5);
}

absl::StatusOr<CounterFamily> CounterFamily::Create(
    int num_states, int num_actions, int horizon, double epsilon, double beta,
    int64_t capacity, int64_t max_counters) {
  if (num_states < 1 || num_actions < 1 || horizon < 1) {
    return absl::InvalidArgumentError("S, A and H must be positive");
  }
  if (!(epsilon > 0.0)) return absl::InvalidArgumentError("epsilon must be > 0");
  if (!(beta > 0.0 && beta < 1.0)) {
    return absl::InvalidArgumentError("beta must lie in (0, 1)");
  }
  if (capacity < 1) return absl::InvalidArgumentError("T must be >= 1");
  const int64_t total = FamilyCounterCount(num_states, num_actions, horizon);
  if (total > max_counters) {
    return absl::ResourceExhaustedError(StrCat(
        "counter family needs ", total, " counters, cap is ", max_counters));
  }

  CounterFamily f;
  f.num_states_ = num_states;
  f.num_actions_ = num_actions;
  f.horizon_ = horizon;
  f.capacity_ = capacity;
  f.epsilon_ = epsilon;
  f.per_counter_epsilon_ = FamilyCounterEpsilon(epsilon, horizon);
  f.per_counter_beta_ = BetaPrime(beta) / static_cast<double>(total);
  f.error_bound_ =
      FamilyErrorBound(num_states, num_actions, horizon, epsilon, beta, capacity);

  auto proto = PrivateCounter::Create(capacity, f.per_counter_epsilon_);
  if (!proto.ok()) return proto.status();
  const size_t sah = static_cast<size_t>(num_states) * num_actions * horizon;
  f.rewards_.assign(sah, *proto);
  f.visits_.assign(sah, *proto);
  f.transitions_.assign(sah * num_states, *proto);
  return f;
}

absl::Status CounterFamily::FeedEpisode(const Trajectory& trajectory, Rng& rng) {
  if (static_cast<int>(trajectory.steps.size()) != horizon_) {
    return absl::InvalidArgumentError("trajectory length differs from H");
  }
  if (episodes_ >= capacity_) {
    return absl::OutOfRangeError(
        StrCat("counter family capacity ", capacity_, " exceeded"));
  }
  const EpisodeSymbols sym =
      SymbolsForEpisode(num_states_, num_actions_, horizon_, trajectory);
  auto feed_all = [&rng](std::vector<PrivateCounter>& counters,
                         const std::vector<double>& symbols) -> absl::Status {
    for (size_t i = 0; i < counters.size(); ++i) {
      auto r = counters[i].Feed(symbols[i], rng);
      if (!r.ok()) return r.status();
    }
    return absl::OkStatus();
  };
  if (auto s = feed_all(rewards_, sym.rewards); !s.ok()) return s;
  if (auto s = feed_all(visits_, sym.visits); !s.ok()) return s;
  if (auto s = feed_all(transitions_, sym.transitions); !s.ok()) return s;
  ++episodes_;
  return absl::OkStatus();
}

CountSnapshot CounterFamily::Snapshot() const {
  CountSnapshot snap{QTable(num_states_, num_actions_, horizon_),
                     QTable(num_states_, num_actions_, horizon_),
                     TransitionTable(num_states_, num_actions_, horizon_)};
  for (int s = 0; s < num_states_; ++s) {
    for (int a = 0; a < num_actions_; ++a) {
      for (int h = 0; h < horizon_; ++h) {
        const size_t idx = SahIndex(s, a, h);
        snap.rewards.at(s, a, h) = rewards_[idx].release();
        snap.visits.at(s, a, h) = visits_[idx].release();
        for (int next = 0; next < num_states_; ++next) {
          snap.transitions.at(s, a, h, next) =
              transitions_[idx * num_states_ + next].release();
        }
      }
    }
  }
  return snap;
}

const PrivateCounter& CounterFamily::reward_counter(int s, int a, int h) const {
  return rewards_[SahIndex(s, a, h)];
}
const PrivateCounter& CounterFamily::visit_counter(int s, int a, int h) const {
  return visits_[SahIndex(s, a, h)];
}
const PrivateCounter& CounterFamily::transition_counter(int s, int a, int h,
                                                        int next) const {
  return transitions_[SahIndex(s, a, h) * num_states_ + next];
}

std::string PrivacyProbeReport::ToJson() const {
  json doc;
  doc["event_edges"] = event_edges;
  doc["counts_a"] = counts_a;
  doc["counts_b"] = counts_b;
  doc["prob_a"] = prob_a;
  doc["prob_b"] = prob_b;
  doc["estimate"] = std::isinf(estimate) ? json("inf") : json(estimate);
  doc["min_count"] = min_count;
  doc["slack"] = slack;
  doc["epsilon"] = EpsilonToJson(epsilon);
  doc["within_bound"] = within_bound();
  return doc.dump(1) + "\n";
}

namespace {

double FinalRelease(std::span<const double> stream, int64_t capacity,
                    double epsilon, Rng& rng) {
  auto counter = PrivateCounter::Create(capacity, epsilon);
  for (double v : stream) (void)counter->Feed(v, rng);
  return counter->release();
}

}  // namespace

absl::StatusOr<PrivacyProbeReport> EmpiricalPrivacyProbe(
    std::span<const double> stream_a, std::span<const double> stream_b,
    const PrivacyProbeOptions& options) {
  if (stream_a.size() != stream_b.size() || stream_a.empty()) {
    return absl::InvalidArgumentError("streams must be nonempty and equal length");
  }
  int differing = 0;
  for (size_t i = 0; i < stream_a.size(); ++i) {
    if (!(stream_a[i] >= 0.0 && stream_a[i] <= 1.0 && stream_b[i] >= 0.0 &&
          stream_b[i] <= 1.0)) {
      return absl::InvalidArgumentError("stream symbols must lie in [0,1]");
    }
    if (stream_a[i] != stream_b[i]) ++differing;
  }
  if (differing > 1) {
    return absl::InvalidArgumentError("streams differ in more than one symbol");
  }
  if (!(options.epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be > 0");
  }
  if (options.trials < 1) return absl::InvalidArgumentError("trials must be >= 1");

  const int64_t capacity = static_cast<int64_t>(stream_a.size());
  PrivacyProbeReport report;
  report.epsilon = options.epsilon;

  if (std::isinf(options.epsilon)) {
    Rng unused(0);
    const double a = FinalRelease(stream_a, capacity, kNoPrivacy, unused);
    const double b = FinalRelease(stream_b, capacity, kNoPrivacy, unused);
    report.event_edges = {std::min(a, b) + 0.5 * std::fabs(a - b)};
    const bool a_low = a <= report.event_edges[0];
    report.counts_a = {a_low ? options.trials : 0, a_low ? 0 : options.trials};
    const bool b_low = b <= report.event_edges[0];
    report.counts_b = {b_low ? options.trials : 0, b_low ? 0 : options.trials};
    if (a == b) {
      report.event_edges.clear();
      report.counts_a = {options.trials};
      report.counts_b = {options.trials};
    }
    for (size_t k = 0; k < report.counts_a.size(); ++k) {
      const double denom = static_cast<double>(options.trials) + report.counts_a.size();
      report.prob_a.push_back((report.counts_a[k] + 1) / denom);
      report.prob_b.push_back((report.counts_b[k] + 1) / denom);
    }
    report.estimate = a == b ? 0.0 : std::numeric_limits<double>::infinity();
    report.min_count = options.trials;
    report.slack = options.slack_multiplier * std::sqrt(1.0 / options.trials);
    return report;
  }

  std::vector<double> edges = options.event_edges;
  if (edges.empty()) {
    Rng pilot(DeriveSeed(options.seed, 2, StreamPurpose::kCounterNoise));
    const int64_t pilot_trials = std::min<int64_t>(options.trials, 20'000);
    std::vector<double> pooled;
    pooled.reserve(2 * pilot_trials);
    for (int64_t i = 0; i < pilot_trials; ++i) {
      pooled.push_back(FinalRelease(stream_a, capacity, options.epsilon, pilot));
      pooled.push_back(FinalRelease(stream_b, capacity, options.epsilon, pilot));
    }
    std::sort(pooled.begin(), pooled.end());
    for (int q = 1; q < 10; ++q) {
      edges.push_back(pooled[pooled.size() * q / 10]);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  report.event_edges = edges;

  const size_t events = edges.size() + 1;
  report.counts_a.assign(events, 0);
  report.counts_b.assign(events, 0);
  auto bucket = [&edges](double x) {
    return static_cast<size_t>(
        std::lower_bound(edges.begin(), edges.end(), x) - edges.begin());
  };
  Rng rng_a(DeriveSeed(options.seed, 0, StreamPurpose::kCounterNoise));
  Rng rng_b(DeriveSeed(options.seed, 1, StreamPurpose::kCounterNoise));
  for (int64_t i = 0; i < options.trials; ++i) {
    ++report.counts_a[bucket(FinalRelease(stream_a, capacity, options.epsilon, rng_a))];
    ++report.counts_b[bucket(FinalRelease(stream_b, capacity, options.epsilon, rng_b))];
  }

  const double denom = static_cast<double>(options.trials) + events;
  report.min_count = options.trials;
  for (size_t k = 0; k < events; ++k) {
    const double pa = (report.counts_a[k] + 1) / denom;
    const double pb = (report.counts_b[k] + 1) / denom;
    report.prob_a.push_back(pa);
    report.prob_b.push_back(pb);
    if (report.counts_a[k] == 0 && report.counts_b[k] == 0) continue;
    report.estimate = std::max(report.estimate, std::fabs(std::log(pa / pb)));
    report.min_count = std::min(
        report.min_count, std::min(report.counts_a[k], report.counts_b[k]));
  }
  report.slack = options.slack_multiplier *
                 std::sqrt(1.0 / std::max<int64_t>(report.min_count, 1));
  return report;
}

}  // namespace privrl
