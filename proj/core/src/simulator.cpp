/*
 * Copyright 2026 The mpnc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mpnc/simulator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "mpnc/errors.hpp"

namespace mpnc {
namespace {

double credited_acks(Rng& rng, double window, double redundancy, double p,
                     std::uint64_t* sent_out = nullptr, std::uint64_t* arrivals_out = nullptr) {
  const auto sent = stochastic_round(rng, window * redundancy);
  const auto arrivals = binomial(rng, sent, 1.0 - p);
  if (sent_out) *sent_out = sent;
  if (arrivals_out) *arrivals_out = arrivals;
  return std::min(window, static_cast<double>(arrivals));
}

// Index of the first lost packet among n, or n when none is lost.
std::uint64_t first_loss(Rng& rng, std::uint64_t n, double p) {
  for (std::uint64_t i = 0; i < n; ++i)
    if (bernoulli(rng, p)) return i;
  return n;
}

// Path validation that also admits p == 1 (total outage).
void validate_with_outage(const PathParams& path) {
  if (path.p == 1.0) {
    PathParams copy = path;
    copy.p = 0.0;
    copy.validate();
    return;
  }
  path.validate();
}

}  // namespace

SubflowState step_subflow(const SubflowState& state, const PathParams& path, Rng& rng,
                          std::optional<double> loss) {
  const double p = loss.value_or(path.p);
  SubflowState next = state;
  next.acks = credited_acks(rng, state.window, path.redundancy, p, &next.sent, &next.arrivals);
  next.window = std::min(path.w_max, state.window + next.acks / state.window);
  next.delivered += next.acks;
  ++next.round;
  return next;
}

void SimConfig::validate() const {
  if (paths.empty()) throw InvalidInput("simulation needs at least one path");
  if (paths.size() != clock.size())
    throw InvalidInput(fmt::format("{} paths but the round clock has {} multipliers",
                                   paths.size(), clock.size()));
  if (rounds < 1) throw InvalidInput("simulation needs at least one round");
  for (const auto& path : paths) path.validate();
}

SimResult simulate_mptcpnc(const SimConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const auto n = config.paths.size();
  const double t_rnd = config.clock.t_rnd();

  SimResult result;
  result.windows.assign(n, {});
  result.timeouts.assign(n, 0);
  for (auto& w : result.windows) w.reserve(static_cast<std::size_t>(config.rounds));

  std::vector<SubflowState> state;
  std::vector<double> rate(n, 0.0);              // contribution while the round lasts
  std::vector<double> window_in_effect(n, 0.0);
  std::vector<std::optional<std::pair<double, double>>> previous(n);  // (a, W) of last round
  for (const auto& path : config.paths) state.push_back(SubflowState::initial(path));

  for (std::int64_t i = 1; i <= config.rounds; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& path = config.paths[j];
      const auto alpha = config.clock.alpha(j);
      if ((i - 1) % alpha == 0) {
        std::optional<double> loss;
        PathParams round_path = path;
        if (config.channel) {
          const auto ch = config.channel(j, i);
          loss = ch.p;
          if (ch.redundancy) round_path.redundancy = *ch.redundancy;
        }
        window_in_effect[j] = state[j].window;
        const double w_before = state[j].window;
        state[j] = step_subflow(state[j], round_path, rng, loss);
        rate[j] = state[j].acks / (static_cast<double>(alpha) * t_rnd);
        if (config.model_timeouts) {
          if (previous[j] && previous[j]->first + state[j].acks < previous[j]->second) {
            state[j].window = path.w1;
            ++result.timeouts[j];
            previous[j].reset();
          } else {
            previous[j] = std::make_pair(state[j].acks, w_before);
          }
        }
      }
      result.windows[j].push_back(window_in_effect[j]);
      total += rate[j];
    }
    result.throughput.push(static_cast<double>(i) * t_rnd, total);
  }
  return result;
}

std::vector<double> mean_window_trajectory(const PathParams& path, std::int64_t rounds,
                                           std::int64_t trials, std::uint64_t seed) {
  path.validate();
  if (rounds < 1 || trials < 1) throw InvalidInput("need at least one round and one trial");
  std::vector<double> sum(static_cast<std::size_t>(rounds), 0.0);
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));
    auto state = SubflowState::initial(path);
    for (std::int64_t i = 0; i < rounds; ++i) {
      sum[static_cast<std::size_t>(i)] += state.window;
      state = step_subflow(state, path, rng);
    }
  }
  for (auto& v : sum) v /= static_cast<double>(trials);
  return sum;
}

double estimate_timeout_prob(const PathParams& path, double window, std::int64_t trials, Rng& rng) {
  validate_with_outage(path);
  if (trials < 1) throw InvalidInput("need at least one trial");
  if (!(window >= 1.0)) throw InvalidInput("window must be >= 1");
  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const double a1 = credited_acks(rng, window, path.redundancy, path.p);
    const double a2 = credited_acks(rng, window, path.redundancy, path.p);
    if (a1 + a2 < window) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double simulate_tcp_reno(const PadhyeParams& params, double duration, Rng& rng) {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw InvalidInput("simulated duration must be finite and positive");
  // Nothing is ever delivered on a dead path.
  if (params.p == 1.0) {
    PadhyeParams copy = params;
    copy.p = 0.0;
    copy.validate();
    return 0.0;
  }
  params.validate();
  const double p = params.p;

  double window = 1.0;
  double t = 0.0;
  double sent = 0.0;
  while (t < duration) {
    const auto w = std::max<std::uint64_t>(1, stochastic_round(rng, std::min(window, params.w_max)));
    const auto acked = first_loss(rng, w, p);
    sent += static_cast<double>(w);
    t += params.rtt;
    if (acked == w) {
      window = std::min(params.w_max, window + 1.0 / params.b);
      continue;
    }
    // The packets acknowledged before the loss clock out one more round;
    // its in-sequence arrivals are the duplicate ACKs.
    if (acked >= 3) {
      const auto dups = first_loss(rng, acked, p);
      sent += static_cast<double>(acked);
      t += params.rtt;
      if (dups >= 3) {
        window = std::max(1.0, window / 2.0);
        continue;
      }
    }
    double rto = params.t0;
    while (true) {
      t += rto;
      sent += 1.0;
      if (!bernoulli(rng, p) || t >= duration) break;
      rto = std::min(2.0 * rto, 64.0 * params.t0);
    }
    window = 1.0;
  }
  return sent / t;
}

}  // namespace mpnc
