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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mpnc/model.hpp"
#include "mpnc/padhye.hpp"
#include "mpnc/random.hpp"

namespace mpnc {

/// Stochastic state of one coded sub-flow.
struct SubflowState {
  double window = 1.0;         // congestion window W, packets, >= 1
  std::int64_t round = 0;      // sub-flow rounds completed
  double delivered = 0.0;      // cumulative delivered degrees of freedom
  std::uint64_t sent = 0;      // coded packets sent in the last round
  std::uint64_t arrivals = 0;  // coded packets received in the last round
  double acks = 0.0;           // arrivals credited in the last round, <= window

  static SubflowState initial(const PathParams& path) { return {path.w1, 0, 0.0, 0, 0, 0.0}; }
};

/// One sub-flow round: round(W R) coded packets (fractional part rounded
/// stochastically), each lost i.i.d. with probability p. Arrivals beyond
/// the window carry no new degree of freedom, so the credited ACK count is
/// a = min(W, arrivals); the window becomes min(w_max, W + a / W).
/// `loss` overrides path.p when given.
SubflowState step_subflow(const SubflowState& state, const PathParams& path, Rng& rng,
                          std::optional<double> loss = std::nullopt);

/// Channel seen by one sub-flow round. A missing redundancy keeps the
/// path's configured value.
struct ChannelState {
  double p = 0.0;
  std::optional<double> redundancy;
};

/// Channel for `path` (index) in clock round `round` (1-based). Lets a
/// trace drive the loss process; p == 1 models an outage.
using ChannelSchedule = std::function<ChannelState(std::size_t path, std::int64_t round)>;

struct SimConfig {
  std::vector<PathParams> paths;
  RoundClock clock{kDefaultQuantum, 1, {}};
  std::int64_t rounds = 100;
  std::uint64_t seed = 1;
  /// Reset W to w1 whenever a_i + a_{i+1} < W_i.
  bool model_timeouts = false;
  ChannelSchedule channel;  // empty: i.i.d. Bernoulli(path.p) every round

  void validate() const;
};

struct SimResult {
  /// Aggregate delivered-DOF rate per clock round (time = i * t_rnd).
  ThroughputSeries throughput{"mptcpnc-sim"};
  /// windows[j][i-1]: window of path j in effect during clock round i.
  std::vector<std::vector<double>> windows;
  std::vector<std::int64_t> timeouts;
};

/// Runs `rounds` clock rounds. Sub-flow j starts a new round of its own at
/// clock rounds 1, 1 + alpha_j, 1 + 2 alpha_j, ...; what it delivers then is
/// spread over its alpha_j clock rounds. Identical configs give identical
/// results.
SimResult simulate_mptcpnc(const SimConfig& config);

/// Mean window over `trials` independent runs of a single sub-flow with
/// alpha = 1, for clock rounds 1..rounds. Trial t uses seed + t.
std::vector<double> mean_window_trajectory(const PathParams& path, std::int64_t rounds,
                                           std::int64_t trials, std::uint64_t seed);

/// Monte Carlo estimate of Pr(a_i + a_{i+1} < W) for two consecutive
/// rounds at fixed window W.
double estimate_timeout_prob(const PathParams& path, double window, std::int64_t trials, Rng& rng);

/// Round-based TCP Reno with the loss-indication conventions of the Padhye
/// model: after the first loss in a round the rest of that round is lost;
/// a triple duplicate ACK halves the window, otherwise a timeout sequence
/// with exponential back-off (capped at 64 T0) resets it to one packet.
/// The window grows by 1/b per loss-free round. Returns packets sent per
/// second over `duration` simulated seconds.
double simulate_tcp_reno(const PadhyeParams& params, double duration, Rng& rng);

}  // namespace mpnc
