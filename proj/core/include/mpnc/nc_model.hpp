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
#include <span>
#include <string>
#include <vector>

#include "mpnc/model.hpp"
#include "mpnc/trace.hpp"

namespace mpnc {

// Mean-field model of coded sub-flows. A sub-flow with round multiple alpha
// keeps its window for alpha consecutive rounds of the shared clock; its
// expected window in round i is
//   gamma_i = min(w_max, w1 + (ceil(i / alpha) - 1) * min(1, (1 - p) R))
// and it delivers gamma_i * min(1, (1 - p) R) / (alpha * t_rnd) packets/s.

/// Expected per-round window increment min(1, (1-p) R).
double growth_rate(double p, double redundancy);

/// Smallest redundancy that replaces every lost packet on average, 1/(1-p).
double min_redundancy(double p);

/// True when (1-p) R >= 1, i.e. the window grows one packet per sub-flow
/// round and every delivered packet carries a new degree of freedom.
bool supercritical(const PathParams& path);

/// gamma_i for round i >= 1, clamped to w_max.
double expected_window(const PathParams& path, std::int64_t alpha, std::int64_t i);

/// Delivered degrees of freedom per second during round i.
double round_throughput(const PathParams& path, std::int64_t alpha, double t_rnd, std::int64_t i);

/// r = alpha (w_max - w1): the last round before the window saturates.
double saturation_round(const PathParams& path, std::int64_t alpha);

struct NcModelInputs {
  std::vector<PathParams> paths;
  RoundClock clock;
  std::int64_t k = 1;

  void validate() const;
};

/// Average delivered rate of one sub-flow over rounds 1..k, in closed form:
///   k <= r : (w1 + (k + alpha) / (2 alpha) - 1) / (alpha t_rnd)
///   k >  r : rho(k) / (alpha k t_rnd),
///            rho(k) = r w1 + r (r + alpha - 2 alpha) / (2 alpha) + w_max (k - r)
/// The formulas are exact sums over ceil(i/alpha) for alpha | k; when
/// alpha does not divide k the partial last sub-round is added exactly.
/// Throws RegimeError unless (1-p) R >= 1.
double e2e_path_throughput(const PathParams& path, std::int64_t alpha, double t_rnd,
                           std::int64_t k);

/// Sum of e2e_path_throughput over all paths, in packets per second.
double e2e_throughput(const NcModelInputs& inputs);

/// The same average with ceil(i/alpha) relaxed to i/alpha (exact for
/// alpha == 1, a slight under-estimate otherwise). Used for comparison.
double e2e_throughput_relaxed(const NcModelInputs& inputs);

/// Limit of e2e_throughput as k grows: sum of w_max / (alpha t_rnd).
double asymptotic_throughput(std::span<const PathParams> paths, const RoundClock& clock);

/// Window position of one sub-flow on the shared clock: the window of the
/// current sub-flow round and how many clock rounds of it have elapsed.
struct WindowState {
  double window = 1.0;
  std::int64_t phase = 0;
};

/// Advances a sub-flow by `rounds` clock rounds with window increment
/// `growth` per sub-flow round and returns the sum of the (clamped)
/// windows over those rounds. O(1) in `rounds`.
double advance_window(WindowState& state, double growth, double w_max, std::int64_t alpha,
                      std::int64_t rounds);

struct NcSeriesPolicy {
  double quantum = kDefaultQuantum;
  double redundancy_margin = 1.25;  // R = margin / (1 - p)
  double redundancy_floor = 1.0;
};

/// A path evaluated outside the closed form's regime in one interval.
struct RegimeNote {
  std::size_t interval;
  std::string path_id;
  double loss;
  double redundancy;
};

struct NcSeriesResult {
  ThroughputSeries series{"mptcpnc"};
  RoundClock clock;
  std::vector<RegimeNote> subcritical;
};

/// One sample per interval of an averaged trace. Paths are matched to trace
/// networks by path_id; each path's RTT, w_max and w1 come from `paths`
/// while p and R are set per interval (R = max(margin/(1-p), floor)).
/// Windows carry over between intervals. A path in outage (loss 1 or absent)
/// contributes 0 and its window freezes. Sub-critical intervals are listed
/// in `subcritical` and evaluated with the general growth rate.
NcSeriesResult mptcpnc_series(const TraceSeries& averaged, std::span<const PathParams> paths,
                              const NcSeriesPolicy& policy = {});

}  // namespace mpnc
