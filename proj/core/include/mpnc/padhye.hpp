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

#include <span>
#include <string>

#include "mpnc/model.hpp"
#include "mpnc/trace.hpp"

namespace mpnc {

/// Arguments of the single-flow TCP Reno throughput model of Padhye et al.
struct PadhyeParams {
  double p = 0.01;     // loss probability; 0 means the window-saturated limit
  double rtt = 0.1;    // seconds
  double b = 2.0;      // packets acknowledged per ACK
  double t0 = 0.2;     // initial retransmission timeout, seconds
  double w_max = 12.0; // receiver window limit, packets

  void validate() const;
};

/// Steady-state send rate (packets/s) of one Reno flow: the full model with
/// timeouts and the w_max limitation. The result is capped at w_max / rtt,
/// which is also the value returned for p == 0.
///
/// The window-unlimited branch applies while the unconstrained mean window
///   E[W] = (2+b)/(3b) + sqrt(8(1-p)/(3bp) + ((2+b)/(3b))^2)
/// stays below w_max; otherwise the window-limited branch is used.
double padhye_throughput(const PadhyeParams& params);

/// Sum of per-path Reno throughputs under perfect scheduling. Optimistic:
/// no striping or reordering overhead is charged.
double mptcp_throughput(std::span<const PadhyeParams> paths);

/// A Reno sub-flow bound to a network label of a trace.
struct MptcpPath {
  std::string network;
  PadhyeParams params;
};

/// One sample per interval of an averaged trace (time = interval start).
/// Each path uses that interval's averaged loss; a path with loss >= 1 or
/// absent from the trace contributes 0 for the interval.
ThroughputSeries mptcp_series(const TraceSeries& averaged, std::span<const MptcpPath> paths);

}  // namespace mpnc
