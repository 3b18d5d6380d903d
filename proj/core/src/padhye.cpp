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

#include "mpnc/padhye.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/core.h>

#include "mpnc/errors.hpp"

namespace mpnc {
namespace {

// Probability that a loss in a window of w packets is detected by timeout.
// Fewer than three duplicate ACKs are possible for w <= 3.
double timeout_fraction(double p, double w) {
  if (w <= 3.0) return 1.0;
  const double q = 1.0 - p;
  const double q3 = q * q * q;
  const double num = (1.0 - q3) * (1.0 + q3 * (1.0 - std::pow(q, w - 3.0)));
  const double den = 1.0 - std::pow(q, w);
  return std::min(1.0, num / den);
}

// Expected timeout-sequence length factor for exponential back-off capped
// at 64 * T0.
double backoff_factor(double p) {
  return 1.0 + p + 2.0 * std::pow(p, 2) + 4.0 * std::pow(p, 3) + 8.0 * std::pow(p, 4) +
         16.0 * std::pow(p, 5) + 32.0 * std::pow(p, 6);
}

}  // namespace

void PadhyeParams::validate() const {
  if (!std::isfinite(p) || p < 0.0 || p >= 1.0)
    throw InvalidInput(fmt::format("Reno model: loss probability {} outside [0, 1)", p));
  if (!std::isfinite(rtt) || rtt <= 0.0)
    throw InvalidInput(fmt::format("Reno model: rtt must be positive, got {}", rtt));
  if (!std::isfinite(t0) || t0 <= 0.0)
    throw InvalidInput(fmt::format("Reno model: t0 must be positive, got {}", t0));
  if (!std::isfinite(b) || b < 1.0)
    throw InvalidInput(fmt::format("Reno model: b must be >= 1, got {}", b));
  if (!std::isfinite(w_max) || w_max < 1.0)
    throw InvalidInput(fmt::format("Reno model: w_max must be >= 1, got {}", w_max));
}

double padhye_throughput(const PadhyeParams& params) {
  params.validate();
  const double cap = params.w_max / params.rtt;
  const double p = params.p;
  if (p == 0.0) return cap;

  const double b = params.b;
  const double q = 1.0 - p;
  const double c = (2.0 + b) / (3.0 * b);
  const double mean_window = c + std::sqrt(8.0 * q / (3.0 * b * p) + c * c);
  const double f = backoff_factor(p);

  double rate = 0.0;
  if (mean_window < params.w_max) {
    const double qw = timeout_fraction(p, mean_window);
    rate = (q / p + mean_window + qw / q) /
           (params.rtt * (b / 2.0 * mean_window + 1.0) + qw * params.t0 * f / q);
  } else {
    const double w = params.w_max;
    const double qw = timeout_fraction(p, w);
    rate = (q / p + w + qw / q) /
           (params.rtt * (b / 8.0 * w + q / (p * w) + 2.0) + qw * params.t0 * f / q);
  }
  return std::min(rate, cap);
}

double mptcp_throughput(std::span<const PadhyeParams> paths) {
  if (paths.empty()) throw InvalidInput("MPTCP throughput needs at least one path");
  double total = 0.0;
  for (const auto& path : paths) total += padhye_throughput(path);
  return total;
}

ThroughputSeries mptcp_series(const TraceSeries& averaged, std::span<const MptcpPath> paths) {
  if (!averaged.averaged()) throw InvalidInput("MPTCP series needs an averaged trace");
  if (paths.empty()) throw InvalidInput("MPTCP series needs at least one path");
  const auto bins = averaged.grid_size();
  if (bins == 0) throw InvalidInput("trace covers no averaging interval");
  for (const auto& path : paths) path.params.validate();

  ThroughputSeries series("mptcp");
  for (std::size_t b = 0; b < bins; ++b) {
    double total = 0.0;
    for (const auto& path : paths) {
      const auto rows = averaged.records(path.network);
      if (b >= rows.size()) continue;
      const double loss = rows[b].loss_prob;
      if (loss >= 1.0) continue;
      PadhyeParams interval = path.params;
      interval.p = loss;
      total += padhye_throughput(interval);
    }
    series.push(static_cast<double>(b) * averaged.interval(), total);
  }
  return series;
}

}  // namespace mpnc
