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

#include "mpnc/model.hpp"

#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "mpnc/errors.hpp"

namespace mpnc {

void PathParams::validate() const {
  if (!std::isfinite(p) || p < 0.0 || p >= 1.0)
    throw InvalidInput(fmt::format("path '{}': loss probability {} outside [0, 1)", path_id, p));
  if (!std::isfinite(rtt) || rtt <= 0.0)
    throw InvalidInput(fmt::format("path '{}': rtt must be positive, got {}", path_id, rtt));
  if (!std::isfinite(redundancy) || redundancy < 1.0)
    throw InvalidInput(fmt::format("path '{}': redundancy must be >= 1, got {}", path_id, redundancy));
  if (!std::isfinite(w1) || w1 < 1.0)
    throw InvalidInput(fmt::format("path '{}': initial window must be >= 1, got {}", path_id, w1));
  if (!std::isfinite(w_max) || w_max < w1)
    throw InvalidInput(fmt::format("path '{}': w_max {} below initial window {}", path_id, w_max, w1));
}

RoundClock::RoundClock(double quantum, std::int64_t t_rnd_quanta,
                       std::vector<std::int64_t> alphas)
    : quantum_(quantum), t_rnd_quanta_(t_rnd_quanta), alphas_(std::move(alphas)) {
  if (!(quantum_ > 0.0) || t_rnd_quanta_ < 1)
    throw InvalidInput("round clock needs a positive quantum and round length");
  for (auto a : alphas_)
    if (a < 1) throw InvalidInput("round clock multipliers must be positive");
}

std::int64_t quantize_rtt(double rtt, double quantum) {
  if (!std::isfinite(rtt) || rtt <= 0.0)
    throw InvalidInput(fmt::format("rtt must be finite and positive, got {}", rtt));
  if (!std::isfinite(quantum) || quantum <= 0.0)
    throw InvalidInput(fmt::format("quantum must be finite and positive, got {}", quantum));
  const auto q = std::llround(rtt / quantum);
  return q < 1 ? 1 : static_cast<std::int64_t>(q);
}

RoundClock make_round_clock(std::span<const double> rtts, double quantum) {
  if (rtts.empty()) throw InvalidInput("round clock needs at least one rtt");
  std::vector<std::int64_t> quanta;
  quanta.reserve(rtts.size());
  for (double rtt : rtts) quanta.push_back(quantize_rtt(rtt, quantum));

  std::int64_t g = 0;
  for (auto q : quanta) g = std::gcd(g, q);

  std::vector<std::int64_t> alphas;
  alphas.reserve(quanta.size());
  for (auto q : quanta) alphas.push_back(q / g);
  return RoundClock(quantum, g, std::move(alphas));
}

std::int64_t alpha_of(double rtt, const RoundClock& clock) {
  const auto q = quantize_rtt(rtt, clock.quantum());
  if (q % clock.t_rnd_quanta() != 0)
    throw InconsistencyError(fmt::format(
        "rtt {} s ({} quanta) is not a multiple of the round length ({} quanta)", rtt, q,
        clock.t_rnd_quanta()));
  return q / clock.t_rnd_quanta();
}

void ThroughputSeries::push(double time, double throughput) {
  if (!std::isfinite(time) || (!samples_.empty() && time <= samples_.back().time))
    throw InvalidInput(fmt::format("{} series: sample times must strictly increase", protocol_));
  if (!std::isfinite(throughput) || throughput < 0.0)
    throw InvalidInput(fmt::format("{} series: throughput {} is not a non-negative number",
                                   protocol_, throughput));
  samples_.push_back({time, throughput});
}

double ThroughputSeries::mean() const {
  if (samples_.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : samples_) sum += s.throughput;
  return sum / static_cast<double>(samples_.size());
}

}  // namespace mpnc
