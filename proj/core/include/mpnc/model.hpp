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

namespace mpnc {

/// Model inputs for one sub-flow.
struct PathParams {
  std::string path_id;
  double p = 0.0;           // per-packet loss probability, [0, 1)
  double rtt = 0.1;         // seconds
  double redundancy = 1.0;  // coded packets sent per degree of freedom
  double w_max = 12.0;      // packets
  double w1 = 1.0;          // expected initial window, packets

  /// Throws InvalidInput unless 0 <= p < 1, rtt > 0, R >= 1 and
  /// w_max >= w1 >= 1.
  void validate() const;
};

/// Common round duration for a set of sub-flows and the per-flow multiple
/// alpha_j = RTT_j / t_rnd. RTTs are quantized to integer multiples of a
/// quantum so the GCD is well defined.
class RoundClock {
 public:
  RoundClock(double quantum, std::int64_t t_rnd_quanta,
             std::vector<std::int64_t> alphas);

  double quantum() const noexcept { return quantum_; }
  std::int64_t t_rnd_quanta() const noexcept { return t_rnd_quanta_; }
  double t_rnd() const noexcept { return quantum_ * static_cast<double>(t_rnd_quanta_); }
  std::span<const std::int64_t> alphas() const noexcept { return alphas_; }
  std::int64_t alpha(std::size_t j) const { return alphas_.at(j); }
  std::size_t size() const noexcept { return alphas_.size(); }

 private:
  double quantum_;
  std::int64_t t_rnd_quanta_;
  std::vector<std::int64_t> alphas_;
};

/// Default RTT quantum: 1 ms.
inline constexpr double kDefaultQuantum = 1e-3;

/// Nearest integer number of quanta, never less than one.
std::int64_t quantize_rtt(double rtt, double quantum);

RoundClock make_round_clock(std::span<const double> rtts,
                            double quantum = kDefaultQuantum);

/// Exact integer ratio of a (quantized) RTT to the clock's round duration.
/// Throws InconsistencyError when the RTT is not a multiple of t_rnd.
std::int64_t alpha_of(double rtt, const RoundClock& clock);

struct ThroughputSample {
  double time;        // seconds
  double throughput;  // packets / second
};

/// Ordered (time, throughput) samples for one protocol.
class ThroughputSeries {
 public:
  explicit ThroughputSeries(std::string protocol) : protocol_(std::move(protocol)) {}

  /// Appends a sample; time must exceed the previous one and throughput
  /// must be finite and non-negative.
  void push(double time, double throughput);

  const std::string& protocol() const noexcept { return protocol_; }
  std::span<const ThroughputSample> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const ThroughputSample& operator[](std::size_t i) const { return samples_[i]; }

  double mean() const;

 private:
  std::string protocol_;
  std::vector<ThroughputSample> samples_;
};

}  // namespace mpnc
