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

#include <cmath>
#include <cstdint>
#include <random>

namespace mpnc {

/// All stochastic components draw from this engine. Values are taken from
/// its raw 64-bit output so a seed reproduces the same stream on every
/// standard library (std:: distributions are implementation-defined).
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 bits of precision.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Number of successes in n independent trials of probability q.
/// Inverts the CDF with one uniform draw; falls back to summing Bernoulli
/// trials when (1 - q)^n would underflow.
inline std::uint64_t binomial(Rng& rng, std::uint64_t n, double q) {
  if (q <= 0.0 || n == 0) return 0;
  if (q >= 1.0) return n;
  if (q > 0.5) return n - binomial(rng, n, 1.0 - q);
  const double log_q0 = static_cast<double>(n) * std::log1p(-q);
  if (log_q0 < -600.0) {
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < n; ++i) k += bernoulli(rng, q) ? 1 : 0;
    return k;
  }
  const double ratio = q / (1.0 - q);
  double pmf = std::exp(log_q0);
  double cdf = pmf;
  const double u = uniform01(rng);
  std::uint64_t k = 0;
  while (u >= cdf && k < n) {
    pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
    ++k;
    cdf += pmf;
  }
  return k;
}

/// floor(x) plus one with probability frac(x); preserves the mean of x.
inline std::uint64_t stochastic_round(Rng& rng, double x) {
  const double base = std::floor(x);
  const double frac = x - base;
  auto n = static_cast<std::uint64_t>(base);
  if (frac > 0.0 && bernoulli(rng, frac)) ++n;
  return n;
}

/// Uniform byte from the top bits of one engine draw.
inline std::uint8_t uniform_byte(Rng& rng) {
  return static_cast<std::uint8_t>(rng() >> 56);
}

}  // namespace mpnc
