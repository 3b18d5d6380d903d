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

#include "mpnc/nc_model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "mpnc/errors.hpp"

namespace mpnc {
namespace {

// Relative slack when testing (1-p) R >= 1, so that R = 1/(1-p) computed in
// floating point still counts as critical.
constexpr double kRegimeEps = 1e-12;

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

void check_alpha(std::int64_t alpha) {
  if (alpha < 1) throw InvalidInput(fmt::format("round multiple must be >= 1, got {}", alpha));
}

// Sum of windows over the first k clock rounds while no sub-flow round is
// saturated: alpha * sum_{c<m} (w1 + c) + rem * (w1 + m).
double unsaturated_sum(double w1, std::int64_t alpha, std::int64_t k) {
  const auto m = k / alpha;
  const auto rem = k % alpha;
  const auto md = static_cast<double>(m);
  return static_cast<double>(alpha) * (md * w1 + md * (md - 1.0) / 2.0) +
         static_cast<double>(rem) * (w1 + md);
}

}  // namespace

double growth_rate(double p, double redundancy) {
  if (!std::isfinite(p) || p < 0.0 || p >= 1.0)
    throw InvalidInput(fmt::format("loss probability {} outside [0, 1)", p));
  if (!std::isfinite(redundancy) || redundancy < 1.0)
    throw InvalidInput(fmt::format("redundancy must be >= 1, got {}", redundancy));
  return std::min(1.0, (1.0 - p) * redundancy);
}

double min_redundancy(double p) {
  if (!std::isfinite(p) || p < 0.0 || p >= 1.0)
    throw InvalidInput(fmt::format("no finite redundancy compensates loss probability {}", p));
  return 1.0 / (1.0 - p);
}

bool supercritical(const PathParams& path) {
  return (1.0 - path.p) * path.redundancy >= 1.0 - kRegimeEps;
}

double expected_window(const PathParams& path, std::int64_t alpha, std::int64_t i) {
  path.validate();
  check_alpha(alpha);
  if (i < 1) throw InvalidInput(fmt::format("round index must be >= 1, got {}", i));
  const double g = growth_rate(path.p, path.redundancy);
  const double gamma = path.w1 + static_cast<double>(ceil_div(i, alpha) - 1) * g;
  return std::min(path.w_max, gamma);
}

double round_throughput(const PathParams& path, std::int64_t alpha, double t_rnd, std::int64_t i) {
  if (!(t_rnd > 0.0)) throw InvalidInput("round duration must be positive");
  const double g = growth_rate(path.p, path.redundancy);
  return expected_window(path, alpha, i) * g / (static_cast<double>(alpha) * t_rnd);
}

double saturation_round(const PathParams& path, std::int64_t alpha) {
  return static_cast<double>(alpha) * (path.w_max - path.w1);
}

void NcModelInputs::validate() const {
  if (paths.empty()) throw InvalidInput("NC model needs at least one path");
  if (paths.size() != clock.size())
    throw InvalidInput(fmt::format("{} paths but the round clock has {} multipliers",
                                   paths.size(), clock.size()));
  if (k < 1) throw InvalidInput(fmt::format("number of rounds must be >= 1, got {}", k));
  for (const auto& path : paths) path.validate();
}

double e2e_path_throughput(const PathParams& path, std::int64_t alpha, double t_rnd,
                           std::int64_t k) {
  path.validate();
  check_alpha(alpha);
  if (!(t_rnd > 0.0)) throw InvalidInput("round duration must be positive");
  if (k < 1) throw InvalidInput(fmt::format("number of rounds must be >= 1, got {}", k));
  if (!supercritical(path))
    throw RegimeError(fmt::format("path '{}': R = {} is below 1/(1-p) = {}; the closed form does "
                                  "not cover this regime, use the simulator",
                                  path.path_id, path.redundancy, min_redundancy(path.p)),
                      0);

  const double a = static_cast<double>(alpha);
  const double kd = static_cast<double>(k);
  const double r = saturation_round(path, alpha);

  if (kd <= r) {
    if (k % alpha == 0) return (path.w1 + (kd + a) / (2.0 * a) - 1.0) / (a * t_rnd);
    return unsaturated_sum(path.w1, alpha, k) / (a * kd * t_rnd);
  }

  // Sub-flow rounds c = 1..u keep the window below w_max; all later ones
  // are saturated. u * alpha == r whenever w_max - w1 is an integer.
  const auto u = static_cast<std::int64_t>(std::ceil(path.w_max - path.w1));
  const auto unsaturated = u * alpha;
  if (k <= unsaturated) return unsaturated_sum(path.w1, alpha, k) / (a * kd * t_rnd);
  const double ud = static_cast<double>(unsaturated);
  const double rho = ud * path.w1 + ud * (ud + a - 2.0 * a) / (2.0 * a) +
                     path.w_max * static_cast<double>(k - unsaturated);
  return rho / (a * kd * t_rnd);
}

double e2e_throughput(const NcModelInputs& inputs) {
  inputs.validate();
  double total = 0.0;
  for (std::size_t j = 0; j < inputs.paths.size(); ++j) {
    try {
      total += e2e_path_throughput(inputs.paths[j], inputs.clock.alpha(j), inputs.clock.t_rnd(),
                                   inputs.k);
    } catch (const RegimeError& e) {
      throw RegimeError(e.what(), j);
    }
  }
  return total;
}

double e2e_throughput_relaxed(const NcModelInputs& inputs) {
  inputs.validate();
  const double t = inputs.clock.t_rnd();
  const double kd = static_cast<double>(inputs.k);
  double total = 0.0;
  for (std::size_t j = 0; j < inputs.paths.size(); ++j) {
    const auto& path = inputs.paths[j];
    if (!supercritical(path))
      throw RegimeError(fmt::format("path '{}' is sub-critical", path.path_id), j);
    const double a = static_cast<double>(inputs.clock.alpha(j));
    const double r = saturation_round(path, inputs.clock.alpha(j));
    if (kd <= r) {
      total += (path.w1 + (kd + 1.0) / (2.0 * a) - 1.0) / (a * t);
    } else {
      const double rho =
          r * path.w1 + r * (r + 1.0 - 2.0 * a) / (2.0 * a) + path.w_max * (kd - r);
      total += rho / (a * kd * t);
    }
  }
  return total;
}

double asymptotic_throughput(std::span<const PathParams> paths, const RoundClock& clock) {
  if (paths.size() != clock.size())
    throw InvalidInput("paths and round clock multipliers differ in length");
  double total = 0.0;
  for (std::size_t j = 0; j < paths.size(); ++j)
    total += paths[j].w_max / (static_cast<double>(clock.alpha(j)) * clock.t_rnd());
  return total;
}

double advance_window(WindowState& state, double growth, double w_max, std::int64_t alpha,
                      std::int64_t rounds) {
  check_alpha(alpha);
  if (rounds < 0) throw InvalidInput("cannot advance by a negative number of rounds");
  if (!(growth >= 0.0)) throw InvalidInput("window growth must be >= 0");
  double sum = 0.0;
  if (rounds == 0) return sum;

  auto next_subround = [&] {
    state.window = std::min(w_max, state.window + growth);
    state.phase = 0;
  };

  // Finish the sub-flow round in progress.
  if (state.phase > 0) {
    const auto first = std::min(rounds, alpha - state.phase);
    sum += static_cast<double>(first) * state.window;
    rounds -= first;
    state.phase += first;
    if (state.phase < alpha) return sum;
    next_subround();
  }

  const auto full = rounds / alpha;
  const auto rem = rounds % alpha;
  if (full > 0) {
    std::int64_t below = 0;  // sub-flow rounds whose window is still < w_max
    if (state.window < w_max) {
      below = growth > 0.0 ? static_cast<std::int64_t>(std::ceil((w_max - state.window) / growth))
                           : full;
    }
    const auto c = std::min(full, below);
    const double cd = static_cast<double>(c);
    const double a = static_cast<double>(alpha);
    sum += a * (cd * state.window + growth * cd * (cd - 1.0) / 2.0);
    sum += a * static_cast<double>(full - c) * w_max;
    state.window = std::min(w_max, state.window + static_cast<double>(full) * growth);
  }
  sum += static_cast<double>(rem) * state.window;
  state.phase = rem;
  return sum;
}

NcSeriesResult mptcpnc_series(const TraceSeries& averaged, std::span<const PathParams> paths,
                              const NcSeriesPolicy& policy) {
  if (!averaged.averaged()) throw InvalidInput("MPTCP/NC series needs an averaged trace");
  if (paths.empty()) throw InvalidInput("MPTCP/NC series needs at least one path");
  if (!(policy.redundancy_margin > 0.0) || !(policy.redundancy_floor >= 1.0))
    throw InvalidInput("redundancy margin must be positive and the floor >= 1");
  const auto bins = averaged.grid_size();
  if (bins == 0) throw InvalidInput("trace covers no averaging interval");
  for (const auto& path : paths) path.validate();

  std::vector<double> rtts;
  for (const auto& path : paths) rtts.push_back(path.rtt);
  NcSeriesResult result{ThroughputSeries("mptcpnc"), make_round_clock(rtts, policy.quantum), {}};
  const auto& clock = result.clock;
  const double t_rnd = clock.t_rnd();
  const double interval = averaged.interval();

  std::vector<WindowState> state;
  for (const auto& path : paths) state.push_back({path.w1, 0});

  std::int64_t round_end_prev = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    const auto round_end =
        static_cast<std::int64_t>(std::llround(static_cast<double>(b + 1) * interval / t_rnd));
    const auto n = round_end - round_end_prev;
    round_end_prev = round_end;

    double total = 0.0;
    for (std::size_t j = 0; j < paths.size(); ++j) {
      const auto rows = averaged.records(paths[j].path_id);
      if (b >= rows.size() || rows[b].loss_prob >= 1.0 || n <= 0) continue;
      const double p = rows[b].loss_prob;
      const double redundancy =
          std::max(policy.redundancy_margin * min_redundancy(p), policy.redundancy_floor);
      PathParams interval_path = paths[j];
      interval_path.p = p;
      interval_path.redundancy = redundancy;
      if (!supercritical(interval_path))
        result.subcritical.push_back({b, paths[j].path_id, p, redundancy});
      const double g = growth_rate(p, redundancy);
      const auto alpha = clock.alpha(j);
      const double window_sum = advance_window(state[j], g, paths[j].w_max, alpha, n);
      total += window_sum * g / (static_cast<double>(alpha) * t_rnd * static_cast<double>(n));
    }
    result.series.push(static_cast<double>(b) * interval, total);
  }
  return result;
}

}  // namespace mpnc
