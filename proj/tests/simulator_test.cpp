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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "mpnc/errors.hpp"
#include "mpnc/nc_model.hpp"
#include "mpnc/padhye.hpp"
#include "mpnc/simulator.hpp"

namespace mpnc {
namespace {

PathParams path(double p, double R, double w_max = 12.0, double w1 = 1.0) {
  PathParams x;
  x.path_id = "x";
  x.p = p;
  x.redundancy = R;
  x.w_max = w_max;
  x.w1 = w1;
  return x;
}

double binomial_cdf(int n, double q, int k) {
  double sum = 0.0;
  for (int i = 0; i <= k; ++i)
    sum += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0)) *
           std::pow(q, i) * std::pow(1 - q, n - i);
  return sum;
}

TEST(StepSubflow, LosslessRound) {
  Rng rng(1);
  auto s = SubflowState::initial(path(0.0, 1.0, 100.0));
  s.window = 4.0;
  const auto next = step_subflow(s, path(0.0, 1.0, 100.0), rng);
  EXPECT_EQ(next.acks, 4.0);
  EXPECT_EQ(next.window, 5.0);
  EXPECT_EQ(next.delivered, 4.0);
  EXPECT_EQ(next.round, 1);
}

TEST(StepSubflow, TotalLoss) {
  Rng rng(1);
  auto s = SubflowState::initial(path(0.0, 3.0));
  s.window = 6.0;
  const auto next = step_subflow(s, path(0.0, 3.0), rng, 1.0);
  EXPECT_EQ(next.acks, 0.0);
  EXPECT_EQ(next.window, 6.0);
  EXPECT_EQ(next.delivered, 0.0);
  EXPECT_EQ(next.sent, 18u);
}

TEST(StepSubflow, CappedArrivalsGrowByOne) {
  Rng rng(2);
  const auto x = path(0.2, 2.0, 100.0);
  auto s = SubflowState::initial(x);
  s.window = 10.0;
  double acks = 0.0;
  double growth = 0.0;
  constexpr int kReps = 100000;
  for (int r = 0; r < kReps; ++r) {
    const auto next = step_subflow(s, x, rng);
    acks += next.acks;
    growth += next.window - s.window;
    ASSERT_LE(next.acks, s.window);
    ASSERT_LE(next.acks, static_cast<double>(next.arrivals));
  }
  EXPECT_NEAR(acks / kReps, 10.0, 0.2);
  EXPECT_NEAR(growth / kReps, growth_rate(0.2, 2.0), 0.02);
}

TEST(StepSubflow, WindowNeverDropsBelowOne) {
  Rng rng(3);
  const auto x = path(0.6, 1.1, 8.0);
  auto s = SubflowState::initial(x);
  for (int r = 0; r < 10000; ++r) {
    s = step_subflow(s, x, rng);
    ASSERT_GE(s.window, 1.0);
    ASSERT_LE(s.window, 8.0);
  }
}

TEST(Simulate, LosslessTrajectoryIsDeterministicLine) {
  SimConfig cfg;
  cfg.paths = {path(0.0, 1.0, 12.0), path(0.0, 1.0, 12.0, 2.0)};
  cfg.clock = RoundClock(0.01, 3, {1, 3});
  cfg.rounds = 60;
  const auto res = simulate_mptcpnc(cfg);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::int64_t i = 1; i <= cfg.rounds; ++i)
      EXPECT_DOUBLE_EQ(res.windows[j][static_cast<std::size_t>(i - 1)],
                       expected_window(cfg.paths[j], cfg.clock.alpha(j), i));
}

TEST(Simulate, SameSeedSameOutput) {
  SimConfig cfg;
  cfg.paths = {path(0.3, 2.0), path(0.1, 1.5)};
  cfg.clock = RoundClock(0.001, 87, {19, 7});
  cfg.rounds = 500;
  cfg.seed = 77;
  cfg.model_timeouts = true;
  const auto a = simulate_mptcpnc(cfg);
  const auto b = simulate_mptcpnc(cfg);
  ASSERT_EQ(a.throughput.size(), b.throughput.size());
  for (std::size_t i = 0; i < a.throughput.size(); ++i)
    EXPECT_EQ(a.throughput[i].throughput, b.throughput[i].throughput);
  EXPECT_EQ(a.windows, b.windows);
  EXPECT_EQ(a.timeouts, b.timeouts);
  cfg.seed = 78;
  EXPECT_NE(simulate_mptcpnc(cfg).windows, a.windows);
}

TEST(Simulate, ThroughputBoundedByWindowLimit) {
  SimConfig cfg;
  cfg.paths = {path(0.05, 3.0, 12.0), path(0.2, 2.0, 5.5), path(0.0, 1.0, 3.0)};
  cfg.clock = RoundClock(0.002, 1, {1, 2, 5});
  cfg.rounds = 2000;
  const auto res = simulate_mptcpnc(cfg);
  double bound = 0.0;
  for (std::size_t j = 0; j < 3; ++j)
    bound += cfg.paths[j].w_max / (static_cast<double>(cfg.clock.alpha(j)) * cfg.clock.t_rnd());
  for (const auto& s : res.throughput.samples()) EXPECT_LE(s.throughput, bound * (1 + 1e-12));
}

TEST(Simulate, MeanThroughputTracksMeanFieldOnceRampSettles) {
  const auto x = path(0.3, 2.0);
  SimConfig cfg;
  cfg.paths = {x};
  cfg.clock = RoundClock(0.1, 1, {1});
  cfg.rounds = 40;
  std::vector<double> mean(40, 0.0);
  constexpr int kTrials = 1000;
  for (int t = 0; t < kTrials; ++t) {
    cfg.seed = static_cast<std::uint64_t>(t);
    const auto res = simulate_mptcpnc(cfg);
    for (std::size_t i = 0; i < 40; ++i) mean[i] += res.throughput[i].throughput / kTrials;
  }
  // Round 1: one packet in flight, two sent; credited iff either arrives.
  EXPECT_NEAR(mean[0] * 0.1, 1.0 - 0.3 * 0.3, 0.03);
  // The capped arrivals lag the mean-field line by more than 5% for the
  // first few rounds; from round 6 on they are within it.
  for (std::int64_t i = 6; i <= 40; ++i) {
    const double mf = round_throughput(x, 1, 0.1, i);
    EXPECT_NEAR(mean[static_cast<std::size_t>(i - 1)], mf, 0.05 * mf) << "round " << i;
  }
}

TEST(Simulate, SubcriticalWindowMatchesExactEnumeration) {
  // p = 0.5, R = 1.5, alpha = 2: one sub-flow round before clock round 4.
  // Sends 1 or 2 packets with probability 1/2 each; the single credited ACK
  // arrives with probability 1/2 * 1/2 + 1/2 * 3/4 = 5/8, so E[W] = 1.625.
  SimConfig cfg;
  cfg.paths = {path(0.5, 1.5)};
  cfg.clock = RoundClock(0.1, 1, {2});
  cfg.rounds = 4;
  double sum = 0.0;
  constexpr int kTrials = 40000;
  for (int t = 0; t < kTrials; ++t) {
    cfg.seed = static_cast<std::uint64_t>(t) + 1;
    sum += simulate_mptcpnc(cfg).windows[0][3];
  }
  EXPECT_NEAR(sum / kTrials, 1.625, 0.01);
}

TEST(Simulate, ChannelScheduleOverridesLoss) {
  SimConfig cfg;
  cfg.paths = {path(0.0, 1.0)};
  cfg.clock = RoundClock(0.1, 1, {1});
  cfg.rounds = 10;
  cfg.channel = [](std::size_t, std::int64_t round) {
    return ChannelState{round <= 5 ? 1.0 : 0.0, std::nullopt};
  };
  const auto res = simulate_mptcpnc(cfg);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(res.throughput[i].throughput, 0.0);
  EXPECT_EQ(res.windows[0][5], 1.0);
  EXPECT_EQ(res.windows[0][9], 5.0);
}

TEST(Simulate, InvalidConfigurations) {
  SimConfig cfg;
  cfg.clock = RoundClock(0.1, 1, {1});
  EXPECT_THROW(simulate_mptcpnc(cfg), InvalidInput);
  cfg.paths = {path(0.1, 2.0), path(0.1, 2.0)};
  EXPECT_THROW(simulate_mptcpnc(cfg), InvalidInput);
  cfg.paths = {path(0.1, 2.0)};
  cfg.rounds = 0;
  EXPECT_THROW(simulate_mptcpnc(cfg), InvalidInput);
}

TEST(TimeoutProb, Extremes) {
  Rng rng(5);
  EXPECT_EQ(estimate_timeout_prob(path(0.0, 1.0), 10.0, 1000, rng), 0.0);
  EXPECT_EQ(estimate_timeout_prob(path(1.0, 1.0), 10.0, 1000, rng), 1.0);
  EXPECT_THROW(estimate_timeout_prob(path(0.1, 1.0), 0.5, 10, rng), InvalidInput);
  EXPECT_THROW(estimate_timeout_prob(path(0.1, 1.0), 2.0, 0, rng), InvalidInput);
}

TEST(TimeoutProb, MatchesBinomialCdf) {
  Rng rng(6);
  const double exact = binomial_cdf(20, 0.5, 9);
  EXPECT_NEAR(exact, 0.4119, 1e-4);
  EXPECT_NEAR(estimate_timeout_prob(path(0.5, 1.0), 10.0, 100000, rng), exact, 0.01);
}

TEST(Timeouts, FrequencyBoundedByEarlyWindowEstimate) {
  for (double p : {0.1, 0.3, 0.5}) {
    const auto x = path(p, 1.25 * min_redundancy(p));
    Rng rng(7);
    const double bound = estimate_timeout_prob(x, x.w1, 200000, rng);
    SimConfig cfg;
    cfg.paths = {x};
    cfg.clock = RoundClock(0.1, 1, {1});
    cfg.rounds = 200000;
    cfg.model_timeouts = true;
    const auto res = simulate_mptcpnc(cfg);
    const double freq = static_cast<double>(res.timeouts[0]) / static_cast<double>(cfg.rounds);
    EXPECT_LE(freq, bound + 0.002) << "p=" << p;
  }
}

TEST(Timeouts, ResetWindowToInitial) {
  SimConfig cfg;
  cfg.paths = {path(0.0, 1.0)};
  cfg.clock = RoundClock(0.1, 1, {1});
  cfg.rounds = 8;
  cfg.model_timeouts = true;
  cfg.channel = [](std::size_t, std::int64_t round) {
    return ChannelState{round >= 5 ? 1.0 : 0.0, std::nullopt};
  };
  const auto res = simulate_mptcpnc(cfg);
  // Rounds 5 and 6 deliver nothing: the second of them triggers the reset.
  // The shortfall repeats over rounds 7 and 8 from the reset window.
  EXPECT_EQ(res.timeouts[0], 2);
  EXPECT_EQ(res.windows[0][4], 5.0);
  EXPECT_EQ(res.windows[0][6], 1.0);
}

TEST(MeanTrajectory, LosslessIsExact) {
  const auto traj = mean_window_trajectory(path(0.0, 1.0), 20, 10, 1);
  for (std::size_t i = 0; i < traj.size(); ++i)
    EXPECT_DOUBLE_EQ(traj[i], std::min(12.0, 1.0 + static_cast<double>(i)));
}

TEST(Reno, Extremes) {
  Rng rng(8);
  PadhyeParams lossless;
  lossless.p = 0.0;
  EXPECT_NEAR(simulate_tcp_reno(lossless, 1000.0, rng), lossless.w_max / lossless.rtt, 0.05 * 120);
  PadhyeParams dead;
  dead.p = 1.0;
  EXPECT_EQ(simulate_tcp_reno(dead, 100.0, rng), 0.0);
  EXPECT_THROW(simulate_tcp_reno(lossless, 0.0, rng), InvalidInput);
}

TEST(Reno, AgreesWithPadhyeModel) {
  for (double p : {0.005, 0.01, 0.05}) {
    PadhyeParams prm;
    prm.p = p;
    prm.w_max = 1e6;
    Rng rng(9);
    const double sim = simulate_tcp_reno(prm, 20000.0, rng);
    const double model = padhye_throughput(prm);
    EXPECT_NEAR(sim, model, 0.2 * model) << "p=" << p;
  }
}

}  // namespace
}  // namespace mpnc
