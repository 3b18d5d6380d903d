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

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "commands.hpp"
#include "mpnc/errors.hpp"

namespace {

void add_common(CLI::App* sub, mpnc::cli::RunConfig& cfg, std::vector<std::string>& rtt_specs) {
  sub->add_option("--out", cfg.out_path, "Output CSV path (default: standard output)");
  sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  sub->add_option("--rtt", rtt_specs, "Per-network RTT override NETWORK=SECONDS (repeatable)");
}

void add_model(CLI::App* sub, mpnc::cli::RunConfig& cfg) {
  sub->add_option("--trace", cfg.trace_path, "Trace CSV (t,network,loss_prob,rtt)")->required();
  sub->add_option("--avg-window", cfg.avg_window, "Loss averaging window, seconds")
      ->capture_default_str();
  sub->add_option("--wmax", cfg.w_max, "Maximum congestion window, packets")->capture_default_str();
  sub->add_option("--w1", cfg.w1, "Initial expected window, packets")->capture_default_str();
}

void add_nc(CLI::App* sub, mpnc::cli::RunConfig& cfg) {
  sub->add_option("--quantum", cfg.quantum, "RTT quantum for the round clock, seconds")
      ->capture_default_str();
  sub->add_option("--redundancy-margin", cfg.redundancy_margin,
                  "Redundancy as a multiple of 1/(1-p)")
      ->capture_default_str();
}

void add_reno(CLI::App* sub, mpnc::cli::RunConfig& cfg) {
  sub->add_option("--b", cfg.b, "Packets acknowledged per ACK (Reno model)")->capture_default_str();
  sub->add_option("--t0", cfg.t0, "Initial retransmission timeout, seconds (Reno model)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipath TCP and coded multipath TCP throughput models, simulator and codec"};
  app.require_subcommand(1);

  mpnc::cli::RunConfig cfg;
  std::vector<std::string> rtt_specs;

  auto* mptcp = app.add_subcommand("model-mptcp", "Reno-sum MPTCP throughput per trace interval");
  add_common(mptcp, cfg, rtt_specs);
  add_model(mptcp, cfg);
  add_reno(mptcp, cfg);

  auto* nc = app.add_subcommand("model-mptcpnc", "Closed-form MPTCP/NC throughput per trace interval");
  add_common(nc, cfg, rtt_specs);
  add_model(nc, cfg);
  add_nc(nc, cfg);

  auto* cmp = app.add_subcommand("compare", "MPTCP vs MPTCP/NC on one trace");
  add_common(cmp, cfg, rtt_specs);
  add_model(cmp, cfg);
  add_nc(cmp, cfg);
  add_reno(cmp, cfg);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo run of coded sub-flows");
  add_common(sim, cfg, rtt_specs);
  add_nc(sim, cfg);
  sim->add_option("--trace", cfg.trace_path, "Drive losses from a trace CSV");
  sim->add_option("--path", cfg.paths, "Static path NAME:P:RTT[:R] (repeatable)");
  sim->add_option("--rounds", cfg.rounds, "Rounds of the shared clock");
  sim->add_option("--avg-window", cfg.avg_window, "Loss averaging window, seconds")
      ->capture_default_str();
  sim->add_option("--wmax", cfg.w_max, "Maximum congestion window, packets")->capture_default_str();
  sim->add_option("--w1", cfg.w1, "Initial window, packets")->capture_default_str();
  sim->add_flag("--timeouts", cfg.timeouts, "Reset the window on a two-round ACK shortfall");

  auto* stats = app.add_subcommand("trace-stats", "Per-network loss and RTT statistics");
  add_common(stats, cfg, rtt_specs);
  stats->add_option("--trace", cfg.trace_path, "Trace CSV")->required();

  auto* codec = app.add_subcommand("codec-bench", "Randomized encode/decode round trips");
  add_common(codec, cfg, rtt_specs);
  codec->add_option("--generation", cfg.generation, "Packets per generation")->capture_default_str();
  codec->add_option("--payload", cfg.payload, "Bytes per packet")->capture_default_str();
  codec->add_option("--trials", cfg.trials, "Generations to code")->capture_default_str();

  auto* gen = app.add_subcommand("gen-trace", "Write a synthetic three-network trace");
  add_common(gen, cfg, rtt_specs);
  gen->add_option("--duration", cfg.duration, "Seconds")->capture_default_str();
  gen->add_option("--phase", cfg.phase, "Seconds between low/high loss switches")
      ->capture_default_str();
  gen->add_option("--low-loss", cfg.low_loss)->capture_default_str();
  gen->add_option("--high-loss", cfg.high_loss)->capture_default_str();
  gen->add_option("--jitter", cfg.jitter, "Uniform +/- loss jitter")->capture_default_str();
  gen->add_option("--outage", cfg.outages, "NETWORK:START:END with no records (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    for (const auto& spec : rtt_specs) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0)
        throw mpnc::InvalidInput(fmt::format("--rtt expects NETWORK=SECONDS, got '{}'", spec));
      cfg.rtt[spec.substr(0, eq)] = std::stod(spec.substr(eq + 1));
    }

    if (cfg.out_path.empty()) {
      mpnc::cli::run(cfg, std::cout, std::cerr);
    } else {
      std::ofstream out(cfg.out_path, std::ios::binary);
      if (!out) throw mpnc::InvalidInput(fmt::format("cannot write '{}'", cfg.out_path));
      mpnc::cli::run(cfg, out, std::cout);
      out.close();
      if (!out) throw mpnc::Error(fmt::format("failed writing '{}'", cfg.out_path));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
