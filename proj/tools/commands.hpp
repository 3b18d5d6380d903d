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
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mpnc/model.hpp"
#include "mpnc/trace.hpp"

namespace mpnc::cli {

/// Everything a run depends on. echo() serializes it into the `#` header
/// line written at the top of every output file.
struct RunConfig {
  std::string subcommand;
  std::string trace_path;
  std::string out_path;

  double quantum = kDefaultQuantum;
  double w_max = 12.0;
  double w1 = 1.0;
  double redundancy_margin = 1.25;
  double avg_window = 5.0;
  double b = 2.0;
  double t0 = 0.2;
  std::int64_t rounds = 0;  // 0: derived from the trace, or 1000
  std::uint64_t seed = 1;
  std::map<std::string, double> rtt;  // per-network RTT overrides, seconds

  // simulate
  std::vector<std::string> paths;  // "name:p:rtt[:R]"
  bool timeouts = false;

  // codec-bench
  std::size_t generation = 32;
  std::size_t payload = 1350;
  std::int64_t trials = 1000;

  // gen-trace
  double duration = 300.0;
  double phase = 30.0;
  double low_loss = 0.05;
  double high_loss = 0.5;
  double jitter = 0.0;
  std::vector<std::string> outages;  // "network:start:end"

  std::string echo() const;
};

/// Mean RTTs of the three measured networks, keyed by lower-case name.
const std::map<std::string, double>& default_rtts();

/// RTT for a trace network: explicit override, then the built-in table
/// (case-insensitive), then the trace's own mean RTT. Throws InvalidInput
/// when none is available.
double resolve_rtt(const RunConfig& config, const std::string& network,
                   const TraceSeries& raw_trace);

struct CompareResult {
  ThroughputSeries mptcp{"mptcp"};
  ThroughputSeries mptcpnc{"mptcpnc"};
  std::vector<std::string> subcritical;  // per interval, ';'-joined path ids
  double mean_mptcp = 0.0;
  double mean_mptcpnc = 0.0;
  double fraction_nc_ahead = 0.0;  // intervals with MPTCP/NC >= MPTCP
};

TraceSeries load_trace(const std::string& path);

/// Evaluates both closed-form models on the averaged trace.
CompareResult compare(const RunConfig& config, const TraceSeries& raw_trace);

// Subcommands. Each writes its CSV (config header first) to `csv` and a
// short human-readable summary to `summary`.
void run_model_mptcp(const RunConfig& config, std::ostream& csv, std::ostream& summary);
void run_model_mptcpnc(const RunConfig& config, std::ostream& csv, std::ostream& summary);
CompareResult run_compare(const RunConfig& config, std::ostream& csv, std::ostream& summary);
void run_simulate(const RunConfig& config, std::ostream& csv, std::ostream& summary);
void run_trace_stats(const RunConfig& config, std::ostream& csv, std::ostream& summary);
void run_codec_bench(const RunConfig& config, std::ostream& csv, std::ostream& summary);
void run_gen_trace(const RunConfig& config, std::ostream& csv, std::ostream& summary);

/// Dispatches on config.subcommand.
void run(const RunConfig& config, std::ostream& csv, std::ostream& summary);

}  // namespace mpnc::cli
