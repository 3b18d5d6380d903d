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

#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "mpnc/coding.hpp"
#include "mpnc/errors.hpp"
#include "mpnc/nc_model.hpp"
#include "mpnc/padhye.hpp"
#include "mpnc/random.hpp"
#include "mpnc/simulator.hpp"

namespace mpnc::cli {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput(fmt::format("{}: '{}' is not a number", what, s));
  }
}

void write_header(std::ostream& csv, const RunConfig& config) { csv << config.echo() << '\n'; }

// Traces name networks; analytic models need one row per path.
struct TracePaths {
  std::vector<std::string> networks;
  std::vector<double> rtts;
};

TracePaths trace_paths(const RunConfig& config, const TraceSeries& raw) {
  TracePaths out;
  for (const auto& net : raw.networks()) {
    out.networks.push_back(net);
    out.rtts.push_back(resolve_rtt(config, net, raw));
  }
  if (out.networks.empty()) throw InvalidInput("trace contains no records");
  return out;
}

std::vector<PathParams> nc_paths(const RunConfig& config, const TracePaths& tp) {
  std::vector<PathParams> paths;
  for (std::size_t j = 0; j < tp.networks.size(); ++j) {
    PathParams p;
    p.path_id = tp.networks[j];
    p.rtt = tp.rtts[j];
    p.w_max = config.w_max;
    p.w1 = config.w1;
    paths.push_back(p);
  }
  return paths;
}

std::vector<MptcpPath> reno_paths(const RunConfig& config, const TracePaths& tp) {
  std::vector<MptcpPath> paths;
  for (std::size_t j = 0; j < tp.networks.size(); ++j) {
    PadhyeParams p;
    p.rtt = tp.rtts[j];
    p.b = config.b;
    p.t0 = config.t0;
    p.w_max = config.w_max;
    paths.push_back({tp.networks[j], p});
  }
  return paths;
}

NcSeriesPolicy policy_of(const RunConfig& config) {
  NcSeriesPolicy policy;
  policy.quantum = config.quantum;
  policy.redundancy_margin = config.redundancy_margin;
  return policy;
}

std::vector<std::string> subcritical_by_interval(const NcSeriesResult& nc) {
  std::vector<std::string> out(nc.series.size());
  for (const auto& note : nc.subcritical) {
    auto& cell = out[note.interval];
    if (!cell.empty()) cell += ';';
    cell += note.path_id;
  }
  return out;
}

PathParams parse_path_spec(const RunConfig& config, const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() < 3 || parts.size() > 4)
    throw InvalidInput(fmt::format("path spec '{}' is not name:p:rtt[:R]", spec));
  PathParams p;
  p.path_id = parts[0];
  p.p = to_double(parts[1], "path loss");
  p.rtt = to_double(parts[2], "path rtt");
  p.w_max = config.w_max;
  p.w1 = config.w1;
  p.redundancy = parts.size() == 4 ? to_double(parts[3], "path redundancy")
                                   : std::max(1.0, config.redundancy_margin * min_redundancy(p.p));
  p.validate();
  return p;
}

}  // namespace

std::string RunConfig::echo() const {
  std::string s = fmt::format(
      "# mpnc {} trace={} quantum={} wmax={} w1={} redundancy_margin={} avg_window={} b={} t0={} "
      "rounds={} seed={}",
      subcommand, trace_path.empty() ? "-" : trace_path, quantum, w_max, w1, redundancy_margin,
      avg_window, b, t0, rounds, seed);
  for (const auto& [net, v] : rtt) s += fmt::format(" rtt:{}={}", net, v);
  if (subcommand == "simulate") {
    for (const auto& p : paths) s += fmt::format(" path={}", p);
    s += fmt::format(" timeouts={}", timeouts ? 1 : 0);
  }
  if (subcommand == "codec-bench")
    s += fmt::format(" generation={} payload={} trials={}", generation, payload, trials);
  if (subcommand == "gen-trace") {
    s += fmt::format(" duration={} phase={} low_loss={} high_loss={} jitter={}", duration, phase,
                     low_loss, high_loss, jitter);
    for (const auto& o : outages) s += fmt::format(" outage={}", o);
  }
  return s;
}

const std::map<std::string, double>& default_rtts() {
  static const std::map<std::string, double> table{
      {"iridium", 1.653}, {"wifi", 0.607}, {"wimax", 0.087}};
  return table;
}

double resolve_rtt(const RunConfig& config, const std::string& network,
                   const TraceSeries& raw_trace) {
  if (auto it = config.rtt.find(network); it != config.rtt.end()) return it->second;
  if (auto it = default_rtts().find(lower(network)); it != default_rtts().end()) return it->second;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : raw_trace.records(network))
    if (r.rtt) {
      sum += *r.rtt;
      ++n;
    }
  if (n == 0)
    throw InvalidInput(fmt::format("no RTT known for network '{}'; pass --rtt {}=SECONDS", network,
                                   network));
  return sum / static_cast<double>(n);
}

TraceSeries load_trace(const std::string& path) {
  if (path.empty()) throw InvalidInput("--trace is required for this subcommand");
  std::ifstream in(path);
  if (!in) throw InvalidInput(fmt::format("cannot open trace '{}'", path));
  return parse_trace(in);
}

CompareResult compare(const RunConfig& config, const TraceSeries& raw_trace) {
  const auto averaged = average_loss(raw_trace, config.avg_window);
  const auto tp = trace_paths(config, raw_trace);
  const auto reno = reno_paths(config, tp);
  const auto nc_in = nc_paths(config, tp);

  CompareResult result;
  result.mptcp = mptcp_series(averaged, reno);
  auto nc = mptcpnc_series(averaged, nc_in, policy_of(config));
  result.subcritical = subcritical_by_interval(nc);
  result.mptcpnc = std::move(nc.series);
  result.mean_mptcp = result.mptcp.mean();
  result.mean_mptcpnc = result.mptcpnc.mean();
  std::size_t ahead = 0;
  for (std::size_t b = 0; b < result.mptcp.size(); ++b)
    if (result.mptcpnc[b].throughput >= result.mptcp[b].throughput) ++ahead;
  result.fraction_nc_ahead =
      result.mptcp.empty() ? 0.0 : static_cast<double>(ahead) / static_cast<double>(result.mptcp.size());
  return result;
}

void run_model_mptcp(const RunConfig& config, std::ostream& csv, std::ostream& summary) {
  const auto raw = load_trace(config.trace_path);
  const auto averaged = average_loss(raw, config.avg_window);
  const auto series = mptcp_series(averaged, reno_paths(config, trace_paths(config, raw)));
  write_header(csv, config);
  csv << "time,mptcp\n";
  for (const auto& s : series.samples()) fmt::print(csv, "{:.3f},{:.6f}\n", s.time, s.throughput);
  fmt::print(summary, "intervals: {}\nmean MPTCP throughput: {:.3f} packets/s\n", series.size(),
             series.mean());
}

void run_model_mptcpnc(const RunConfig& config, std::ostream& csv, std::ostream& summary) {
  const auto raw = load_trace(config.trace_path);
  const auto averaged = average_loss(raw, config.avg_window);
  const auto tp = trace_paths(config, raw);
  const auto paths = nc_paths(config, tp);
  const auto nc = mptcpnc_series(averaged, paths, policy_of(config));
  const auto notes = subcritical_by_interval(nc);
  write_header(csv, config);
  csv << "time,mptcpnc,subcritical\n";
  for (std::size_t b = 0; b < nc.series.size(); ++b)
    fmt::print(csv, "{:.3f},{:.6f},{}\n", nc.series[b].time, nc.series[b].throughput, notes[b]);
  fmt::print(summary,
             "intervals: {}\nround length: {} s\nmean MPTCP/NC throughput: {:.3f} packets/s\n"
             "saturation limit: {:.3f} packets/s\nsub-critical path-intervals: {}\n",
             nc.series.size(), nc.clock.t_rnd(), nc.series.mean(),
             asymptotic_throughput(paths, nc.clock), nc.subcritical.size());
}

CompareResult run_compare(const RunConfig& config, std::ostream& csv, std::ostream& summary) {
  const auto raw = load_trace(config.trace_path);
  auto result = compare(config, raw);
  write_header(csv, config);
  csv << "time,mptcp,mptcpnc,subcritical\n";
  for (std::size_t b = 0; b < result.mptcp.size(); ++b)
    fmt::print(csv, "{:.3f},{:.6f},{:.6f},{}\n", result.mptcp[b].time, result.mptcp[b].throughput,
               result.mptcpnc[b].throughput, result.subcritical[b]);
  std::size_t violations = 0;
  for (const auto& s : result.subcritical) violations += s.empty() ? 0 : 1;
  fmt::print(summary,
             "intervals: {}\nmean MPTCP throughput: {:.3f} packets/s\n"
             "mean MPTCP/NC throughput: {:.3f} packets/s\n"
             "intervals with MPTCP/NC >= MPTCP: {:.1f}%\n"
             "intervals with a sub-critical path: {}\n",
             result.mptcp.size(), result.mean_mptcp, result.mean_mptcpnc,
             100.0 * result.fraction_nc_ahead, violations);
  return result;
}

void run_simulate(const RunConfig& config, std::ostream& csv, std::ostream& summary) {
  SimConfig sim{{}, RoundClock(1.0, 1, {1}), 0, config.seed, config.timeouts, {}};
  const bool from_trace = !config.trace_path.empty();
  TraceSeries averaged;

  if (from_trace) {
    if (!config.paths.empty()) throw InvalidInput("use either --trace or --path, not both");
    const auto raw = load_trace(config.trace_path);
    averaged = average_loss(raw, config.avg_window);
    const auto tp = trace_paths(config, raw);
    sim.paths = nc_paths(config, tp);
  } else {
    if (config.paths.empty()) throw InvalidInput("simulate needs --trace or at least one --path");
    for (const auto& spec : config.paths) sim.paths.push_back(parse_path_spec(config, spec));
  }
  std::vector<double> rtts;
  for (const auto& p : sim.paths) rtts.push_back(p.rtt);
  sim.clock = make_round_clock(rtts, config.quantum);
  const double t_rnd = sim.clock.t_rnd();

  if (from_trace) {
    const auto bins = averaged.grid_size();
    sim.rounds = config.rounds > 0
                     ? config.rounds
                     : std::llround(static_cast<double>(bins) * config.avg_window / t_rnd);
    std::vector<std::vector<double>> loss(sim.paths.size());
    for (std::size_t j = 0; j < sim.paths.size(); ++j)
      for (const auto& r : averaged.records(sim.paths[j].path_id)) loss[j].push_back(r.loss_prob);
    const double margin = config.redundancy_margin;
    const double window = config.avg_window;
    sim.channel = [loss, margin, window, t_rnd](std::size_t j, std::int64_t i) {
      const auto b = static_cast<std::size_t>(static_cast<double>(i - 1) * t_rnd / window);
      const double p = b < loss[j].size() ? loss[j][b] : 1.0;
      ChannelState ch{p, std::nullopt};
      if (p < 1.0) ch.redundancy = std::max(1.0, margin * min_redundancy(p));
      return ch;
    };
  } else {
    sim.rounds = config.rounds > 0 ? config.rounds : 1000;
  }

  const auto result = simulate_mptcpnc(sim);
  write_header(csv, config);

  if (from_trace) {
    // Aggregate per averaging interval so the output lines up with compare.
    csv << "time,throughput";
    for (const auto& p : sim.paths) csv << ",window_" << p.path_id;
    csv << '\n';
    const auto per_bin = std::max<std::int64_t>(1, std::llround(config.avg_window / t_rnd));
    for (std::int64_t start = 0; start < sim.rounds; start += per_bin) {
      const auto end = std::min(sim.rounds, start + per_bin);
      double thr = 0.0;
      for (auto i = start; i < end; ++i) thr += result.throughput[static_cast<std::size_t>(i)].throughput;
      fmt::print(csv, "{:.3f},{:.6f}", static_cast<double>(start) * t_rnd,
                 thr / static_cast<double>(end - start));
      for (const auto& w : result.windows) {
        double sum = 0.0;
        for (auto i = start; i < end; ++i) sum += w[static_cast<std::size_t>(i)];
        fmt::print(csv, ",{:.6f}", sum / static_cast<double>(end - start));
      }
      csv << '\n';
    }
  } else {
    csv << "round,time,throughput,mean_field";
    for (const auto& p : sim.paths) csv << ",window_" << p.path_id;
    csv << '\n';
    for (std::int64_t i = 1; i <= sim.rounds; ++i) {
      double mf = 0.0;
      for (std::size_t j = 0; j < sim.paths.size(); ++j)
        mf += round_throughput(sim.paths[j], sim.clock.alpha(j), t_rnd, i);
      const auto& s = result.throughput[static_cast<std::size_t>(i - 1)];
      fmt::print(csv, "{},{:.6f},{:.6f},{:.6f}", i, s.time, s.throughput, mf);
      for (const auto& w : result.windows) fmt::print(csv, ",{:.6f}", w[static_cast<std::size_t>(i - 1)]);
      csv << '\n';
    }
  }

  std::int64_t timeouts = 0;
  for (auto t : result.timeouts) timeouts += t;
  fmt::print(summary,
             "rounds: {}\nround length: {} s\nmean simulated throughput: {:.3f} packets/s\n"
             "timeouts: {}\n",
             sim.rounds, t_rnd, result.throughput.mean(), timeouts);
}

void run_trace_stats(const RunConfig& config, std::ostream& csv, std::ostream& summary) {
  const auto raw = load_trace(config.trace_path);
  const auto stats = summarize(raw);
  write_header(csv, config);
  csv << "network,metric,value,fraction\n";
  for (const auto& s : stats) {
    fmt::print(csv, "{},records,{},\n", s.network, s.records);
    fmt::print(csv, "{},mean_loss,{:.6f},\n", s.network, s.mean_loss);
    fmt::print(csv, "{},median_loss,{:.6f},\n", s.network, s.median_loss);
    if (s.mean_rtt) fmt::print(csv, "{},mean_rtt,{:.6f},\n", s.network, *s.mean_rtt);
    if (s.median_rtt) fmt::print(csv, "{},median_rtt,{:.6f},\n", s.network, *s.median_rtt);
    for (const auto& c : s.loss_cdf)
      fmt::print(csv, "{},loss_cdf,{:.6f},{:.6f}\n", s.network, c.value, c.fraction);
    for (const auto& c : s.rtt_cdf)
      fmt::print(csv, "{},rtt_cdf,{:.6f},{:.6f}\n", s.network, c.value, c.fraction);
  }
  for (const auto& s : stats)
    fmt::print(summary, "{}: {} records, mean loss {:.4f}, mean rtt {}\n", s.network, s.records,
               s.mean_loss, s.mean_rtt ? fmt::format("{:.4f} s", *s.mean_rtt) : "n/a");
}

void run_codec_bench(const RunConfig& config, std::ostream& csv, std::ostream& summary) {
  if (config.generation == 0 || config.generation > 65535 || config.payload > 65535)
    throw InvalidInput("generation must be in [1, 65535] and payload <= 65535 bytes");
  if (config.trials < 1) throw InvalidInput("codec-bench needs at least one trial");
  Rng rng(config.seed);
  const auto k = config.generation;

  std::int64_t decoded = 0;
  std::uint64_t receptions = 0;
  std::uint64_t redundant_first_k = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::int64_t t = 0; t < config.trials; ++t) {
    std::vector<Bytes> packets(k, Bytes(config.payload));
    for (auto& p : packets)
      for (auto& byte : p) byte = uniform_byte(rng);
    const Encoder encoder(static_cast<std::uint32_t>(t), packets);
    Decoder decoder(static_cast<std::uint32_t>(t), k);
    std::size_t received = 0;
    while (!decoder.complete()) {
      const auto outcome = decoder.receive(encoder.encode(rng));
      if (received < k && outcome == Reception::redundant) ++redundant_first_k;
      ++received;
    }
    receptions += received;
    if (decoder.decode_all() == packets) ++decoded;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  const double trials = static_cast<double>(config.trials);
  const double redundant_rate =
      static_cast<double>(redundant_first_k) / (trials * static_cast<double>(k));
  write_header(csv, config);
  csv << "trials,generation,payload_bytes,decoded,mean_receptions,redundant_first_k\n";
  fmt::print(csv, "{},{},{},{},{:.6f},{:.6f}\n", config.trials, k, config.payload, decoded,
             static_cast<double>(receptions) / trials, redundant_rate);
  const double bytes = trials * static_cast<double>(k * config.payload);
  fmt::print(summary,
             "decoded {}/{} generations of {} x {} bytes\nredundant among first k: {:.4f}%\n"
             "coding rate: {:.1f} MB/s\n",
             decoded, config.trials, k, config.payload, 100.0 * redundant_rate,
             elapsed.count() > 0 ? bytes / elapsed.count() / 1e6 : 0.0);
  if (decoded != config.trials) throw Error("codec round-trip mismatch");
}

void run_gen_trace(const RunConfig& config, std::ostream& csv, std::ostream& summary) {
  std::vector<SyntheticNetwork> nets;
  for (const auto& [name, rtt] : std::vector<std::pair<std::string, double>>{
           {"iridium", 1.653}, {"wifi", 0.607}, {"wimax", 0.087}}) {
    SyntheticNetwork n;
    n.network = name;
    n.rtt = config.rtt.count(name) ? config.rtt.at(name) : rtt;
    n.low_loss = config.low_loss;
    n.high_loss = config.high_loss;
    n.phase = config.phase;
    nets.push_back(n);
  }
  for (const auto& spec : config.outages) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw InvalidInput(fmt::format("outage '{}' is not network:start:end", spec));
    auto it = std::find_if(nets.begin(), nets.end(), [&](const auto& n) { return n.network == parts[0]; });
    if (it == nets.end()) throw InvalidInput(fmt::format("unknown network '{}' in outage", parts[0]));
    it->outages.emplace_back(to_double(parts[1], "outage start"), to_double(parts[2], "outage end"));
  }
  SyntheticTraceOptions options;
  options.duration = config.duration;
  options.loss_jitter = config.jitter;
  options.seed = config.seed;
  const auto trace = synthesize_trace(nets, options);
  write_header(csv, config);
  write_trace(csv, trace);
  fmt::print(summary, "wrote {} records for {} networks\n", trace.size(), trace.networks().size());
}

void run(const RunConfig& config, std::ostream& csv, std::ostream& summary) {
  const auto& cmd = config.subcommand;
  if (cmd == "model-mptcp") return run_model_mptcp(config, csv, summary);
  if (cmd == "model-mptcpnc") return run_model_mptcpnc(config, csv, summary);
  if (cmd == "compare") {
    run_compare(config, csv, summary);
    return;
  }
  if (cmd == "simulate") return run_simulate(config, csv, summary);
  if (cmd == "trace-stats") return run_trace_stats(config, csv, summary);
  if (cmd == "codec-bench") return run_codec_bench(config, csv, summary);
  if (cmd == "gen-trace") return run_gen_trace(config, csv, summary);
  throw InvalidInput(fmt::format("unknown subcommand '{}'", cmd));
}

}  // namespace mpnc::cli
