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

#include "mpnc/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "mpnc/errors.hpp"
#include "mpnc/random.hpp"

namespace mpnc {
namespace {

constexpr double kGridEps = 1e-9;

std::size_t bin_of(double t, double window) {
  return static_cast<std::size_t>(std::floor(t / window + kGridEps));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

double parse_number(std::string_view cell, std::string_view column, std::size_t line) {
  double value = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
    throw ParseError(fmt::format("line {}: column '{}' is not a number: '{}'", line, column, cell),
                     line);
  return value;
}

double median_of_sorted(const std::vector<double>& v) {
  const auto n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void TraceSeries::add(TraceRecord record) { add_checked(std::move(record), 0); }

void TraceSeries::add_checked(TraceRecord record, std::size_t line) {
  const auto where = line > 0 ? fmt::format("line {}: ", line) : std::string();
  if (record.network.empty()) throw ParseError(where + "empty network label", line);
  if (!std::isfinite(record.t) || record.t < 0.0)
    throw RangeError(fmt::format("{}time {} must be >= 0", where, record.t), line);
  if (!std::isfinite(record.loss_prob) || record.loss_prob < 0.0 || record.loss_prob > 1.0)
    throw RangeError(fmt::format("{}loss_prob {} outside [0, 1]", where, record.loss_prob), line);
  if (record.rtt && (!std::isfinite(*record.rtt) || *record.rtt <= 0.0))
    throw RangeError(fmt::format("{}rtt {} must be positive", where, *record.rtt), line);

  auto [it, inserted] = by_network_.try_emplace(record.network);
  if (inserted) order_.push_back(record.network);
  auto& rows = it->second;
  if (!rows.empty() && record.t <= rows.back().t)
    throw OrderError(fmt::format("{}time {} does not increase for network '{}' (previous {})", where,
                                 record.t, record.network, rows.back().t),
                     line);
  rows.push_back(std::move(record));
}

std::span<const TraceRecord> TraceSeries::records(const std::string& network) const {
  const auto it = by_network_.find(network);
  if (it == by_network_.end()) return {};
  return it->second;
}

std::size_t TraceSeries::size() const noexcept {
  std::size_t n = 0;
  for (const auto& [_, rows] : by_network_) n += rows.size();
  return n;
}

std::size_t TraceSeries::grid_size() const {
  if (!averaged()) throw InvalidInput("grid_size() needs an averaged trace");
  if (empty()) return 0;
  return bin_of(max_time(), interval_) + 1;
}

double TraceSeries::max_time() const noexcept {
  double t = 0.0;
  for (const auto& [_, rows] : by_network_)
    if (!rows.empty()) t = std::max(t, rows.back().t);
  return t;
}

TraceSeries parse_trace(std::istream& in) {
  TraceSeries series;
  std::string line;
  std::size_t line_no = 0;

  int col_t = -1, col_net = -1, col_loss = -1, col_rtt = -1;
  std::size_t columns = 0;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto cells = split_csv(view);

    if (!have_header) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto c = cells[i];
        if (c == "t") col_t = static_cast<int>(i);
        else if (c == "network") col_net = static_cast<int>(i);
        else if (c == "loss_prob") col_loss = static_cast<int>(i);
        else if (c == "rtt") col_rtt = static_cast<int>(i);
      }
      if (col_t < 0 || col_net < 0 || col_loss < 0 || col_rtt < 0)
        throw ParseError(fmt::format("line {}: header must name t, network, loss_prob and rtt",
                                     line_no),
                         line_no);
      columns = cells.size();
      have_header = true;
      continue;
    }

    if (cells.size() != columns)
      throw ParseError(fmt::format("line {}: expected {} columns, found {}", line_no, columns,
                                   cells.size()),
                       line_no);

    TraceRecord record;
    record.t = parse_number(cells[col_t], "t", line_no);
    record.network = std::string(cells[col_net]);
    record.loss_prob = parse_number(cells[col_loss], "loss_prob", line_no);
    if (!cells[col_rtt].empty()) record.rtt = parse_number(cells[col_rtt], "rtt", line_no);
    series.add_checked(std::move(record), line_no);
  }
  if (!have_header) throw ParseError("missing header line", line_no);
  return series;
}

void write_trace(std::ostream& out, const TraceSeries& series) {
  out << "t,network,loss_prob,rtt\n";
  for (const auto& net : series.networks()) {
    for (const auto& r : series.records(net)) {
      if (r.rtt)
        fmt::print(out, "{:.6f},{},{:.6f},{:.6f}\n", r.t, r.network, r.loss_prob, *r.rtt);
      else
        fmt::print(out, "{:.6f},{},{:.6f},\n", r.t, r.network, r.loss_prob);
    }
  }
}

TraceSeries average_loss(const TraceSeries& series, double window) {
  if (!std::isfinite(window) || window <= 0.0)
    throw InvalidInput(fmt::format("averaging window must be positive, got {}", window));

  TraceSeries out;
  out.interval_ = window;
  if (series.empty()) return out;

  const std::size_t bins = bin_of(series.max_time(), window) + 1;
  for (const auto& net : series.networks()) {
    std::vector<double> loss_sum(bins, 0.0), rtt_sum(bins, 0.0);
    std::vector<std::size_t> loss_n(bins, 0), rtt_n(bins, 0);
    for (const auto& r : series.records(net)) {
      const auto b = bin_of(r.t, window);
      loss_sum[b] += r.loss_prob;
      ++loss_n[b];
      if (r.rtt) {
        rtt_sum[b] += *r.rtt;
        ++rtt_n[b];
      }
    }
    for (std::size_t b = 0; b < bins; ++b) {
      TraceRecord rec;
      rec.t = static_cast<double>(b) * window;
      rec.network = net;
      if (loss_n[b] == 0) {
        rec.loss_prob = 1.0;
      } else {
        rec.loss_prob = std::clamp(loss_sum[b] / static_cast<double>(loss_n[b]), 0.0, 1.0);
        if (rtt_n[b] > 0) rec.rtt = rtt_sum[b] / static_cast<double>(rtt_n[b]);
      }
      out.add(std::move(rec));
    }
  }
  return out;
}

std::vector<CdfPoint> empirical_cdf(std::vector<double> samples) {
  std::vector<CdfPoint> cdf;
  if (samples.empty()) return cdf;
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
    cdf.push_back({samples[i], static_cast<double>(i + 1) / n});
  }
  return cdf;
}

std::vector<NetworkSummary> summarize(const TraceSeries& series) {
  if (series.empty()) throw InvalidInput("cannot summarize an empty trace");
  std::vector<NetworkSummary> out;
  for (const auto& net : series.networks()) {
    NetworkSummary s;
    s.network = net;
    std::vector<double> losses, rtts;
    for (const auto& r : series.records(net)) {
      losses.push_back(r.loss_prob);
      if (r.rtt) rtts.push_back(*r.rtt);
    }
    s.records = losses.size();
    double sum = 0.0;
    for (double v : losses) sum += v;
    s.mean_loss = sum / static_cast<double>(losses.size());
    std::sort(losses.begin(), losses.end());
    s.median_loss = median_of_sorted(losses);
    s.loss_cdf = empirical_cdf(losses);
    if (!rtts.empty()) {
      double rsum = 0.0;
      for (double v : rtts) rsum += v;
      s.mean_rtt = rsum / static_cast<double>(rtts.size());
      std::sort(rtts.begin(), rtts.end());
      s.median_rtt = median_of_sorted(rtts);
      s.rtt_cdf = empirical_cdf(rtts);
    }
    out.push_back(std::move(s));
  }
  return out;
}

TraceSeries synthesize_trace(std::span<const SyntheticNetwork> networks,
                             const SyntheticTraceOptions& options) {
  if (!(options.duration > 0.0) || !(options.sample_period > 0.0))
    throw InvalidInput("synthetic trace needs positive duration and sample period");
  if (options.loss_jitter < 0.0) throw InvalidInput("loss jitter must be >= 0");

  Rng rng(options.seed);
  TraceSeries series;
  const auto samples = static_cast<std::size_t>(
      std::ceil(options.duration / options.sample_period - kGridEps));
  for (const auto& net : networks) {
    if (!(net.phase > 0.0)) throw InvalidInput("synthetic network phase must be positive");
    for (std::size_t s = 0; s < samples; ++s) {
      const double t = static_cast<double>(s) * options.sample_period;
      const bool out_of_range = std::any_of(net.outages.begin(), net.outages.end(),
                                            [t](const auto& o) { return t >= o.first && t < o.second; });
      // Draw jitter even inside outages so one network's outages do not
      // shift the random stream of the others.
      const double jitter = options.loss_jitter * (2.0 * uniform01(rng) - 1.0);
      if (out_of_range) continue;
      const bool high = static_cast<std::size_t>(std::floor(t / net.phase + kGridEps)) % 2 == 1;
      TraceRecord r;
      r.t = t;
      r.network = net.network;
      r.loss_prob = std::clamp((high ? net.high_loss : net.low_loss) + jitter, 0.0, 1.0);
      r.rtt = net.rtt;
      series.add(std::move(r));
    }
  }
  return series;
}

}  // namespace mpnc
