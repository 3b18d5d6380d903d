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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mpnc {

/// One measurement of a network at time t (seconds since experiment start).
struct TraceRecord {
  double t = 0.0;
  std::string network;
  double loss_prob = 0.0;
  std::optional<double> rtt;
};

/// Per-network, time-ordered trace records. A series produced by
/// average_loss() carries its averaging interval and places every network
/// on the same grid t = b * interval, b = 0 .. grid_size()-1.
class TraceSeries {
 public:
  TraceSeries() = default;

  /// Appends a record. Throws RangeError / OrderError (line 0) on invalid
  /// loss, rtt, time, or non-increasing time within a network.
  void add(TraceRecord record);

  /// Networks in order of first appearance.
  const std::vector<std::string>& networks() const noexcept { return order_; }
  bool has_network(const std::string& network) const { return by_network_.count(network) != 0; }
  /// Records of one network; empty span when unknown.
  std::span<const TraceRecord> records(const std::string& network) const;

  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }

  /// Averaging interval in seconds; 0 for a raw (unaveraged) trace.
  double interval() const noexcept { return interval_; }
  bool averaged() const noexcept { return interval_ > 0.0; }
  /// Number of grid intervals of an averaged series.
  std::size_t grid_size() const;

  /// Latest record time over all networks, or 0 for an empty series.
  double max_time() const noexcept;

 private:
  friend TraceSeries average_loss(const TraceSeries&, double);

  void add_checked(TraceRecord record, std::size_t line);
  friend TraceSeries parse_trace(std::istream&);

  std::vector<std::string> order_;
  std::map<std::string, std::vector<TraceRecord>> by_network_;
  double interval_ = 0.0;
};

/// Reads CSV with a header naming at least the columns t, network,
/// loss_prob and rtt (any order; other columns are ignored). Empty rtt
/// cells mean "not measured". Blank lines and lines starting with '#' are
/// skipped. Errors carry the 1-based line number.
TraceSeries parse_trace(std::istream& in);

/// Writes `t,network,loss_prob,rtt` rows, records grouped by network in
/// first-appearance order, every number printed with six decimals and an
/// absent rtt left empty. parse_trace(write_trace(s)) reproduces s to six
/// decimals.
void write_trace(std::ostream& out, const TraceSeries& series);

/// Arithmetic mean of loss_prob (and of the measured rtts) per network over
/// consecutive windows [b*w, (b+1)*w). Intervals with no records for a
/// network become outages: loss 1.0, no rtt. All networks share one grid
/// that spans from 0 to the last record of any network.
TraceSeries average_loss(const TraceSeries& series, double window = 5.0);

struct CdfPoint {
  double value;
  double fraction;  // share of samples <= value
};

struct NetworkSummary {
  std::string network;
  std::size_t records = 0;
  double mean_loss = 0.0;
  double median_loss = 0.0;
  std::vector<CdfPoint> loss_cdf;
  std::optional<double> mean_rtt;
  std::optional<double> median_rtt;
  std::vector<CdfPoint> rtt_cdf;
};

/// Empirical CDF over the distinct sample values.
std::vector<CdfPoint> empirical_cdf(std::vector<double> samples);

/// Per-network statistics in first-appearance order. Throws InvalidInput
/// on an empty series.
std::vector<NetworkSummary> summarize(const TraceSeries& series);

/// A synthetic network for trace generation: loss alternates between
/// low_loss and high_loss every `phase` seconds (starting low), and no
/// records are emitted inside the outage windows.
struct SyntheticNetwork {
  std::string network;
  double rtt = 0.1;
  double low_loss = 0.0;
  double high_loss = 0.0;
  double phase = 30.0;
  std::vector<std::pair<double, double>> outages;  // [start, end) seconds
};

struct SyntheticTraceOptions {
  double duration = 300.0;      // seconds
  double sample_period = 1.0;   // seconds between records
  double loss_jitter = 0.0;     // uniform +/- jitter on loss, clipped to [0, 1]
  std::uint64_t seed = 1;
};

TraceSeries synthesize_trace(std::span<const SyntheticNetwork> networks,
                             const SyntheticTraceOptions& options);

}  // namespace mpnc
