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
#include <vector>

#include "mpnc/random.hpp"

namespace mpnc {

using Bytes = std::vector<std::uint8_t>;

/// A random linear combination of the packets of one generation.
///
/// Wire format (all integers big-endian):
///   generation_id   4 bytes
///   generation size 2 bytes  (= number of coefficients)
///   coefficients    size bytes
///   payload length  2 bytes
///   payload         length bytes
struct CodedPacket {
  std::uint32_t generation_id = 0;
  Bytes coefficients;
  Bytes payload;

  friend bool operator==(const CodedPacket&, const CodedPacket&) = default;
};

Bytes serialize(const CodedPacket& packet);
/// Throws InvalidInput on truncated or trailing bytes.
CodedPacket deserialize(std::span<const std::uint8_t> wire);

/// Holds one generation of equal-length packets and emits coded packets
/// over all of them.
class Encoder {
 public:
  /// Throws InvalidInput for an empty generation, more than 65535 packets,
  /// ragged or oversized (> 65535 bytes) payloads.
  Encoder(std::uint32_t generation_id, std::vector<Bytes> packets);

  std::uint32_t generation_id() const noexcept { return generation_id_; }
  std::size_t size() const noexcept { return packets_.size(); }
  std::size_t payload_size() const noexcept { return payload_size_; }
  std::span<const Bytes> packets() const noexcept { return packets_; }

  /// Uniform random coefficients; an all-zero draw is discarded and redrawn.
  CodedPacket encode(Rng& rng) const;

  /// The combination with the given coefficients (length must equal size()).
  CodedPacket combine(std::span<const std::uint8_t> coefficients) const;

  /// Unit-vector packet carrying original packet `index` unchanged.
  CodedPacket systematic(std::size_t index) const;

 private:
  std::uint32_t generation_id_;
  std::vector<Bytes> packets_;
  std::size_t payload_size_;
};

enum class Reception { innovative, redundant };

/// Receiver state for one generation: incremental Gauss-Jordan elimination
/// keeps the received rows in reduced row-echelon form, so a packet is
/// innovative iff it does not reduce to zero, and decoding is a read-out
/// once the rank reaches the generation size.
class Decoder {
 public:
  Decoder(std::uint32_t generation_id, std::size_t generation_size);

  /// Throws InvalidInput when the packet belongs to another generation or
  /// its dimensions disagree with earlier packets. Redundant packets leave
  /// the state unchanged.
  Reception receive(const CodedPacket& packet);

  std::uint32_t generation_id() const noexcept { return generation_id_; }
  std::size_t generation_size() const noexcept { return size_; }
  std::size_t rank() const noexcept { return rank_; }
  std::size_t dof_needed() const noexcept { return size_ - rank_; }
  bool complete() const noexcept { return rank_ == size_; }

  /// Original packets whose pivot has been found ("seen"): seen()[m] is
  /// true when some received row has its leading coefficient at column m.
  std::vector<bool> seen() const;

  /// The original payloads in generation order. Throws NotReadyError
  /// carrying dof_needed() while rank-deficient.
  std::vector<Bytes> decode_all() const;

 private:
  std::uint32_t generation_id_;
  std::size_t size_;
  std::size_t payload_size_ = 0;
  bool have_payload_size_ = false;
  std::size_t rank_ = 0;
  // coeffs_[m] / payloads_[m] hold the row whose pivot is column m, if any.
  std::vector<Bytes> coeffs_;
  std::vector<Bytes> payloads_;
  std::vector<bool> has_row_;
};

/// Splits a byte stream into generations of `block_packets` packets of
/// `segment_size` bytes each; the tail is zero padded. Generation ids start
/// at `first_id`.
std::vector<Encoder> segment_stream(std::span<const std::uint8_t> data, std::size_t block_packets,
                                    std::size_t segment_size, std::uint32_t first_id = 0);

/// Inverse of segment_stream for fully decoded generations, truncated to
/// `length` bytes.
Bytes reassemble(std::span<const std::vector<Bytes>> generations, std::size_t length);

/// Default block size of the connection-level coding layer, in packets.
inline constexpr std::size_t kDefaultBlockPackets = 32;

/// Sub-flow-level coding: `count` coded packets over the current contents
/// of a congestion window, each an opaque payload (for example a packet of
/// the connection-level code). The window forms its own generation.
std::vector<CodedPacket> code_window(std::uint32_t window_id, std::span<const Bytes> window,
                                     std::size_t count, Rng& rng);

}  // namespace mpnc
