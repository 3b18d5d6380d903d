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

#include "mpnc/coding.hpp"

#include <algorithm>
#include <limits>

#include <fmt/core.h>

#include "mpnc/errors.hpp"
#include "mpnc/gf256.hpp"

namespace mpnc {
namespace {

constexpr std::size_t kMaxField16 = std::numeric_limits<std::uint16_t>::max();

void put_u16(Bytes& out, std::size_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> take(std::size_t n) {
    if (in_.size() - pos_ < n)
      throw InvalidInput(fmt::format("coded packet truncated at byte {}", pos_));
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t u16() {
    auto s = take(2);
    return (std::size_t{s[0]} << 8) | s[1];
  }
  std::uint32_t u32() {
    auto s = take(4);
    return (std::uint32_t{s[0]} << 24) | (std::uint32_t{s[1]} << 16) | (std::uint32_t{s[2]} << 8) |
           std::uint32_t{s[3]};
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes serialize(const CodedPacket& packet) {
  if (packet.coefficients.size() > kMaxField16 || packet.payload.size() > kMaxField16)
    throw InvalidInput("coded packet dimensions exceed the 16-bit wire fields");
  Bytes out;
  out.reserve(8 + packet.coefficients.size() + packet.payload.size());
  for (int shift = 24; shift >= 0; shift -= 8)
    out.push_back(static_cast<std::uint8_t>(packet.generation_id >> shift));
  put_u16(out, packet.coefficients.size());
  out.insert(out.end(), packet.coefficients.begin(), packet.coefficients.end());
  put_u16(out, packet.payload.size());
  out.insert(out.end(), packet.payload.begin(), packet.payload.end());
  return out;
}

CodedPacket deserialize(std::span<const std::uint8_t> wire) {
  Reader r(wire);
  CodedPacket packet;
  packet.generation_id = r.u32();
  const auto size = r.u16();
  auto coeffs = r.take(size);
  packet.coefficients.assign(coeffs.begin(), coeffs.end());
  const auto len = r.u16();
  auto payload = r.take(len);
  packet.payload.assign(payload.begin(), payload.end());
  if (!r.done()) throw InvalidInput("trailing bytes after coded packet");
  return packet;
}

Encoder::Encoder(std::uint32_t generation_id, std::vector<Bytes> packets)
    : generation_id_(generation_id), packets_(std::move(packets)) {
  if (packets_.empty()) throw InvalidInput("a generation needs at least one packet");
  if (packets_.size() > kMaxField16)
    throw InvalidInput(fmt::format("generation of {} packets exceeds {}", packets_.size(), kMaxField16));
  payload_size_ = packets_.front().size();
  if (payload_size_ > kMaxField16)
    throw InvalidInput(fmt::format("payload of {} bytes exceeds {}", payload_size_, kMaxField16));
  for (std::size_t m = 0; m < packets_.size(); ++m)
    if (packets_[m].size() != payload_size_)
      throw InvalidInput(fmt::format("packet {} has {} bytes, expected {}", m, packets_[m].size(),
                                     payload_size_));
}

CodedPacket Encoder::encode(Rng& rng) const {
  Bytes coefficients(packets_.size());
  bool nonzero = false;
  while (!nonzero) {
    for (auto& c : coefficients) {
      c = uniform_byte(rng);
      nonzero = nonzero || c != 0;
    }
  }
  return combine(coefficients);
}

CodedPacket Encoder::combine(std::span<const std::uint8_t> coefficients) const {
  if (coefficients.size() != packets_.size())
    throw InvalidInput(fmt::format("{} coefficients for a generation of {}", coefficients.size(),
                                   packets_.size()));
  CodedPacket out;
  out.generation_id = generation_id_;
  out.coefficients.assign(coefficients.begin(), coefficients.end());
  out.payload.assign(payload_size_, 0);
  for (std::size_t m = 0; m < packets_.size(); ++m)
    gf256::mul_add_region(out.payload, packets_[m], coefficients[m]);
  return out;
}

CodedPacket Encoder::systematic(std::size_t index) const {
  if (index >= packets_.size()) throw InvalidInput("systematic index out of range");
  Bytes coefficients(packets_.size(), 0);
  coefficients[index] = 1;
  return combine(coefficients);
}

Decoder::Decoder(std::uint32_t generation_id, std::size_t generation_size)
    : generation_id_(generation_id),
      size_(generation_size),
      coeffs_(generation_size),
      payloads_(generation_size),
      has_row_(generation_size, false) {
  if (generation_size == 0) throw InvalidInput("a generation needs at least one packet");
}

Reception Decoder::receive(const CodedPacket& packet) {
  if (packet.generation_id != generation_id_)
    throw InvalidInput(fmt::format("packet of generation {} delivered to decoder of generation {}",
                                   packet.generation_id, generation_id_));
  if (packet.coefficients.size() != size_)
    throw InvalidInput(fmt::format("packet has {} coefficients, generation size is {}",
                                   packet.coefficients.size(), size_));
  if (have_payload_size_ && packet.payload.size() != payload_size_)
    throw InvalidInput(fmt::format("payload of {} bytes, generation uses {}", packet.payload.size(),
                                   payload_size_));

  Bytes row = packet.coefficients;
  Bytes data = packet.payload;
  for (std::size_t m = 0; m < size_; ++m) {
    if (row[m] == 0 || !has_row_[m]) continue;
    const auto c = row[m];
    gf256::mul_add_region(row, coeffs_[m], c);
    gf256::mul_add_region(data, payloads_[m], c);
  }
  const auto pivot = std::find_if(row.begin(), row.end(), [](auto v) { return v != 0; });
  if (pivot == row.end()) return Reception::redundant;

  const auto p = static_cast<std::size_t>(pivot - row.begin());
  const auto scale = gf256::inv(*pivot);
  gf256::scale_region(row, scale);
  gf256::scale_region(data, scale);

  // Clear the new pivot column from existing rows to stay fully reduced.
  for (std::size_t m = 0; m < size_; ++m) {
    if (!has_row_[m] || coeffs_[m][p] == 0) continue;
    const auto c = coeffs_[m][p];
    gf256::mul_add_region(coeffs_[m], row, c);
    gf256::mul_add_region(payloads_[m], data, c);
  }
  coeffs_[p] = std::move(row);
  payloads_[p] = std::move(data);
  has_row_[p] = true;
  if (!have_payload_size_) {
    payload_size_ = packet.payload.size();
    have_payload_size_ = true;
  }
  ++rank_;
  return Reception::innovative;
}

std::vector<bool> Decoder::seen() const { return has_row_; }

std::vector<Bytes> Decoder::decode_all() const {
  if (!complete())
    throw NotReadyError(fmt::format("generation {} needs {} more degrees of freedom",
                                    generation_id_, dof_needed()),
                        dof_needed());
  return payloads_;
}

std::vector<Encoder> segment_stream(std::span<const std::uint8_t> data, std::size_t block_packets,
                                    std::size_t segment_size, std::uint32_t first_id) {
  if (block_packets == 0 || segment_size == 0)
    throw InvalidInput("block size and segment size must be positive");
  std::vector<Encoder> out;
  const std::size_t block_bytes = block_packets * segment_size;
  std::uint32_t id = first_id;
  for (std::size_t off = 0; off < data.size() || (off == 0 && data.empty()); off += block_bytes) {
    std::vector<Bytes> packets(block_packets, Bytes(segment_size, 0));
    for (std::size_t m = 0; m < block_packets; ++m) {
      const auto start = off + m * segment_size;
      if (start >= data.size()) break;
      const auto n = std::min(segment_size, data.size() - start);
      std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(start), n, packets[m].begin());
    }
    out.emplace_back(id++, std::move(packets));
    if (data.empty()) break;
  }
  return out;
}

Bytes reassemble(std::span<const std::vector<Bytes>> generations, std::size_t length) {
  Bytes out;
  out.reserve(length);
  for (const auto& gen : generations)
    for (const auto& packet : gen) {
      if (out.size() >= length) break;
      const auto n = std::min(packet.size(), length - out.size());
      out.insert(out.end(), packet.begin(), packet.begin() + static_cast<std::ptrdiff_t>(n));
    }
  if (out.size() != length)
    throw InvalidInput(fmt::format("generations hold {} bytes, {} requested", out.size(), length));
  return out;
}

std::vector<CodedPacket> code_window(std::uint32_t window_id, std::span<const Bytes> window,
                                     std::size_t count, Rng& rng) {
  const Encoder encoder(window_id, std::vector<Bytes>(window.begin(), window.end()));
  std::vector<CodedPacket> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(encoder.encode(rng));
  return out;
}

}  // namespace mpnc
