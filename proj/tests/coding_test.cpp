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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "mpnc/coding.hpp"
#include "mpnc/errors.hpp"
#include "mpnc/random.hpp"

namespace mpnc {
namespace {

std::uint8_t slow_mul(std::uint8_t a, std::uint8_t b) {
  unsigned acc = 0;
  unsigned x = a;
  for (unsigned y = b; y != 0; y >>= 1) {
    if (y & 1u) acc ^= x;
    x <<= 1;
    if (x & 0x100u) x ^= 0x11du;
  }
  return static_cast<std::uint8_t>(acc);
}

std::uint8_t slow_inv(std::uint8_t a) {
  for (unsigned b = 1; b < 256; ++b)
    if (slow_mul(a, static_cast<std::uint8_t>(b)) == 1) return static_cast<std::uint8_t>(b);
  return 0;
}

// Rank of a full matrix by textbook elimination with the slow field ops.
std::size_t batch_rank(std::vector<Bytes> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t r = rank;
    while (r < rows.size() && rows[r][c] == 0) ++r;
    if (r == rows.size()) continue;
    std::swap(rows[r], rows[rank]);
    const auto f = slow_inv(rows[rank][c]);
    for (auto& v : rows[rank]) v = slow_mul(v, f);
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == rank || rows[o][c] == 0) continue;
      const auto s = rows[o][c];
      for (std::size_t k = 0; k < cols; ++k) rows[o][k] ^= slow_mul(s, rows[rank][k]);
    }
    ++rank;
  }
  return rank;
}

std::vector<Bytes> random_generation(std::size_t k, std::size_t len, Rng& rng) {
  std::vector<Bytes> g(k, Bytes(len));
  for (auto& p : g)
    for (auto& b : p) b = uniform_byte(rng);
  return g;
}

TEST(Encoder, SinglePacketIdentity) {
  const Encoder enc(3, {{9, 8, 7}});
  const std::vector<std::uint8_t> one{1};
  EXPECT_EQ(enc.combine(one).payload, (Bytes{9, 8, 7}));
  EXPECT_EQ(enc.systematic(0).payload, (Bytes{9, 8, 7}));
}

TEST(Encoder, PinnedRngMatchesElementwiseOracle) {
  const std::vector<Bytes> gen{{1, 2, 3, 4}, {0x10, 0x20, 0x30, 0x40}, {0xff, 0, 0xff, 0}, {5, 6, 7, 8}};
  const Encoder enc(1, gen);
  Rng rng(2024);
  Rng replay = rng;
  const auto pkt = enc.encode(rng);
  Bytes coeffs(4);
  for (auto& c : coeffs) c = uniform_byte(replay);
  ASSERT_EQ(pkt.coefficients, coeffs);
  Bytes want(4, 0);
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t b = 0; b < 4; ++b) want[b] ^= slow_mul(coeffs[m], gen[m][b]);
  EXPECT_EQ(pkt.payload, want);
  EXPECT_EQ(pkt.generation_id, 1u);
}

TEST(Encoder, NeverEmitsZeroCoefficients) {
  const Encoder enc(0, {{1}});
  Rng rng(5);
  // With one coefficient, 1 in 256 draws is zero; 5000 draws hit it many times.
  for (int i = 0; i < 5000; ++i) EXPECT_NE(enc.encode(rng).coefficients[0], 0);
}

TEST(Encoder, RejectsBadGenerations) {
  EXPECT_THROW(Encoder(0, {}), InvalidInput);
  EXPECT_THROW(Encoder(0, {{1, 2}, {3}}), InvalidInput);
  const Encoder enc(0, {{1}, {2}});
  const std::vector<std::uint8_t> three{1, 2, 3};
  EXPECT_THROW(enc.combine(three), InvalidInput);
  EXPECT_THROW(enc.systematic(2), InvalidInput);
}

TEST(Decoder, FirstAndDuplicatePackets) {
  Rng rng(1);
  const Encoder enc(7, random_generation(4, 10, rng));
  Decoder dec(7, 4);
  EXPECT_EQ(dec.dof_needed(), 4u);
  const auto pkt = enc.encode(rng);
  EXPECT_EQ(dec.receive(pkt), Reception::innovative);
  EXPECT_EQ(dec.rank(), 1u);
  EXPECT_EQ(dec.receive(pkt), Reception::redundant);
  EXPECT_EQ(dec.rank(), 1u);
}

TEST(Decoder, DofAccounting) {
  Rng rng(2);
  const Encoder enc(0, random_generation(8, 16, rng));
  Decoder dec(0, 8);
  EXPECT_EQ(dec.dof_needed(), 8u);
  for (std::size_t m = 0; m < 3; ++m) dec.receive(enc.systematic(m));
  EXPECT_EQ(dec.dof_needed(), 5u);
  for (std::size_t m = 3; m < 8; ++m) dec.receive(enc.systematic(m));
  EXPECT_EQ(dec.dof_needed(), 0u);
  EXPECT_TRUE(dec.complete());
}

TEST(Decoder, RankDeficientReportsMissingDof) {
  Rng rng(3);
  const Encoder enc(0, random_generation(5, 4, rng));
  Decoder dec(0, 5);
  while (dec.rank() < 4) dec.receive(enc.encode(rng));
  try {
    dec.decode_all();
    FAIL() << "expected NotReadyError";
  } catch (const NotReadyError& e) {
    EXPECT_EQ(e.missing_dof(), 1u);
  }
}

TEST(Decoder, RejectsForeignPackets) {
  Rng rng(4);
  const Encoder enc(1, random_generation(3, 4, rng));
  Decoder other_gen(2, 3);
  EXPECT_THROW(other_gen.receive(enc.encode(rng)), InvalidInput);
  Decoder other_size(1, 4);
  EXPECT_THROW(other_size.receive(enc.encode(rng)), InvalidInput);
  Decoder dec(1, 3);
  dec.receive(enc.encode(rng));
  auto odd = enc.encode(rng);
  odd.payload.push_back(0);
  EXPECT_THROW(dec.receive(odd), InvalidInput);
}

TEST(Decoder, SizeOneRoundTrip) {
  const Encoder enc(0, {{42, 43}});
  Rng rng(6);
  Decoder dec(0, 1);
  dec.receive(enc.encode(rng));
  EXPECT_EQ(dec.decode_all(), (std::vector<Bytes>{{42, 43}}));
}

TEST(Decoder, SeenTracksPivots) {
  const Encoder enc(0, {{1}, {2}, {3}});
  Decoder dec(0, 3);
  dec.receive(enc.systematic(1));
  EXPECT_EQ(dec.seen(), (std::vector<bool>{false, true, false}));
}

TEST(Decoder, RandomRoundTrips) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto k = 1 + rng() % 64;
    const auto len = 1 + rng() % 1350;
    const auto gen = random_generation(k, len, rng);
    const Encoder enc(static_cast<std::uint32_t>(trial), gen);
    Decoder dec(static_cast<std::uint32_t>(trial), k);
    while (!dec.complete()) dec.receive(enc.encode(rng));
    ASSERT_EQ(dec.decode_all(), gen);
  }
}

TEST(Decoder, RankAgreesWithBatchElimination) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto k = 2 + rng() % 6;
    const auto gen = random_generation(k, 3, rng);
    const Encoder enc(0, gen);
    Decoder dec(0, k);
    std::vector<Bytes> rows;
    for (std::size_t n = 0; n < k; ++n) {
      // Mix in dependent rows so rank deficiency actually occurs.
      CodedPacket pkt;
      if (!rows.empty() && rng() % 3 == 0) {
        Bytes c = rows[rng() % rows.size()];
        const auto s = static_cast<std::uint8_t>(1 + rng() % 255);
        for (auto& v : c) v = slow_mul(v, s);
        pkt = enc.combine(c);
      } else {
        pkt = enc.encode(rng);
      }
      const auto before = batch_rank(rows);
      rows.push_back(pkt.coefficients);
      const auto after = batch_rank(rows);
      EXPECT_EQ(dec.receive(pkt), after > before ? Reception::innovative : Reception::redundant);
      ASSERT_EQ(dec.rank(), after);
    }
  }
}

TEST(Decoder, FullRankProbabilityMeetsUniformMatrixBound) {
  constexpr int kTrials = 10000;
  constexpr std::size_t k = 16;
  double bound = 1.0;
  for (int m = 1; m <= 16; ++m) bound *= 1.0 - std::pow(256.0, -m);
  Rng rng(13);
  const Encoder enc(0, random_generation(k, 1, rng));
  int full = 0;
  for (int t = 0; t < kTrials; ++t) {
    Decoder dec(0, k);
    for (std::size_t n = 0; n < k; ++n) {
      CodedPacket pkt;
      pkt.generation_id = 0;
      pkt.coefficients.resize(k);
      for (auto& c : pkt.coefficients) c = uniform_byte(rng);
      pkt.payload = {0};
      dec.receive(pkt);
    }
    full += dec.complete() ? 1 : 0;
  }
  // bound ~ 0.99608; allow three binomial standard deviations.
  const double sd = std::sqrt(bound * (1 - bound) / kTrials);
  EXPECT_GE(static_cast<double>(full) / kTrials, bound - 3 * sd);
}

TEST(Decoder, DecodedOutputIsOrderIndependent) {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const auto k = 1 + rng() % 20;
    const auto gen = random_generation(k, 32, rng);
    const Encoder enc(9, gen);
    // Three logical sub-flows each contribute coded packets.
    std::vector<CodedPacket> pool;
    for (int flow = 0; flow < 3; ++flow)
      for (std::size_t n = 0; n < k; ++n) pool.push_back(enc.encode(rng));
    for (int order = 0; order < 4; ++order) {
      std::vector<std::size_t> idx(pool.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      Decoder dec(9, k);
      for (auto i : idx) dec.receive(pool[i]);
      ASSERT_EQ(dec.decode_all(), gen);
    }
  }
}

TEST(Decoder, RedundantReceptionsAreRare) {
  Rng rng(15);
  std::size_t redundant = 0;
  std::size_t total = 0;
  for (int t = 0; t < 2000; ++t) {
    const auto k = 1 + rng() % 32;
    const Encoder enc(0, random_generation(k, 2, rng));
    Decoder dec(0, k);
    for (std::size_t n = 0; n < k; ++n) redundant += dec.receive(enc.encode(rng)) == Reception::redundant;
    total += k;
  }
  EXPECT_LE(static_cast<double>(redundant) / static_cast<double>(total), 0.02);
}

TEST(Serialization, GoldenBytes) {
  CodedPacket pkt{0x01020304u, {0xaa, 0xbb}, {0xde, 0xad, 0xbe}};
  const Bytes golden{0x01, 0x02, 0x03, 0x04, 0x00, 0x02, 0xaa, 0xbb, 0x00, 0x03, 0xde, 0xad, 0xbe};
  EXPECT_EQ(serialize(pkt), golden);
  EXPECT_EQ(deserialize(golden), pkt);
}

TEST(Serialization, RoundTripAndMalformedInput) {
  Rng rng(16);
  for (int t = 0; t < 200; ++t) {
    const auto k = 1 + rng() % 64;
    const Encoder enc(static_cast<std::uint32_t>(rng()), random_generation(k, 1 + rng() % 1350, rng));
    const auto pkt = enc.encode(rng);
    const auto wire = serialize(pkt);
    ASSERT_EQ(wire.size(), 8 + k + pkt.payload.size());
    ASSERT_EQ(deserialize(wire), pkt);
    const std::span<const std::uint8_t> cut(wire.data(), wire.size() - 1);
    ASSERT_THROW(deserialize(cut), InvalidInput);
    auto longer = wire;
    longer.push_back(0);
    ASSERT_THROW(deserialize(longer), InvalidInput);
  }
  EXPECT_THROW(deserialize(Bytes{0, 0, 0}), InvalidInput);
}

TEST(Segmentation, StreamRoundTrip) {
  Rng rng(17);
  for (std::size_t len : {0u, 1u, 99u, 100u, 1000u, 4321u}) {
    Bytes data(len);
    for (auto& b : data) b = uniform_byte(rng);
    const auto gens = segment_stream(data, 4, 25, 10);
    ASSERT_FALSE(gens.empty());
    EXPECT_EQ(gens.front().generation_id(), 10u);
    std::vector<std::vector<Bytes>> decoded;
    for (const auto& enc : gens) {
      Decoder dec(enc.generation_id(), enc.size());
      while (!dec.complete()) dec.receive(enc.encode(rng));
      decoded.push_back(dec.decode_all());
    }
    EXPECT_EQ(reassemble(decoded, len), data);
  }
  EXPECT_THROW(segment_stream(Bytes{1}, 0, 10), InvalidInput);
}

TEST(TwoLayer, WindowCodingOverOuterSymbols) {
  Rng rng(18);
  const auto gen = random_generation(kDefaultBlockPackets, 100, rng);
  const Encoder outer(5, gen);
  Decoder outer_dec(5, kDefaultBlockPackets);
  std::uint32_t window_id = 0;
  // Each sub-flow window holds a handful of serialized outer symbols and
  // sends inner-coded packets over them; losses are absorbed by redundancy.
  while (!outer_dec.complete()) {
    std::vector<Bytes> window;
    for (int n = 0; n < 4; ++n) window.push_back(serialize(outer.encode(rng)));
    const auto coded = code_window(window_id, window, 6, rng);
    Decoder inner(window_id, window.size());
    for (const auto& c : coded)
      if (!bernoulli(rng, 0.3)) inner.receive(c);
    ++window_id;
    if (!inner.complete()) continue;
    for (const auto& sym : inner.decode_all()) outer_dec.receive(deserialize(sym));
  }
  EXPECT_EQ(outer_dec.decode_all(), gen);
}

}  // namespace
}  // namespace mpnc
