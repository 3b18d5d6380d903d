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

#include <benchmark/benchmark.h>

#include "mpnc/coding.hpp"
#include "mpnc/gf256.hpp"

namespace {

std::vector<mpnc::Bytes> generation(std::size_t k, std::size_t len) {
  mpnc::Rng rng(1);
  std::vector<mpnc::Bytes> g(k, mpnc::Bytes(len));
  for (auto& p : g)
    for (auto& b : p) b = mpnc::uniform_byte(rng);
  return g;
}

void MulAddRegion(benchmark::State& state) {
  std::vector<std::uint8_t> dst(state.range(0), 3), src(state.range(0), 7);
  for (auto _ : state) {
    mpnc::gf256::mul_add_region(dst, src, 0x53);
    benchmark::DoNotOptimize(dst.data());
  }
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(MulAddRegion)->Range(64, 1 << 14);

void Encode(benchmark::State& state) {
  const mpnc::Encoder enc(0, generation(state.range(0), 1350));
  mpnc::Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(enc.encode(rng));
  state.SetBytesProcessed(state.iterations() * state.range(0) * 1350);
}
BENCHMARK(Encode)->RangeMultiplier(2)->Range(4, 64);

void DecodeGeneration(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const mpnc::Encoder enc(0, generation(k, 1350));
  mpnc::Rng rng(3);
  std::vector<mpnc::CodedPacket> pkts;
  for (std::size_t n = 0; n < k + 4; ++n) pkts.push_back(enc.encode(rng));
  for (auto _ : state) {
    mpnc::Decoder dec(0, k);
    for (const auto& p : pkts) {
      if (dec.complete()) break;
      dec.receive(p);
    }
    benchmark::DoNotOptimize(dec.decode_all());
  }
  state.SetBytesProcessed(state.iterations() * state.range(0) * 1350);
}
BENCHMARK(DecodeGeneration)->RangeMultiplier(2)->Range(4, 64);

}  // namespace
