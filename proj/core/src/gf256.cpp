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

#include "mpnc/gf256.hpp"

#include <cassert>

#include "mpnc/errors.hpp"

namespace mpnc {
namespace {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
  // Full product table: 64 KiB, lets region ops index one row per scalar.
  std::array<std::array<std::uint8_t, 256>, 256> mul{};

  Tables() {
    unsigned x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = static_cast<std::uint8_t>(x);
      log[x] = static_cast<std::uint8_t>(i);
      x <<= 1;
      if (x & 0x100) x ^= Gf256::kPolynomial;
    }
    for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
    for (int a = 1; a < 256; ++a)
      for (int b = 1; b < 256; ++b) mul[a][b] = exp[log[a] + log[b]];
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

Gf256 operator*(Gf256 a, Gf256 b) noexcept { return Gf256(gf256::mul(a.value(), b.value())); }

Gf256 operator/(Gf256 a, Gf256 b) { return a * b.inverse(); }

Gf256 Gf256::inverse() const { return Gf256(gf256::inv(value_)); }

namespace gf256 {

std::uint8_t mul(std::uint8_t a, std::uint8_t b) noexcept { return tables().mul[a][b]; }

std::uint8_t inv(std::uint8_t a) {
  if (a == 0) throw InvalidInput("zero has no multiplicative inverse in GF(2^8)");
  const auto& t = tables();
  return t.exp[255 - t.log[a]];
}

void mul_add_region(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t c) {
  assert(dst.size() == src.size());
  if (c == 0) return;
  if (c == 1) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
    return;
  }
  const auto& row = tables().mul[c];
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= row[src[i]];
}

void scale_region(std::span<std::uint8_t> dst, std::uint8_t c) {
  if (c == 1) return;
  const auto& row = tables().mul[c];
  for (auto& v : dst) v = row[v];
}

}  // namespace gf256
}  // namespace mpnc
