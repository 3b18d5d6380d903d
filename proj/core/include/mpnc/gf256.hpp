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

#include <array>
#include <cstdint>
#include <span>

namespace mpnc {

/// Element of GF(2^8) with primitive polynomial x^8 + x^4 + x^3 + x^2 + 1
/// (0x11d); the generator is x (= 2).
class Gf256 {
 public:
  static constexpr std::uint16_t kPolynomial = 0x11d;

  constexpr Gf256() = default;
  constexpr explicit Gf256(std::uint8_t v) : value_(v) {}

  constexpr std::uint8_t value() const noexcept { return value_; }
  constexpr bool is_zero() const noexcept { return value_ == 0; }

  friend constexpr Gf256 operator+(Gf256 a, Gf256 b) noexcept {
    return Gf256(static_cast<std::uint8_t>(a.value_ ^ b.value_));
  }
  friend constexpr Gf256 operator-(Gf256 a, Gf256 b) noexcept { return a + b; }
  friend Gf256 operator*(Gf256 a, Gf256 b) noexcept;
  /// Throws InvalidInput for b == 0.
  friend Gf256 operator/(Gf256 a, Gf256 b);
  friend constexpr bool operator==(Gf256, Gf256) = default;

  /// Multiplicative inverse; throws InvalidInput for zero.
  Gf256 inverse() const;

 private:
  std::uint8_t value_ = 0;
};

namespace gf256 {

std::uint8_t mul(std::uint8_t a, std::uint8_t b) noexcept;
std::uint8_t inv(std::uint8_t a);

/// dst[i] ^= c * src[i]. Spans must have equal length.
void mul_add_region(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t c);

/// dst[i] = c * dst[i].
void scale_region(std::span<std::uint8_t> dst, std::uint8_t c);

}  // namespace gf256
}  // namespace mpnc
