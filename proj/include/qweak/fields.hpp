// Copyright 2026 The qweak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <array>
#include <cstdint>

namespace qweak {

/// A point of a 1D or 2D problem domain; unused coordinates stay 0.
using Coord = std::array<double, 2>;

/// Which field quantities an evaluation site has to provide.
class FieldNeeds {
  public:
    enum Bit : std::uint8_t {
        kValue = 1U << 0,
        kD1X = 1U << 1,
        kD1Y = 1U << 2,
        kD2X = 1U << 3,
        kD2Y = 1U << 4,
    };

    constexpr FieldNeeds() = default;
    constexpr FieldNeeds(std::uint8_t bits) : bits_(bits) {} // NOLINT

    [[nodiscard]] static constexpr FieldNeeds value() { return {kValue}; }
    [[nodiscard]] static constexpr FieldNeeds first(int dim) {
        return {static_cast<std::uint8_t>(dim == 0 ? kD1X : kD1Y)};
    }
    [[nodiscard]] static constexpr FieldNeeds second(int dim) {
        return {static_cast<std::uint8_t>(dim == 0 ? kD2X : kD2Y)};
    }

    [[nodiscard]] constexpr bool has(std::uint8_t bit) const {
        return (bits_ & bit) != 0;
    }
    [[nodiscard]] constexpr bool needs_first(int dim) const {
        return has(dim == 0 ? kD1X : kD1Y);
    }
    [[nodiscard]] constexpr bool needs_second(int dim) const {
        return has(dim == 0 ? kD2X : kD2Y);
    }
    /// Highest input-derivative order needed along `dim` (0 if none).
    [[nodiscard]] constexpr int order(int dim) const {
        if (needs_second(dim)) {
            return 2;
        }
        return needs_first(dim) ? 1 : 0;
    }
    [[nodiscard]] constexpr std::uint8_t bits() const { return bits_; }

    constexpr FieldNeeds &operator|=(FieldNeeds other) {
        bits_ = static_cast<std::uint8_t>(bits_ | other.bits_);
        return *this;
    }
    friend constexpr FieldNeeds operator|(FieldNeeds a, FieldNeeds b) {
        a |= b;
        return a;
    }
    friend constexpr bool operator==(FieldNeeds, FieldNeeds) = default;

  private:
    std::uint8_t bits_ = kValue;
};

/// Trial-function value and input derivatives at one point. Also used for
/// cotangents (d loss / d quantity) with the same layout.
struct FieldBundle {
    double f = 0.0;
    std::array<double, 2> d1{0.0, 0.0};
    std::array<double, 2> d2{0.0, 0.0};

    FieldBundle &operator+=(const FieldBundle &o) {
        f += o.f;
        for (int d = 0; d < 2; ++d) {
            d1[d] += o.d1[d];
            d2[d] += o.d2[d];
        }
        return *this;
    }
    [[nodiscard]] bool is_zero() const {
        return f == 0.0 && d1[0] == 0.0 && d1[1] == 0.0 && d2[0] == 0.0 &&
               d2[1] == 0.0;
    }
};

} // namespace qweak
