// Copyright 2026 The wsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wsim {

enum class Polarization : std::uint8_t { H, V };

inline char pol_char(Polarization p) {
    return p == Polarization::H ? 'H' : 'V';
}

inline Polarization pol_from_char(char c) {
    if (c == 'H') {
        return Polarization::H;
    }
    if (c == 'V') {
        return Polarization::V;
    }
    throw std::invalid_argument(std::string("invalid polarization '") + c + "', expected 'H' or 'V'");
}

inline Polarization orthogonal(Polarization p) {
    return p == Polarization::H ? Polarization::V : Polarization::H;
}

/// One bosonic creation-operator index: a spatial path plus a polarization.
///
/// Spatial labels are opaque strings so that paths can carry the names used
/// in a schematic ("a", "1", "e", ...). The ordering (spatial label first,
/// then H before V) makes occupation keys canonical.
struct PolarizedMode {
    std::string spatial;
    Polarization pol = Polarization::H;

    auto operator<=>(const PolarizedMode&) const = default;
};

inline PolarizedMode mode_h(std::string spatial) {
    return PolarizedMode{std::move(spatial), Polarization::H};
}

inline PolarizedMode mode_v(std::string spatial) {
    return PolarizedMode{std::move(spatial), Polarization::V};
}

}  // namespace wsim
