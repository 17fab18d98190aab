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

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wsim/state.hpp"

namespace wsim {

/// A linear substitution on creation operators. Each listed input mode is
/// replaced by the stored superposition of output modes; every unlisted
/// polarized mode passes through unchanged.
struct ModeMap {
    std::string name;
    std::map<PolarizedMode, std::vector<std::pair<PolarizedMode, Complex>>> columns;
    bool unitary = true;
};

namespace detail {

inline void require_port_labels(const std::string& element, const std::string& m, const std::string& n,
                                const std::string& mp, const std::string& np) {
    if (m == n || mp == np) {
        throw std::invalid_argument(element + ": input ports and output ports must be distinct");
    }
    const bool in_place = (m == mp && n == np);
    const bool disjoint = (m != mp && m != np && n != mp && n != np);
    if (!in_place && !disjoint) {
        throw std::invalid_argument(element + ": port labels must be all distinct unless the map is in-place");
    }
}

inline void add_column(ModeMap& map, const PolarizedMode& in,
                       std::vector<std::pair<PolarizedMode, Complex>> images) {
    // Exact-zero entries (theta = 0 or pi/2) are dropped at construction.
    std::erase_if(images, [](const auto& e) { return e.second == Complex{}; });
    map.columns[in] = std::move(images);
}

}  // namespace detail

/// Beam splitter with transmittance cos(theta) and reflectance sin(theta),
/// acting identically on both polarizations:
///
///   a^dag_(m,p) -> cos(theta) a^dag_(m',p) + sin(theta) a^dag_(n',p)
///   a^dag_(n,p) -> cos(theta) a^dag_(n',p) - sin(theta) a^dag_(m',p)
///
/// The minus sign sits on the reflection of the second input port. This
/// placement is pinned by the staged acceptance checks; see the tables in
/// reference.hpp. Negative theta inverts the map, which keeps the
/// self-inverse identity bs(theta) . bs(-theta) testable.
inline ModeMap beam_splitter_map(double theta, std::pair<std::string, std::string> in,
                                 std::pair<std::string, std::string> out) {
    constexpr double half_pi = std::numbers::pi / 2;
    if (!(theta >= -half_pi && theta <= half_pi)) {
        throw std::invalid_argument("beam_splitter_map: theta must lie in [-pi/2, pi/2]");
    }
    detail::require_port_labels("beam_splitter_map", in.first, in.second, out.first, out.second);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    ModeMap map;
    map.name = "bs(" + in.first + "," + in.second + "->" + out.first + "," + out.second + ")";
    map.unitary = true;
    for (Polarization p : {Polarization::H, Polarization::V}) {
        detail::add_column(map, {in.first, p}, {{{out.first, p}, c}, {{out.second, p}, s}});
        detail::add_column(map, {in.second, p}, {{{out.second, p}, c}, {{out.first, p}, -s}});
    }
    return map;
}

/// Polarizing beam splitter: horizontal polarization is transmitted,
/// vertical polarization is reflected into the opposite output port. No
/// reflection phase is applied.
inline ModeMap pbs_map(std::pair<std::string, std::string> in, std::pair<std::string, std::string> out) {
    detail::require_port_labels("pbs_map", in.first, in.second, out.first, out.second);
    ModeMap map;
    map.name = "pbs(" + in.first + "," + in.second + "->" + out.first + "," + out.second + ")";
    map.unitary = true;
    detail::add_column(map, {in.first, Polarization::H}, {{{out.first, Polarization::H}, 1.0}});
    detail::add_column(map, {in.second, Polarization::H}, {{{out.second, Polarization::H}, 1.0}});
    detail::add_column(map, {in.first, Polarization::V}, {{{out.second, Polarization::V}, 1.0}});
    detail::add_column(map, {in.second, Polarization::V}, {{{out.first, Polarization::V}, 1.0}});
    return map;
}

/// Mirror: a path relabeling with unit coefficient (phase +1).
inline ModeMap mirror_map(const std::string& mode, const std::string& out) {
    ModeMap map;
    map.name = "mirror(" + mode + "->" + out + ")";
    map.unitary = true;
    detail::add_column(map, {mode, Polarization::H}, {{{out, Polarization::H}, 1.0}});
    detail::add_column(map, {mode, Polarization::V}, {{{out, Polarization::V}, 1.0}});
    return map;
}

/// Substitutes every creation operator in every monomial by its image and
/// expands the products, merging like terms. Requires the monomial
/// convention; substitution on Fock amplitudes would need factorial
/// rescaling per term.
inline StateVector apply_map(const StateVector& state, const ModeMap& map) {
    if (state.convention() != Convention::Monomial) {
        throw std::invalid_argument("apply_map requires the monomial convention; convert with to_monomial()");
    }
    static const std::vector<std::pair<PolarizedMode, Complex>> kNoImages;
    StateVector out(Convention::Monomial);
    for (const auto& [occ, coeff] : state.terms()) {
        // Distribute one operator at a time, merging after each step. The
        // intermediate size is bounded by (output modes)^(photons).
        std::map<Occupation, Complex> poly{{Occupation{}, coeff}};
        for (const auto& [mode, count] : occ) {
            auto it = map.columns.find(mode);
            const bool identity = (it == map.columns.end());
            const auto& images = identity ? kNoImages : it->second;
            for (int k = 0; k < count; ++k) {
                std::map<Occupation, Complex> next;
                for (const auto& [partial, pc] : poly) {
                    if (identity) {
                        Occupation grown = partial;
                        grown[mode] += 1;
                        next[std::move(grown)] += pc;
                    } else {
                        for (const auto& [target, tc] : images) {
                            Occupation grown = partial;
                            grown[target] += 1;
                            next[std::move(grown)] += pc * tc;
                        }
                    }
                }
                poly = std::move(next);
            }
        }
        for (const auto& [result_occ, rc] : poly) {
            out.add_term(result_occ, rc);
        }
    }
    out.prune();
    return out;
}

/// Deletes every term carrying a photon of the orthogonal polarization in
/// the given spatial mode. Works on occupations only, so either convention
/// is accepted. Not norm preserving; the result is returned unnormalized.
inline StateVector polarizer_filter(const StateVector& state, const std::string& mode, Polarization orientation) {
    const PolarizedMode blocked{mode, orthogonal(orientation)};
    StateVector out(state.convention());
    for (const auto& [occ, coeff] : state.terms()) {
        if (occ.count(blocked) == 0) {
            out.add_term(occ, coeff);
        }
    }
    return out;
}

struct UnitaryReport {
    double max_deviation = 0.0;
    bool pass = false;
};

/// Builds the dense matrix of the substitution over the involved polarized
/// modes (rows: all output modes, columns: the explicitly mapped inputs)
/// and reports max |(U^dag U - I)_ij|. Pass threshold 1e-12.
inline UnitaryReport check_unitary(const ModeMap& map) {
    std::vector<const std::vector<std::pair<PolarizedMode, Complex>>*> cols;
    std::map<PolarizedMode, int> row_index;
    for (const auto& [in, images] : map.columns) {
        cols.push_back(&images);
        for (const auto& [target, coeff] : images) {
            row_index.emplace(target, 0);
        }
    }
    int next = 0;
    for (auto& [mode, idx] : row_index) {
        idx = next++;
    }
    const std::size_t n_in = cols.size();
    const std::size_t n_out = row_index.size();
    std::vector<std::vector<Complex>> m(n_out, std::vector<Complex>(n_in, Complex{}));
    for (std::size_t j = 0; j < n_in; ++j) {
        for (const auto& [target, coeff] : *cols[j]) {
            m[row_index[target]][j] += coeff;
        }
    }
    UnitaryReport report;
    for (std::size_t i = 0; i < n_in; ++i) {
        for (std::size_t j = 0; j < n_in; ++j) {
            Complex gram{};
            for (std::size_t r = 0; r < n_out; ++r) {
                gram += std::conj(m[r][i]) * m[r][j];
            }
            const double dev = std::abs(gram - (i == j ? Complex{1.0} : Complex{}));
            report.max_deviation = std::max(report.max_deviation, dev);
        }
    }
    report.pass = report.max_deviation <= 1e-12;
    return report;
}

}  // namespace wsim
