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
#include <cstdio>
#include <string>
#include <vector>

#include "wsim/state.hpp"

// Hand-maintained closed-form expansions of every stage of the four-photon
// W-state scheme. They pin the expected term structure of the staged run.
//
// Two terms of the psi2/psi3 tables (the cos(2 theta) sin(theta)/sqrt(2)
// pair) carry a plus sign as tabulated, while the direct operator expansion
// yields a minus sign for both. The tables keep the tabulated sign: the
// verification pass diffs the simulated stage against these tables and
// reports the disagreement rather than silently correcting either side.
// The affected terms leave one photon on an undetected exit path, so they
// can never fire a four-fold coincidence; the sign has no effect on the
// W-state output or the success probability.

namespace wsim::reference {

namespace detail {

inline StateVector from_terms(std::vector<FockTerm> terms) {
    StateVector s(Convention::Fock);
    for (const FockTerm& t : terms) {
        s.add_term(t.occ, t.coeff);
    }
    s.prune();
    return s;
}

}  // namespace detail

/// Stage after the EPR pair passed PBS1/PBS2:
/// (|H>b|V>c + |V>a|H>d)/sqrt(2), with the two injected photons still
/// waiting on e and f as spectators.
inline StateVector psi1() {
    const double r = 1.0 / std::sqrt(2.0);
    return detail::from_terms({
        {{{mode_h("b"), 1}, {mode_v("c"), 1}, {mode_h("e"), 1}, {mode_h("f"), 1}}, r},
        {{{mode_v("a"), 1}, {mode_h("d"), 1}, {mode_h("e"), 1}, {mode_h("f"), 1}}, r},
    });
}

/// Stage after the two-photon injection at BS1/BS2 (paths a..f).
inline StateVector psi2(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double c2 = std::cos(2.0 * theta);
    const double r = 1.0 / std::sqrt(2.0);
    return detail::from_terms({
        {{{mode_h("b"), 2}, {mode_v("c"), 1}, {mode_h("d"), 1}}, c * s * s},
        {{{mode_v("a"), 1}, {mode_h("b"), 1}, {mode_h("d"), 2}}, c * s * s},

        {{{mode_h("b"), 1}, {mode_v("c"), 1}, {mode_h("e"), 1}, {mode_h("f"), 1}}, c2 * c * r},
        {{{mode_v("a"), 1}, {mode_h("d"), 1}, {mode_h("e"), 1}, {mode_h("f"), 1}}, c2 * c * r},

        // Tabulated as +; the direct expansion gives -. See the file comment.
        {{{mode_h("b"), 1}, {mode_v("c"), 1}, {mode_h("d"), 1}, {mode_h("e"), 1}}, c2 * s * r},
        {{{mode_v("a"), 1}, {mode_h("b"), 1}, {mode_h("d"), 1}, {mode_h("f"), 1}}, c2 * s * r},

        {{{mode_v("c"), 1}, {mode_h("e"), 2}, {mode_h("f"), 1}}, c * c * s},
        {{{mode_v("a"), 1}, {mode_h("e"), 1}, {mode_h("f"), 2}}, c * c * s},
        {{{mode_h("b"), 2}, {mode_v("c"), 1}, {mode_h("f"), 1}}, -c * c * s},
        {{{mode_v("a"), 1}, {mode_h("d"), 2}, {mode_h("e"), 1}}, -c * c * s},

        {{{mode_v("c"), 1}, {mode_h("d"), 1}, {mode_h("e"), 2}}, -c * s * s},
        {{{mode_v("a"), 1}, {mode_h("b"), 1}, {mode_h("f"), 2}}, -c * s * s},
    });
}

/// Stage after PBS3/PBS4 recombined the branches onto paths 1 and 2.
inline StateVector psi3(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double c2 = std::cos(2.0 * theta);
    const double r = 1.0 / std::sqrt(2.0);
    return detail::from_terms({
        {{{mode_h("1"), 2}, {mode_v("2"), 1}, {mode_h("2"), 1}}, c * s * s},
        {{{mode_v("1"), 1}, {mode_h("1"), 1}, {mode_h("2"), 2}}, c * s * s},

        {{{mode_h("1"), 1}, {mode_v("2"), 1}, {mode_h("e"), 1}, {mode_h("f"), 1}}, c2 * c * r},
        {{{mode_v("1"), 1}, {mode_h("2"), 1}, {mode_h("e"), 1}, {mode_h("f"), 1}}, c2 * c * r},

        // Tabulated as +; the direct expansion gives -. See the file comment.
        {{{mode_h("1"), 1}, {mode_v("2"), 1}, {mode_h("2"), 1}, {mode_h("e"), 1}}, c2 * s * r},
        {{{mode_v("1"), 1}, {mode_h("1"), 1}, {mode_h("2"), 1}, {mode_h("f"), 1}}, c2 * s * r},

        {{{mode_v("2"), 1}, {mode_h("e"), 2}, {mode_h("f"), 1}}, c * c * s},
        {{{mode_v("1"), 1}, {mode_h("e"), 1}, {mode_h("f"), 2}}, c * c * s},
        {{{mode_h("1"), 2}, {mode_v("2"), 1}, {mode_h("f"), 1}}, -c * c * s},
        {{{mode_v("1"), 1}, {mode_h("2"), 2}, {mode_h("e"), 1}}, -c * c * s},

        {{{mode_v("2"), 1}, {mode_h("2"), 1}, {mode_h("e"), 2}}, -c * s * s},
        {{{mode_v("1"), 1}, {mode_h("1"), 1}, {mode_h("f"), 2}}, -c * s * s},
    });
}

/// The four-fold coincidence part of the detector-stage state: four terms,
/// one V photon among the detectors, common amplitude
/// cos(theta) sin^2(theta) / (2 sqrt 2).
inline StateVector psi4_coincidence(double theta) {
    const double a = std::cos(theta) * std::sin(theta) * std::sin(theta) / (2.0 * std::sqrt(2.0));
    return detail::from_terms({
        {{{mode_h("1"), 1}, {mode_h("3"), 1}, {mode_h("2"), 1}, {mode_v("4"), 1}}, a},
        {{{mode_h("1"), 1}, {mode_h("3"), 1}, {mode_v("2"), 1}, {mode_h("4"), 1}}, a},
        {{{mode_v("1"), 1}, {mode_h("3"), 1}, {mode_h("2"), 1}, {mode_h("4"), 1}}, a},
        {{{mode_h("1"), 1}, {mode_v("3"), 1}, {mode_h("2"), 1}, {mode_h("4"), 1}}, a},
    });
}

/// Conditional state of the polarizer variant: the three-photon W over
/// detectors 3,2,4 with the surviving horizontal photon on detector 1.
inline StateVector w3_conditional() {
    const double a = 1.0 / std::sqrt(3.0);
    return detail::from_terms({
        {{{mode_h("1"), 1}, {mode_h("3"), 1}, {mode_h("2"), 1}, {mode_v("4"), 1}}, a},
        {{{mode_h("1"), 1}, {mode_h("3"), 1}, {mode_v("2"), 1}, {mode_h("4"), 1}}, a},
        {{{mode_h("1"), 1}, {mode_v("3"), 1}, {mode_h("2"), 1}, {mode_h("4"), 1}}, a},
    });
}

/// Success probability of the four-fold coincidence in closed form.
inline double success_probability_closed_form(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return c * c * s * s * s * s / 2.0;
}

/// Splitter angle maximizing the success probability: cos(theta) = 1/sqrt(3).
inline double optimal_theta() {
    return std::acos(1.0 / std::sqrt(3.0));
}

/// Maximal success probability, 2/27.
inline double optimal_probability() {
    return 2.0 / 27.0;
}

/// One line per ket whose amplitudes differ by more than tol, plus lines for
/// kets present on only one side. Empty when the states agree.
inline std::vector<std::string> term_diff(const StateVector& computed, const StateVector& expected, double tol) {
    std::vector<std::string> notes;
    char buf[160];
    for (const auto& [occ, want] : expected.terms()) {
        const Complex got = computed.amplitude(occ);
        if (std::abs(got - want) > tol) {
            std::snprintf(buf, sizeof(buf), "%s: expected %+.6g%+.6gi, computed %+.6g%+.6gi",
                          format_ket(occ).c_str(), want.real(), want.imag(), got.real(), got.imag());
            notes.emplace_back(buf);
        }
    }
    for (const auto& [occ, got] : computed.terms()) {
        if (expected.terms().count(occ) == 0 && std::abs(got) > tol) {
            std::snprintf(buf, sizeof(buf), "%s: unexpected term with amplitude %+.6g%+.6gi",
                          format_ket(occ).c_str(), got.real(), got.imag());
            notes.emplace_back(buf);
        }
    }
    return notes;
}

/// Largest amplitude deviation over the union of both term sets.
inline double max_amplitude_deviation(const StateVector& computed, const StateVector& expected) {
    double dev = 0.0;
    for (const auto& [occ, want] : expected.terms()) {
        dev = std::max(dev, std::abs(computed.amplitude(occ) - want));
    }
    for (const auto& [occ, got] : computed.terms()) {
        if (expected.terms().count(occ) == 0) {
            dev = std::max(dev, std::abs(got));
        }
    }
    return dev;
}

}  // namespace wsim::reference
