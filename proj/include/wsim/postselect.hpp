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

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsim/state.hpp"

namespace wsim {

/// Coincidence requirement: every listed detector mode must register
/// exactly required_count photons, summed over both polarizations.
/// Detectors are polarization-blind photon-number detectors.
struct CoincidencePattern {
    std::vector<std::string> detectors;
    int required_count = 1;
};

struct Projection {
    double probability = 0.0;
    StateVector conditional{Convention::Fock};
};

/// Restriction to terms whose detector photon counts equal the given
/// per-detector values. No normalization requirement on the input; the
/// probability is the squared norm of the restriction, which is an event
/// rate relative to however the caller normalized the state.
inline Projection project_counts(const StateVector& state, const std::vector<std::string>& detectors,
                                 const std::vector<int>& counts) {
    if (state.convention() != Convention::Fock) {
        throw std::invalid_argument("project_counts requires the Fock convention");
    }
    if (detectors.size() != counts.size()) {
        throw std::invalid_argument("project_counts: one count per detector required");
    }
    std::set<std::string> distinct(detectors.begin(), detectors.end());
    if (distinct.size() != detectors.size()) {
        throw std::invalid_argument("project_counts: detector modes must be distinct");
    }
    StateVector restricted(Convention::Fock);
    double prob = 0.0;
    for (const auto& [occ, amp] : state.terms()) {
        bool match = true;
        for (std::size_t i = 0; i < detectors.size() && match; ++i) {
            int seen = 0;
            for (Polarization p : {Polarization::H, Polarization::V}) {
                auto it = occ.find({detectors[i], p});
                if (it != occ.end()) {
                    seen += it->second;
                }
            }
            match = (seen == counts[i]);
        }
        if (match) {
            restricted.add_term(occ, amp);
            prob += std::norm(amp);
        }
    }
    Projection result;
    result.probability = prob;
    // Below kPruneEps^2 renormalization would only amplify float noise.
    if (prob >= kPruneEps * kPruneEps) {
        const double scale = 1.0 / std::sqrt(prob);
        for (const auto& [occ, amp] : restricted.terms()) {
            result.conditional.add_term(occ, amp * scale);
        }
    }
    return result;
}

/// Coincidence projection of a normalized state: probability of the pattern
/// and the renormalized conditional state. Patterns referencing modes absent
/// from every term are allowed; such terms simply fail the pattern.
inline Projection coincidence_project(const StateVector& state, const CoincidencePattern& pattern) {
    if (pattern.required_count < 1) {
        throw std::invalid_argument("coincidence_project: required_count must be >= 1");
    }
    const double n = norm(state);
    if (std::abs(n - 1.0) > 1e-9) {
        throw std::invalid_argument("coincidence_project requires a normalized state (norm within 1e-9 of 1)");
    }
    return project_counts(state, pattern.detectors,
                          std::vector<int>(pattern.detectors.size(), pattern.required_count));
}

/// Probability of every detector photon-count pattern, keyed by the count
/// tuple in detector order. Summing the values over all patterns of a
/// normalized state must give 1; the verification suite uses this as a
/// unitarity audit.
inline std::map<std::vector<int>, double> detector_count_distribution(const StateVector& state,
                                                                      const std::vector<std::string>& detectors) {
    if (state.convention() != Convention::Fock) {
        throw std::invalid_argument("detector_count_distribution requires the Fock convention");
    }
    std::map<std::vector<int>, double> dist;
    for (const auto& [occ, amp] : state.terms()) {
        std::vector<int> signature(detectors.size(), 0);
        for (std::size_t i = 0; i < detectors.size(); ++i) {
            for (Polarization p : {Polarization::H, Polarization::V}) {
                auto it = occ.find({detectors[i], p});
                if (it != occ.end()) {
                    signature[i] += it->second;
                }
            }
        }
        dist[signature] += std::norm(amp);
    }
    return dist;
}

/// The n-photon W state over the given modes: one vertical photon shared
/// evenly across n horizontally filled slots. Amplitudes are 1/2 for n = 4
/// and 1/sqrt(3) for n = 3.
inline StateVector w_state(int n, const std::vector<std::string>& modes) {
    if (n != 3 && n != 4) {
        throw std::invalid_argument("w_state supports n = 3 or n = 4");
    }
    if (static_cast<int>(modes.size()) != n) {
        throw std::invalid_argument("w_state: mode count must equal n");
    }
    std::set<std::string> distinct(modes.begin(), modes.end());
    if (static_cast<int>(distinct.size()) != n) {
        throw std::invalid_argument("w_state: modes must be distinct");
    }
    const double amp = n == 4 ? 0.5 : 1.0 / std::sqrt(3.0);
    StateVector s(Convention::Fock);
    for (const std::string& v_mode : modes) {
        Occupation occ;
        for (const std::string& m : modes) {
            occ[{m, m == v_mode ? Polarization::V : Polarization::H}] = 1;
        }
        s.add_term(occ, amp);
    }
    return s;
}

/// |<target|state>|^2 for normalized pure states.
inline double fidelity(const StateVector& state, const StateVector& target) {
    if (std::abs(norm(state) - 1.0) > 1e-9 || std::abs(norm(target) - 1.0) > 1e-9) {
        throw std::invalid_argument("fidelity requires normalized states (norm within 1e-9 of 1)");
    }
    return std::norm(inner_product(target, state));
}

}  // namespace wsim
