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
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsim/elements.hpp"
#include "wsim/postselect.hpp"
#include "wsim/state.hpp"

namespace wsim {

enum class ElementKind { BeamSplitter, Pbs, Mirror, Polarizer };

inline const char* element_kind_name(ElementKind kind) {
    switch (kind) {
        case ElementKind::BeamSplitter: return "bs";
        case ElementKind::Pbs: return "pbs";
        case ElementKind::Mirror: return "mirror";
        case ElementKind::Polarizer: return "polarizer";
    }
    return "?";
}

/// One placed optical element. Angles are radians internally; the file
/// format converts from degrees at the boundary.
struct Element {
    ElementKind kind = ElementKind::Mirror;
    double theta_rad = 0.0;                       // beam splitters only
    std::vector<std::string> in;                  // 1 label (mirror, polarizer) or 2 (bs, pbs)
    std::vector<std::string> out;                 // same arity; polarizer acts in place
    Polarization orientation = Polarization::H;   // polarizers only
};

/// Named capture point: snapshot the state after elements[0..after] ran.
struct Tap {
    int after = 0;
    std::string name;
};

/// An ordered element list over declared spatial modes, plus the input
/// state description and an optional coincidence pattern.
struct Circuit {
    std::vector<std::string> modes;
    std::vector<FockTerm> input;  // weighted product terms, Fock amplitudes
    std::vector<Element> elements;
    std::vector<Tap> taps;
    std::optional<CoincidencePattern> postselect;
};

class CircuitError : public std::runtime_error {
  public:
    explicit CircuitError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require_declared(const std::set<std::string>& declared, const std::string& label,
                             const std::string& where) {
    if (declared.count(label) == 0) {
        throw CircuitError("undeclared mode '" + label + "' referenced at " + where);
    }
}

}  // namespace detail

/// Structural validation; throws CircuitError naming the offending entity.
inline void validate(const Circuit& circuit) {
    std::set<std::string> declared;
    for (const std::string& label : circuit.modes) {
        if (!declared.insert(label).second) {
            throw CircuitError("duplicate mode declaration '" + label + "'");
        }
    }
    for (std::size_t i = 0; i < circuit.elements.size(); ++i) {
        const Element& e = circuit.elements[i];
        const std::string where = "elements[" + std::to_string(i) + "]";
        const std::size_t arity =
            (e.kind == ElementKind::BeamSplitter || e.kind == ElementKind::Pbs) ? 2 : 1;
        if (e.in.size() != arity || e.out.size() != arity) {
            throw CircuitError(where + ": " + element_kind_name(e.kind) + " takes " +
                               std::to_string(arity) + " input and output mode(s)");
        }
        for (const std::string& label : e.in) {
            detail::require_declared(declared, label, where + ".in");
        }
        for (const std::string& label : e.out) {
            detail::require_declared(declared, label, where + ".out");
        }
        if (e.kind == ElementKind::BeamSplitter) {
            constexpr double half_pi = std::numbers::pi / 2;
            if (!(e.theta_rad >= -half_pi && e.theta_rad <= half_pi)) {
                throw CircuitError(where + ": beam splitter angle outside [-90, 90] degrees");
            }
        }
        if (e.kind == ElementKind::Polarizer && e.in != e.out) {
            throw CircuitError(where + ": polarizer acts in place; out must equal in");
        }
    }
    int last_after = -1;
    std::set<std::string> tap_names;
    for (const Tap& tap : circuit.taps) {
        if (tap.after < 0 || tap.after >= static_cast<int>(circuit.elements.size())) {
            throw CircuitError("tap '" + tap.name + "' references element index " +
                               std::to_string(tap.after) + " out of range");
        }
        if (tap.after <= last_after) {
            throw CircuitError("tap '" + tap.name + "' is not strictly ordered after the previous tap");
        }
        last_after = tap.after;
        if (!tap_names.insert(tap.name).second) {
            throw CircuitError("duplicate tap name '" + tap.name + "'");
        }
    }
    for (std::size_t t = 0; t < circuit.input.size(); ++t) {
        for (const auto& [mode, count] : circuit.input[t].occ) {
            detail::require_declared(declared, mode.spatial, "input[" + std::to_string(t) + "]");
            if (count < 1) {
                throw CircuitError("input[" + std::to_string(t) + "]: photon counts must be >= 1");
            }
        }
    }
    if (circuit.postselect) {
        std::set<std::string> seen;
        for (const std::string& d : circuit.postselect->detectors) {
            detail::require_declared(declared, d, "postselect.detectors");
            if (!seen.insert(d).second) {
                throw CircuitError("postselect: duplicate detector '" + d + "'");
            }
        }
        if (circuit.postselect->required_count < 1) {
            throw CircuitError("postselect: count must be >= 1");
        }
    }
}

/// The substitution map of a routing element. Polarizers are not linear
/// substitutions and are dispatched separately by run_circuit.
inline ModeMap element_map(const Element& e) {
    switch (e.kind) {
        case ElementKind::BeamSplitter:
            return beam_splitter_map(e.theta_rad, {e.in[0], e.in[1]}, {e.out[0], e.out[1]});
        case ElementKind::Pbs:
            return pbs_map({e.in[0], e.in[1]}, {e.out[0], e.out[1]});
        case ElementKind::Mirror:
            return mirror_map(e.in[0], e.out[0]);
        case ElementKind::Polarizer:
            break;
    }
    throw std::invalid_argument("element_map: polarizer has no substitution map");
}

/// The Fock-convention state described by the circuit's input terms.
inline StateVector input_state(const Circuit& circuit) {
    StateVector s(Convention::Fock);
    for (const FockTerm& term : circuit.input) {
        s.add_term(term.occ, term.coeff);
    }
    return s;
}

struct RunResult {
    StateVector final_state{Convention::Fock};
    std::map<std::string, StateVector> taps;
};

/// Applies the elements in order, capturing Fock-convention snapshots at the
/// taps. The final state is returned before any coincidence projection;
/// projection is a separate call. With a polarizer in the element list the
/// final state is unnormalized by design.
inline RunResult run_circuit(const Circuit& circuit, const StateVector& input) {
    validate(circuit);
    const std::set<std::string> declared(circuit.modes.begin(), circuit.modes.end());
    for (const std::string& label : input.spatial_support()) {
        if (declared.count(label) == 0) {
            throw CircuitError("input state uses undeclared mode '" + label + "'");
        }
    }
    std::map<int, std::vector<std::string>> taps_after;
    for (const Tap& tap : circuit.taps) {
        taps_after[tap.after].push_back(tap.name);
    }
    RunResult result;
    StateVector state = input.to_monomial();
    for (std::size_t i = 0; i < circuit.elements.size(); ++i) {
        const Element& e = circuit.elements[i];
        if (e.kind == ElementKind::Polarizer) {
            state = polarizer_filter(state, e.in[0], e.orientation);
        } else {
            state = apply_map(state, element_map(e));
        }
        auto it = taps_after.find(static_cast<int>(i));
        if (it != taps_after.end()) {
            StateVector snapshot = state.to_fock();
            snapshot.prune();
            for (const std::string& name : it->second) {
                result.taps.emplace(name, snapshot);
            }
        }
    }
    result.final_state = state.to_fock();
    result.final_state.prune();
    return result;
}

// ---------------------------------------------------------------------------
// The four-photon W-state scheme.
//
// An EPR pair on paths 1 and 2 is split by PBS1/PBS2 into paths a,b (from 1)
// and c,d (from 2). Two horizontally polarized single photons enter on e and
// f and are mixed with b and d at BS1/BS2 (equal angle theta). PBS3/PBS4
// recombine the branches back onto paths 1 and 2, and the balanced splitters
// BS3/BS4 fan each branch out onto the detector pairs (1,3) and (2,4).
// Four mirrors fold the paths e, f, a and c between the stages.
//
// A four-fold coincidence (one photon in each of 1,3,2,4) projects the
// output onto the four-photon W state with probability
// cos^2(theta) sin^4(theta) / 2.
// ---------------------------------------------------------------------------

/// Detector readout order used when rendering coincidence terms.
inline const std::vector<std::string>& w4_readout_order() {
    static const std::vector<std::string> order{"1", "3", "2", "4"};
    return order;
}

/// (|H>1|V>2 + |V>1|H>2)/sqrt(2) x |H>e x |H>f, normalized, 4 photons.
inline StateVector w4_input_state() {
    StateVector epr(Convention::Fock);
    const double r = 1.0 / std::sqrt(2.0);
    epr.add_term({{mode_h("1"), 1}, {mode_v("2"), 1}}, r);
    epr.add_term({{mode_v("1"), 1}, {mode_h("2"), 1}}, r);
    StateVector single_e(Convention::Fock);
    single_e.add_term({{mode_h("e"), 1}}, 1.0);
    StateVector single_f(Convention::Fock);
    single_f.add_term({{mode_h("f"), 1}}, 1.0);
    return tensor(tensor(epr, single_e), single_f);
}

enum class W4Variant {
    Plain,         // four-photon W state on detectors 1,3,2,4
    PolarizerD1,   // horizontal polarizer in front of detector 1; three-photon W on 3,2,4
};

/// Builds the scheme at the given splitter angle. BS3/BS4 are fixed balanced
/// (pi/4): the uniform coincidence prefactor cos(theta)sin^2(theta)/(2 sqrt 2)
/// requires an even 1 -> (1,3) and 2 -> (2,4) split.
///
/// Path labels 1 and 2 are reused for the recombined branches after PBS3 and
/// PBS4; the source paths are empty from PBS1/PBS2 onward, so the reuse is
/// unambiguous. u1, u2 are the dark input ports of PBS1/PBS2 and x3, x4 the
/// dark exit ports of PBS3/PBS4.
inline Circuit build_w4_circuit(double theta_rad, W4Variant variant = W4Variant::Plain) {
    constexpr double half_pi = std::numbers::pi / 2;
    if (!(theta_rad >= 0.0 && theta_rad <= half_pi)) {
        throw std::invalid_argument("build_w4_circuit: theta must lie in [0, pi/2]");
    }
    Circuit circuit;
    circuit.modes = {"1", "2", "3", "4", "a", "b", "c", "d", "e", "f", "u1", "u2", "x3", "x4"};
    const StateVector input = w4_input_state();
    for (const auto& [occ, coeff] : input.terms()) {
        circuit.input.push_back({occ, coeff});
    }
    auto bs = [&](double theta, const std::string& m, const std::string& n, const std::string& mp,
                  const std::string& np) {
        circuit.elements.push_back({ElementKind::BeamSplitter, theta, {m, n}, {mp, np}, Polarization::H});
    };
    auto pbs = [&](const std::string& m, const std::string& n, const std::string& mp, const std::string& np) {
        circuit.elements.push_back({ElementKind::Pbs, 0.0, {m, n}, {mp, np}, Polarization::H});
    };
    auto mirror = [&](const std::string& m) {
        circuit.elements.push_back({ElementKind::Mirror, 0.0, {m}, {m}, Polarization::H});
    };

    pbs("1", "u1", "b", "a");   // 0: H of path 1 -> b, V -> a
    pbs("2", "u2", "d", "c");   // 1: H of path 2 -> d, V -> c
    mirror("e");                // 2: fold e into BS1
    mirror("f");                // 3: fold f into BS2
    bs(theta_rad, "b", "e", "b", "e");  // 4: two-photon injection, branch 1
    bs(theta_rad, "d", "f", "d", "f");  // 5: two-photon injection, branch 2
    mirror("a");                // 6: fold a into PBS3
    mirror("c");                // 7: fold c into PBS4
    pbs("b", "a", "1", "x3");   // 8: recombine branch 1
    pbs("d", "c", "2", "x4");   // 9: recombine branch 2
    bs(half_pi / 2, "1", "3", "1", "3");  // 10: detector split (1,3)
    bs(half_pi / 2, "2", "4", "2", "4");  // 11: detector split (2,4)

    circuit.taps = {{1, "psi1"}, {5, "psi2"}, {9, "psi3"}, {11, "psi4"}};

    if (variant == W4Variant::PolarizerD1) {
        circuit.elements.push_back({ElementKind::Polarizer, 0.0, {"1"}, {"1"}, Polarization::H});
    }
    circuit.postselect = CoincidencePattern{w4_readout_order(), 1};
    return circuit;
}

}  // namespace wsim
