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

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "wsim/circuit.hpp"
#include "wsim/postselect.hpp"
#include "wsim/reference.hpp"

using namespace wsim;
using Catch::Matchers::WithinAbs;

namespace {

StateVector psi4_at(double theta, W4Variant variant = W4Variant::Plain) {
    const Circuit circuit = build_w4_circuit(theta, variant);
    return run_circuit(circuit, input_state(circuit)).final_state;
}

}  // namespace

TEST_CASE("coincidence probability peaks at 2/27 for cos(theta)=1/sqrt(3)", "[postselect]") {
    const Projection proj =
        coincidence_project(psi4_at(reference::optimal_theta()), CoincidencePattern{w4_readout_order(), 1});
    CHECK_THAT(proj.probability, WithinAbs(2.0 / 27.0, 1e-12));
    CHECK_THAT(norm(proj.conditional), WithinAbs(1.0, 1e-12));
}

TEST_CASE("coincidence probability at theta=pi/4 is 1/16", "[postselect]") {
    const Projection proj =
        coincidence_project(psi4_at(std::numbers::pi / 4), CoincidencePattern{w4_readout_order(), 1});
    CHECK_THAT(proj.probability, WithinAbs(1.0 / 16.0, 1e-12));
}

TEST_CASE("projection on an empty mode gives zero probability", "[postselect]") {
    const StateVector epr = wsim_test::epr_pair("1", "2");
    const Projection proj = coincidence_project(epr, CoincidencePattern{{"zz"}, 1});
    CHECK(proj.probability == 0.0);
    CHECK(proj.conditional.empty());
}

TEST_CASE("coincidence_project rejects unnormalized input", "[postselect]") {
    StateVector big(Convention::Fock);
    big.add_term({{mode_h("1"), 1}}, 2.0);
    CHECK_THROWS_AS(coincidence_project(big, CoincidencePattern{{"1"}, 1}), std::invalid_argument);
    CHECK_THROWS_AS(coincidence_project(wsim_test::epr_pair("1", "2"), CoincidencePattern{{"1"}, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(project_counts(big, {"1", "1"}, {1, 1}), std::invalid_argument);
}

TEST_CASE("patterns are polarization blind", "[postselect]") {
    // |H>1|V>1 has two photons in mode 1 regardless of polarization.
    StateVector two(Convention::Fock);
    two.add_term({{mode_h("1"), 1}, {mode_v("1"), 1}}, 1.0);
    CHECK(project_counts(two, {"1"}, {2}).probability == 1.0);
    CHECK(project_counts(two, {"1"}, {1}).probability == 0.0);
}

TEST_CASE("detector pattern probabilities sum to one for the plain circuit", "[postselect]") {
    for (double theta : {0.4, 1.0}) {
        const StateVector psi4 = psi4_at(theta);
        double total = 0.0;
        for (int n1 = 0; n1 <= 4; ++n1) {
            for (int n3 = 0; n3 + n1 <= 4; ++n3) {
                for (int n2 = 0; n2 + n1 + n3 <= 4; ++n2) {
                    for (int n4 = 0; n4 + n1 + n3 + n2 <= 4; ++n4) {
                        total += project_counts(psi4, w4_readout_order(), {n1, n3, n2, n4}).probability;
                    }
                }
            }
        }
        CHECK_THAT(total, WithinAbs(1.0, 1e-10));
        const auto dist = detector_count_distribution(psi4, w4_readout_order());
        double dist_total = 0.0;
        for (const auto& [signature, p] : dist) {
            dist_total += p;
        }
        CHECK_THAT(dist_total, WithinAbs(1.0, 1e-10));
    }
}

TEST_CASE("w_state shapes and norms", "[postselect]") {
    const StateVector w4 = w_state(4, {"1", "3", "2", "4"});
    REQUIRE(w4.term_count() == 4);
    for (const auto& [occ, amp] : w4.terms()) {
        CHECK_THAT(amp.real(), WithinAbs(0.5, 1e-15));
    }
    CHECK_THAT(norm(w4), WithinAbs(1.0, 1e-15));

    const StateVector w3 = w_state(3, {"3", "2", "4"});
    REQUIRE(w3.term_count() == 3);
    for (const auto& [occ, amp] : w3.terms()) {
        CHECK_THAT(amp.real(), WithinAbs(1.0 / std::sqrt(3.0), 1e-15));
    }
    CHECK_THAT(norm(w3), WithinAbs(1.0, 1e-15));

    CHECK_THROWS_AS(w_state(2, {"a", "b"}), std::invalid_argument);
    CHECK_THROWS_AS(w_state(4, {"a", "b", "c"}), std::invalid_argument);
    CHECK_THROWS_AS(w_state(3, {"a", "a", "b"}), std::invalid_argument);
}

TEST_CASE("w_state is symmetric under detector permutations", "[postselect]") {
    std::vector<std::string> modes{"1", "3", "2", "4"};
    const StateVector w4 = w_state(4, modes);
    std::sort(modes.begin(), modes.end());
    do {
        CHECK_THAT(fidelity(w_state(4, modes), w4), WithinAbs(1.0, 1e-12));
    } while (std::next_permutation(modes.begin(), modes.end()));
}

TEST_CASE("conditional state of the scheme hits the W target exactly", "[postselect]") {
    const Projection proj = coincidence_project(psi4_at(0.9), CoincidencePattern{w4_readout_order(), 1});
    CHECK_THAT(fidelity(proj.conditional, w_state(4, w4_readout_order())), WithinAbs(1.0, 1e-12));
}

TEST_CASE("fidelity basics", "[postselect]") {
    const StateVector w4 = w_state(4, {"1", "3", "2", "4"});

    // Flipping H and V in every term gives an orthogonal state.
    StateVector flipped(Convention::Fock);
    for (const auto& [occ, amp] : w4.terms()) {
        Occupation f;
        for (const auto& [mode, count] : occ) {
            f[{mode.spatial, orthogonal(mode.pol)}] = count;
        }
        flipped.add_term(f, amp);
    }
    CHECK_THAT(fidelity(flipped, w4), WithinAbs(0.0, 1e-15));

    // Two of the four terms overlap by (1/sqrt(2) * 1/2) * 2 = 1/sqrt(2).
    StateVector half(Convention::Fock);
    const double r = 1.0 / std::sqrt(2.0);
    half.add_term({{mode_h("1"), 1}, {mode_h("3"), 1}, {mode_h("2"), 1}, {mode_v("4"), 1}}, r);
    half.add_term({{mode_h("1"), 1}, {mode_h("3"), 1}, {mode_v("2"), 1}, {mode_h("4"), 1}}, r);
    CHECK_THAT(fidelity(half, w4), WithinAbs(0.5, 1e-12));
    CHECK_THAT(fidelity(w4, half), WithinAbs(0.5, 1e-12));

    StateVector unnormalized(Convention::Fock);
    unnormalized.add_term({{mode_h("1"), 1}}, 0.5);
    CHECK_THROWS_AS(fidelity(unnormalized, w4), std::invalid_argument);
    CHECK_THROWS_AS(fidelity(w4, unnormalized), std::invalid_argument);
}

TEST_CASE("polarizer variant projects onto the three-photon W state", "[postselect]") {
    const StateVector filtered = psi4_at(reference::optimal_theta(), W4Variant::PolarizerD1);
    // The filtered state is unnormalized by design; project_counts reports
    // the event rate against the original norm-1 input.
    CHECK(norm(filtered) < 1.0);
    const Projection proj = project_counts(filtered, w4_readout_order(), {1, 1, 1, 1});
    REQUIRE(proj.conditional.term_count() == 3);
    CHECK_THAT(reference::max_amplitude_deviation(proj.conditional, reference::w3_conditional()),
               WithinAbs(0.0, 1e-12));
    // Event rate of the three surviving coincidence terms: (2/27) * 3/4.
    CHECK_THAT(proj.probability, WithinAbs(2.0 / 27.0 * 0.75, 1e-12));
}
