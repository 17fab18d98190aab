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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "wsim/elements.hpp"

using namespace wsim;
using Catch::Matchers::WithinAbs;
using wsim_test::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

StateVector single_monomial(const Occupation& occ, Complex coeff = 1.0) {
    StateVector s(Convention::Monomial);
    s.add_term(occ, coeff);
    return s;
}

}  // namespace

TEST_CASE("beam splitter at theta=0 transmits everything", "[elements]") {
    const ModeMap bs = beam_splitter_map(0.0, {"m", "n"}, {"m", "n"});
    const StateVector in = single_monomial({{mode_h("m"), 1}, {mode_v("n"), 2}}, 0.7);
    const StateVector out = apply_map(in, bs);
    REQUIRE(out.term_count() == 1);
    CHECK_THAT(std::abs(out.amplitude({{mode_h("m"), 1}, {mode_v("n"), 2}}) - 0.7), WithinAbs(0.0, 1e-15));
}

TEST_CASE("beam splitter at theta=pi/2 reflects with one sign flip", "[elements]") {
    const ModeMap bs = beam_splitter_map(kPi / 2, {"m", "n"}, {"m", "n"});
    StateVector m_in = single_monomial({{mode_h("m"), 1}});
    StateVector out = apply_map(m_in, bs);
    CHECK_THAT(std::abs(out.amplitude({{mode_h("n"), 1}}) - 1.0), WithinAbs(0.0, 1e-15));
    StateVector n_in = single_monomial({{mode_h("n"), 1}});
    out = apply_map(n_in, bs);
    CHECK_THAT(std::abs(out.amplitude({{mode_h("m"), 1}}) - (-1.0)), WithinAbs(0.0, 1e-15));
}

TEST_CASE("beam splitter amplitudes at cos(theta)=1/sqrt(3)", "[elements]") {
    const double theta = std::acos(1.0 / std::sqrt(3.0));
    const ModeMap bs = beam_splitter_map(theta, {"m", "n"}, {"p", "q"});
    const StateVector out = apply_map(single_monomial({{mode_h("m"), 1}}), bs);
    CHECK_THAT(std::abs(out.amplitude({{mode_h("p"), 1}})), WithinAbs(1.0 / std::sqrt(3.0), 1e-14));
    CHECK_THAT(std::abs(out.amplitude({{mode_h("q"), 1}})), WithinAbs(std::sqrt(2.0 / 3.0), 1e-14));
}

TEST_CASE("beam splitter rejects bad arguments", "[elements]") {
    CHECK_THROWS_AS(beam_splitter_map(2.0, {"m", "n"}, {"m", "n"}), std::invalid_argument);
    CHECK_THROWS_AS(beam_splitter_map(0.3, {"m", "m"}, {"p", "q"}), std::invalid_argument);
    CHECK_THROWS_AS(beam_splitter_map(0.3, {"m", "n"}, {"m", "q"}), std::invalid_argument);
}

TEST_CASE("pbs transmits H and reflects V", "[elements]") {
    const ModeMap pbs = pbs_map({"m", "n"}, {"p", "q"});
    StateVector h_out = apply_map(single_monomial({{mode_h("m"), 1}}), pbs);
    CHECK_THAT(std::abs(h_out.amplitude({{mode_h("p"), 1}}) - 1.0), WithinAbs(0.0, 1e-15));
    StateVector v_out = apply_map(single_monomial({{mode_v("m"), 1}}), pbs);
    CHECK_THAT(std::abs(v_out.amplitude({{mode_v("q"), 1}}) - 1.0), WithinAbs(0.0, 1e-15));
}

TEST_CASE("pbs pair splits the EPR state onto four paths", "[elements]") {
    // (|H>1|V>2 + |V>1|H>2)/sqrt(2) -> (|H>b|V>c + |V>a|H>d)/sqrt(2)
    StateVector state = wsim_test::epr_pair("1", "2").to_monomial();
    state = apply_map(state, pbs_map({"1", "u1"}, {"b", "a"}));
    state = apply_map(state, pbs_map({"2", "u2"}, {"d", "c"}));
    const StateVector fock = state.to_fock();
    REQUIRE(fock.term_count() == 2);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK_THAT(std::abs(fock.amplitude({{mode_h("b"), 1}, {mode_v("c"), 1}}) - r), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(fock.amplitude({{mode_v("a"), 1}, {mode_h("d"), 1}}) - r), WithinAbs(0.0, 1e-15));
}

TEST_CASE("mirror relabels with unit coefficient", "[elements]") {
    const ModeMap mirror = mirror_map("m", "p");
    StateVector out = apply_map(single_monomial({{mode_h("m"), 2}}, 0.4), mirror);
    CHECK_THAT(std::abs(out.amplitude({{mode_h("p"), 2}}) - 0.4), WithinAbs(0.0, 1e-15));
    StateVector vac = apply_map(StateVector::vacuum(Convention::Monomial), mirror);
    CHECK_THAT(std::abs(vac.amplitude({}) - 1.0), WithinAbs(0.0, 1e-15));
}

TEST_CASE("two identical photons on a balanced splitter show the HOM dip", "[elements]") {
    const ModeMap bs = beam_splitter_map(kPi / 4, {"m", "n"}, {"p", "q"});
    const StateVector out = apply_map(single_monomial({{mode_h("m"), 1}, {mode_h("n"), 1}}), bs).to_fock();
    // Expansion by hand: (c p + s q)(c q - s p) at theta = pi/4 gives
    // (|2H>q - |2H>p)/sqrt(2) and no coincidence term.
    CHECK(out.amplitude({{mode_h("p"), 1}, {mode_h("q"), 1}}) == Complex{});
    CHECK_THAT(std::abs(out.amplitude({{mode_h("p"), 2}}) - (-1.0 / std::sqrt(2.0))), WithinAbs(0.0, 1e-14));
    CHECK_THAT(std::abs(out.amplitude({{mode_h("q"), 2}}) - (1.0 / std::sqrt(2.0))), WithinAbs(0.0, 1e-14));
    REQUIRE(out.term_count() == 2);
}

TEST_CASE("apply_map with an identity map returns the input verbatim", "[elements]") {
    Rng rng(5150);
    const StateVector s = wsim_test::random_state(rng, 4, 4, 6, Convention::Monomial);
    const StateVector out = apply_map(s, mirror_map("zz", "zz"));
    REQUIRE(out.term_count() == s.pruned().term_count());
    for (const auto& [occ, coeff] : out.terms()) {
        CHECK(s.amplitude(occ) == coeff);
    }
}

TEST_CASE("apply_map requires the monomial convention", "[elements]") {
    CHECK_THROWS_AS(apply_map(StateVector::vacuum(Convention::Fock), mirror_map("a", "b")),
                    std::invalid_argument);
}

TEST_CASE("unitary maps preserve norm and photon number", "[elements]") {
    Rng rng(90210);
    constexpr double half_pi = kPi / 2;
    for (int trial = 0; trial < 25; ++trial) {
        const int photons = rng.uniform_int(1, 4);
        StateVector fock(Convention::Fock);
        for (int t = 0, terms = rng.uniform_int(1, 6); t < terms; ++t) {
            Occupation occ;
            for (int p = 0; p < photons; ++p) {
                occ[{"m" + std::to_string(rng.uniform_int(0, 5)),
                     rng.uniform_int(0, 1) == 0 ? Polarization::H : Polarization::V}] += 1;
            }
            fock.add_term(occ, Complex{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
        }
        StateVector state = fock.to_monomial();
        for (int step = 0; step < 3; ++step) {
            const std::string m = "m" + std::to_string(rng.uniform_int(0, 2));
            const std::string n = "m" + std::to_string(rng.uniform_int(3, 5));
            const ModeMap map = rng.uniform_int(0, 1) == 0
                                    ? beam_splitter_map(rng.uniform(0.0, half_pi), {m, n}, {m, n})
                                    : pbs_map({m, n}, {m, n});
            state = apply_map(state, map);
        }
        const StateVector out = state.to_fock();
        CHECK_THAT(norm(out), WithinAbs(norm(fock), 1e-12));
        for (const auto& [occ, amp] : out.terms()) {
            CHECK(total_photons(occ) == photons);
        }
    }
}

TEST_CASE("substitution composes: applying two maps equals the composed map", "[elements]") {
    Rng rng(333);
    const ModeMap first = beam_splitter_map(0.4, {"m0", "m1"}, {"m0", "m1"});
    const ModeMap second = beam_splitter_map(0.9, {"m1", "m2"}, {"m1", "m2"});
    // Composed substitution, computed by applying `second` to each image of `first`.
    ModeMap composed;
    composed.name = "composed";
    for (const auto& [in, images] : first.columns) {
        StateVector image(Convention::Monomial);
        for (const auto& [target, coeff] : images) {
            image.add_term({{target, 1}}, coeff);
        }
        const StateVector mapped = apply_map(image, second);
        std::vector<std::pair<PolarizedMode, Complex>> column;
        for (const auto& [occ, coeff] : mapped.terms()) {
            column.emplace_back(occ.begin()->first, coeff);
        }
        composed.columns[in] = column;
    }
    for (const auto& [in, images] : second.columns) {
        if (composed.columns.count(in) == 0) {
            composed.columns[in] = images;
        }
    }
    for (int trial = 0; trial < 10; ++trial) {
        const StateVector s = wsim_test::random_state(rng, 4, 3, 5, Convention::Monomial);
        const StateVector stepwise = apply_map(apply_map(s, first), second).to_fock();
        const StateVector direct = apply_map(s, composed).to_fock();
        for (const auto& [occ, amp] : stepwise.terms()) {
            CHECK_THAT(std::abs(direct.amplitude(occ) - amp), WithinAbs(0.0, 1e-12));
        }
        CHECK(direct.term_count() == stepwise.term_count());
    }
}

TEST_CASE("beam splitter followed by its reverse is the identity", "[elements]") {
    Rng rng(4242);
    for (double theta : {0.2, 0.7, 1.3}) {
        const ModeMap forward = beam_splitter_map(theta, {"m0", "m1"}, {"m0", "m1"});
        const ModeMap reverse = beam_splitter_map(theta, {"m1", "m0"}, {"m1", "m0"});
        const ModeMap negative = beam_splitter_map(-theta, {"m0", "m1"}, {"m0", "m1"});
        const StateVector s = wsim_test::random_state(rng, 4, 2, 4, Convention::Monomial).pruned();
        for (const ModeMap* inverse : {&reverse, &negative}) {
            const StateVector back = apply_map(apply_map(s, forward), *inverse);
            for (const auto& [occ, coeff] : s.terms()) {
                CHECK_THAT(std::abs(back.amplitude(occ) - coeff), WithinAbs(0.0, 1e-12));
            }
        }
    }
}

TEST_CASE("polarizer keeps the oriented component and is idempotent", "[elements]") {
    StateVector diag(Convention::Fock);
    const double r = 1.0 / std::sqrt(2.0);
    diag.add_term({{mode_h("1"), 1}}, r);
    diag.add_term({{mode_v("1"), 1}}, r);
    const StateVector filtered = polarizer_filter(diag, "1", Polarization::H);
    REQUIRE(filtered.term_count() == 1);
    CHECK_THAT(std::abs(filtered.amplitude({{mode_h("1"), 1}}) - r), WithinAbs(0.0, 1e-15));
    CHECK_THAT(norm(filtered) * norm(filtered), WithinAbs(0.5, 1e-15));

    // A state with no V photons in the filtered mode passes unchanged.
    StateVector h_only(Convention::Fock);
    h_only.add_term({{mode_h("1"), 1}, {mode_v("2"), 1}}, 1.0);
    const StateVector unchanged = polarizer_filter(h_only, "1", Polarization::H);
    CHECK(unchanged.terms() == h_only.terms());

    const StateVector twice = polarizer_filter(filtered, "1", Polarization::H);
    CHECK(twice.terms() == filtered.terms());
}

TEST_CASE("check_unitary accepts rotations and permutations", "[elements]") {
    for (double theta : {0.0, 0.3, kPi / 4, 1.2, kPi / 2}) {
        CHECK(check_unitary(beam_splitter_map(theta, {"m", "n"}, {"p", "q"})).pass);
    }
    CHECK(check_unitary(pbs_map({"m", "n"}, {"p", "q"})).pass);
    CHECK(check_unitary(mirror_map("m", "p")).pass);
}

TEST_CASE("check_unitary flags a scaling map", "[elements]") {
    ModeMap doubling;
    doubling.name = "doubling";
    doubling.columns[{mode_h("a")}] = {{mode_h("a"), 2.0}};
    const UnitaryReport report = check_unitary(doubling);
    CHECK_FALSE(report.pass);
    CHECK_THAT(report.max_deviation, WithinAbs(3.0, 1e-12));
}
