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
#include <complex>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wsim/mode.hpp"

namespace wsim {

using Complex = std::complex<double>;

/// Coefficients whose magnitude falls below this threshold are treated as
/// exact-zero cancellations (HOM dips and the like) and removed from storage.
inline constexpr double kPruneEps = 1e-12;

/// Photon counts per polarized mode. Zero counts are never stored.
using Occupation = std::map<PolarizedMode, int>;

inline int total_photons(const Occupation& occ) {
    int n = 0;
    for (const auto& [mode, count] : occ) {
        n += count;
    }
    return n;
}

/// One basis ket with its coefficient.
struct FockTerm {
    Occupation occ;
    Complex coeff;
};

/// Whether stored coefficients multiply bare creation monomials
/// prod (a_m^dag)^n |0> or normalized Fock kets |n>.
///
/// Element application is natural on monomials, measurement on Fock
/// amplitudes. Keeping the tag explicit turns convention misuse into an
/// error instead of a silent factor of sqrt(2).
enum class Convention { Monomial, Fock };

/// Converts a creation-monomial coefficient into the Fock amplitude of the
/// corresponding normalized ket: coeff * sqrt(prod occ(m)!).
inline Complex fock_amplitude(Complex coeff, const Occupation& occ) {
    double factorials = 1.0;
    for (const auto& [mode, count] : occ) {
        if (count < 0) {
            throw std::invalid_argument("negative photon count in occupation");
        }
        for (int k = 2; k <= count; ++k) {
            factorials *= k;
        }
    }
    return coeff * std::sqrt(factorials);
}

/// Sparse superposition of multimode Fock terms with complex coefficients.
///
/// Value semantics throughout; every operation below is a pure function, so
/// states can be evaluated in parallel without shared mutable state.
class StateVector {
  public:
    explicit StateVector(Convention convention = Convention::Fock) : convention_(convention) {}

    /// The state |0> (one term, empty occupation, coefficient 1).
    /// Distinct from the empty state, which has no terms and norm 0.
    static StateVector vacuum(Convention convention = Convention::Fock) {
        StateVector s(convention);
        s.add_term({}, 1.0);
        return s;
    }

    Convention convention() const { return convention_; }
    const std::map<Occupation, Complex>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    /// Merges a term into the state. Zero counts are stripped so equal
    /// occupations always share one canonical key.
    void add_term(const Occupation& occ, Complex coeff) {
        Occupation canonical;
        for (const auto& [mode, count] : occ) {
            if (count < 0) {
                throw std::invalid_argument("negative photon count in occupation");
            }
            if (count > 0) {
                canonical.emplace(mode, count);
            }
        }
        terms_[std::move(canonical)] += coeff;
    }

    /// Coefficient of the given occupation, zero if absent.
    Complex amplitude(const Occupation& occ) const {
        auto it = terms_.find(occ);
        return it == terms_.end() ? Complex{} : it->second;
    }

    void prune(double eps = kPruneEps) {
        std::erase_if(terms_, [eps](const auto& kv) { return std::abs(kv.second) < eps; });
    }

    StateVector pruned(double eps = kPruneEps) const {
        StateVector s = *this;
        s.prune(eps);
        return s;
    }

    /// Spatial labels carrying at least one photon in any term.
    std::set<std::string> spatial_support() const {
        std::set<std::string> labels;
        for (const auto& [occ, coeff] : terms_) {
            for (const auto& [mode, count] : occ) {
                labels.insert(mode.spatial);
            }
        }
        return labels;
    }

    /// Conversion between conventions; no-op if already there.
    StateVector to_fock() const {
        if (convention_ == Convention::Fock) {
            return *this;
        }
        StateVector s(Convention::Fock);
        for (const auto& [occ, coeff] : terms_) {
            s.add_term(occ, fock_amplitude(coeff, occ));
        }
        return s;
    }

    StateVector to_monomial() const {
        if (convention_ == Convention::Monomial) {
            return *this;
        }
        StateVector s(Convention::Monomial);
        for (const auto& [occ, coeff] : terms_) {
            s.add_term(occ, coeff / fock_amplitude(1.0, occ));
        }
        return s;
    }

    /// Rescales to unit norm. Fock convention only.
    StateVector normalized() const;

  private:
    Convention convention_;
    std::map<Occupation, Complex> terms_;
};

/// sqrt(sum |amplitude|^2); zero for the empty state. Rejects monomial
/// states, whose coefficients are not amplitudes of orthonormal kets.
inline double norm(const StateVector& state) {
    if (state.convention() != Convention::Fock) {
        throw std::invalid_argument("norm requires the Fock convention; convert with to_fock()");
    }
    double sq = 0.0;
    for (const auto& [occ, amp] : state.terms()) {
        sq += std::norm(amp);
    }
    return std::sqrt(sq);
}

/// <s1|s2>, conjugate-linear in the first argument. Both states must be in
/// the Fock convention.
inline Complex inner_product(const StateVector& s1, const StateVector& s2) {
    if (s1.convention() != Convention::Fock || s2.convention() != Convention::Fock) {
        throw std::invalid_argument("inner_product requires both states in the Fock convention");
    }
    // Iterate the smaller term map.
    const StateVector& small = s1.term_count() <= s2.term_count() ? s1 : s2;
    const StateVector& large = s1.term_count() <= s2.term_count() ? s2 : s1;
    Complex acc = 0.0;
    for (const auto& [occ, amp] : small.terms()) {
        const Complex other = large.amplitude(occ);
        if (&small == &s1) {
            acc += std::conj(amp) * other;
        } else {
            acc += std::conj(other) * amp;
        }
    }
    return acc;
}

/// Tensor product. The operands must live on disjoint spatial modes (an
/// occupation merge across shared labels would be ambiguous) and share a
/// convention tag.
inline StateVector tensor(const StateVector& s1, const StateVector& s2) {
    if (s1.convention() != s2.convention()) {
        throw std::invalid_argument("tensor requires matching conventions");
    }
    const auto support1 = s1.spatial_support();
    for (const std::string& label : s2.spatial_support()) {
        if (support1.count(label) != 0) {
            throw std::invalid_argument("tensor operands overlap on spatial mode '" + label + "'");
        }
    }
    StateVector out(s1.convention());
    for (const auto& [occ1, c1] : s1.terms()) {
        for (const auto& [occ2, c2] : s2.terms()) {
            Occupation merged = occ1;
            merged.insert(occ2.begin(), occ2.end());
            out.add_term(merged, c1 * c2);
        }
    }
    return out;
}

inline StateVector StateVector::normalized() const {
    const double n = norm(*this);
    if (n < kPruneEps) {
        throw std::invalid_argument("cannot normalize a state with vanishing norm");
    }
    StateVector s(Convention::Fock);
    for (const auto& [occ, amp] : terms_) {
        s.add_term(occ, amp / n);
    }
    s.prune();
    return s;
}

/// Renders one polarized-mode factor, e.g. |2H>b or |V>1.
inline std::string format_mode_factor(const PolarizedMode& mode, int count) {
    std::string s = "|";
    if (count != 1) {
        s += std::to_string(count);
    }
    s += pol_char(mode.pol);
    s += ">";
    s += mode.spatial;
    return s;
}

/// Renders an occupation as a ket product in canonical mode order;
/// the vacuum renders as |0>.
inline std::string format_ket(const Occupation& occ) {
    if (occ.empty()) {
        return "|0>";
    }
    std::string s;
    for (const auto& [mode, count] : occ) {
        s += format_mode_factor(mode, count);
    }
    return s;
}

/// Renders an occupation with the given spatial labels first (detector
/// readout order); any remaining modes follow in canonical order.
inline std::string format_ket(const Occupation& occ, const std::vector<std::string>& readout) {
    if (occ.empty()) {
        return "|0>";
    }
    std::string s;
    std::set<PolarizedMode> done;
    for (const std::string& label : readout) {
        for (Polarization p : {Polarization::H, Polarization::V}) {
            const PolarizedMode mode{label, p};
            auto it = occ.find(mode);
            if (it != occ.end()) {
                s += format_mode_factor(mode, it->second);
                done.insert(mode);
            }
        }
    }
    for (const auto& [mode, count] : occ) {
        if (done.count(mode) == 0) {
            s += format_mode_factor(mode, count);
        }
    }
    return s;
}

}  // namespace wsim
