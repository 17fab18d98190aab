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

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsim/circuit.hpp"
#include "wsim/state.hpp"

// Dense reference engine, deliberately written on a different algorithm than
// the sparse monomial-substitution engine it cross-checks. The circuit prefix
// is composed into one single-particle matrix U over all polarized modes, and
// multi-photon transition amplitudes are evaluated with the permanent formula
//
//   <m|U|n> = per(U[m, n]) / sqrt(prod m_i! prod n_j!)
//
// where U[m, n] repeats rows and columns by occupation. Output occupations
// are enumerated densely over the reachable modes. Only the circuit
// description is shared with the sparse engine; the element matrices are
// rebuilt here from scratch.

namespace wsim::oracle {

struct ModeIndex {
    std::vector<PolarizedMode> modes;
    std::map<PolarizedMode, int> index;
};

inline ModeIndex polarized_index(const Circuit& circuit) {
    ModeIndex mi;
    for (const std::string& label : circuit.modes) {
        for (Polarization p : {Polarization::H, Polarization::V}) {
            mi.index.emplace(PolarizedMode{label, p}, static_cast<int>(mi.modes.size()));
            mi.modes.push_back({label, p});
        }
    }
    return mi;
}

/// Single-particle matrix of one routing element, identity elsewhere.
inline Eigen::MatrixXcd element_matrix(const Element& e, const ModeIndex& mi) {
    const auto n = static_cast<Eigen::Index>(mi.modes.size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
    auto at = [&](const std::string& label, Polarization p) {
        return static_cast<Eigen::Index>(mi.index.at({label, p}));
    };
    switch (e.kind) {
        case ElementKind::BeamSplitter: {
            const double c = std::cos(e.theta_rad);
            const double s = std::sin(e.theta_rad);
            for (Polarization p : {Polarization::H, Polarization::V}) {
                const auto m = at(e.in[0], p), nn = at(e.in[1], p);
                const auto mp = at(e.out[0], p), np = at(e.out[1], p);
                u.col(m).setZero();
                u.col(nn).setZero();
                u(mp, m) = c;
                u(np, m) = s;
                u(np, nn) = c;
                u(mp, nn) = -s;
            }
            break;
        }
        case ElementKind::Pbs: {
            const auto m_h = at(e.in[0], Polarization::H), n_h = at(e.in[1], Polarization::H);
            const auto m_v = at(e.in[0], Polarization::V), n_v = at(e.in[1], Polarization::V);
            const auto mp_h = at(e.out[0], Polarization::H), np_h = at(e.out[1], Polarization::H);
            const auto mp_v = at(e.out[0], Polarization::V), np_v = at(e.out[1], Polarization::V);
            u.col(m_h).setZero();
            u.col(n_h).setZero();
            u.col(m_v).setZero();
            u.col(n_v).setZero();
            u(mp_h, m_h) = 1.0;  // H transmitted
            u(np_h, n_h) = 1.0;
            u(np_v, m_v) = 1.0;  // V reflected
            u(mp_v, n_v) = 1.0;
            break;
        }
        case ElementKind::Mirror: {
            for (Polarization p : {Polarization::H, Polarization::V}) {
                const auto m = at(e.in[0], p), mp = at(e.out[0], p);
                u.col(m).setZero();
                u(mp, m) = 1.0;
            }
            break;
        }
        case ElementKind::Polarizer:
            throw std::invalid_argument("oracle: polarizers are not linear substitutions");
    }
    return u;
}

/// Composition of elements[0..upto_incl] as one matrix.
inline Eigen::MatrixXcd prefix_matrix(const Circuit& circuit, int upto_incl, const ModeIndex& mi) {
    const auto n = static_cast<Eigen::Index>(mi.modes.size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
    for (int i = 0; i <= upto_incl; ++i) {
        u = element_matrix(circuit.elements.at(i), mi) * u;
    }
    return u;
}

namespace detail {

/// Permanent by expansion along the first row; k <= 4 here.
inline Complex permanent(const Eigen::MatrixXcd& a) {
    const Eigen::Index k = a.rows();
    if (k == 0) {
        return 1.0;
    }
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    // Row-recursive expansion with a used-column mask.
    auto rec = [&](auto&& self, Eigen::Index row) -> Complex {
        if (row == k) {
            return 1.0;
        }
        Complex sum = 0.0;
        for (Eigen::Index col = 0; col < k; ++col) {
            if (!used[static_cast<std::size_t>(col)] && a(row, col) != Complex{}) {
                used[static_cast<std::size_t>(col)] = true;
                sum += a(row, col) * self(self, row + 1);
                used[static_cast<std::size_t>(col)] = false;
            }
        }
        return sum;
    };
    return rec(rec, 0);
}

inline double factorial_product(const std::vector<int>& counts) {
    double f = 1.0;
    for (int c : counts) {
        for (int k = 2; k <= c; ++k) {
            f *= k;
        }
    }
    return f;
}

/// All occupations of `photons` photons over `modes` slots.
inline void enumerate_occupations(int photons, int modes, std::vector<int>& current,
                                  const std::function<void(const std::vector<int>&)>& visit) {
    if (static_cast<int>(current.size()) == modes - 1) {
        current.push_back(photons);
        visit(current);
        current.pop_back();
        return;
    }
    for (int k = 0; k <= photons; ++k) {
        current.push_back(k);
        enumerate_occupations(photons - k, modes, current, visit);
        current.pop_back();
    }
}

}  // namespace detail

/// Evolves the input through elements[0..upto_incl] by dense permanent
/// evaluation. Input and result are Fock-convention states.
inline StateVector evolve(const Circuit& circuit, const StateVector& input, int upto_incl) {
    if (input.convention() != Convention::Fock) {
        throw std::invalid_argument("oracle::evolve requires a Fock-convention input");
    }
    const ModeIndex mi = polarized_index(circuit);
    const Eigen::MatrixXcd u = prefix_matrix(circuit, upto_incl, mi);

    // Modes reachable from any occupied input column; amplitudes elsewhere
    // vanish because the permanent then contains a zero row.
    std::vector<char> reachable(mi.modes.size(), 0);
    for (const auto& [occ, amp] : input.terms()) {
        for (const auto& [mode, count] : occ) {
            const auto col = static_cast<Eigen::Index>(mi.index.at(mode));
            for (Eigen::Index row = 0; row < u.rows(); ++row) {
                if (u(row, col) != Complex{}) {
                    reachable[static_cast<std::size_t>(row)] = 1;
                }
            }
        }
    }
    std::vector<int> out_modes;
    for (std::size_t i = 0; i < reachable.size(); ++i) {
        if (reachable[i]) {
            out_modes.push_back(static_cast<int>(i));
        }
    }

    StateVector result(Convention::Fock);
    for (const auto& [occ, amp] : input.terms()) {
        std::vector<int> in_cols;
        std::vector<int> in_counts;
        for (const auto& [mode, count] : occ) {
            in_counts.push_back(count);
            for (int k = 0; k < count; ++k) {
                in_cols.push_back(mi.index.at(mode));
            }
        }
        const int photons = static_cast<int>(in_cols.size());
        const double in_fact = detail::factorial_product(in_counts);
        if (out_modes.empty()) {
            if (photons == 0) {
                result.add_term({}, amp);  // vacuum passes through
            }
            continue;
        }

        std::vector<int> partial;
        detail::enumerate_occupations(
            photons, static_cast<int>(out_modes.size()), partial, [&](const std::vector<int>& out_occ) {
                std::vector<int> out_rows;
                for (std::size_t i = 0; i < out_occ.size(); ++i) {
                    for (int k = 0; k < out_occ[i]; ++k) {
                        out_rows.push_back(out_modes[i]);
                    }
                }
                Eigen::MatrixXcd sub(photons, photons);
                for (int r = 0; r < photons; ++r) {
                    for (int c = 0; c < photons; ++c) {
                        sub(r, c) = u(out_rows[static_cast<std::size_t>(r)],
                                      in_cols[static_cast<std::size_t>(c)]);
                    }
                }
                const Complex per = detail::permanent(sub);
                if (per == Complex{}) {
                    return;
                }
                const Complex a = amp * per / std::sqrt(detail::factorial_product(out_occ) * in_fact);
                Occupation key;
                for (std::size_t i = 0; i < out_occ.size(); ++i) {
                    if (out_occ[i] > 0) {
                        key[mi.modes[static_cast<std::size_t>(out_modes[i])]] = out_occ[i];
                    }
                }
                result.add_term(key, a);
            });
    }
    result.prune();
    return result;
}

/// Dense reference state at a named tap.
inline StateVector state_at_tap(const Circuit& circuit, const StateVector& input, const std::string& tap_name) {
    for (const Tap& tap : circuit.taps) {
        if (tap.name == tap_name) {
            return evolve(circuit, input, tap.after);
        }
    }
    throw std::invalid_argument("oracle: unknown tap '" + tap_name + "'");
}

}  // namespace wsim::oracle
