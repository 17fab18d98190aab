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
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "wsim/circuit.hpp"
#include "wsim/postselect.hpp"
#include "wsim/reference.hpp"

namespace wsim {

/// One grid point of a splitter-angle sweep. The closed form
/// cos^2(theta) sin^4(theta)/2 rides along so emitted tables are
/// self-auditing.
struct SweepRecord {
    double theta = 0.0;        // radians
    double probability = 0.0;  // simulated four-fold coincidence probability
    double fidelity = 0.0;     // conditional state vs the four-photon W target
    double closed_form = 0.0;
    double deviation = 0.0;    // |probability - closed_form|
};

namespace analysis_detail {

inline Projection run_and_project(double theta, W4Variant variant) {
    const Circuit circuit = build_w4_circuit(theta, variant);
    const RunResult run = run_circuit(circuit, input_state(circuit));
    const CoincidencePattern& pattern = *circuit.postselect;
    return project_counts(run.final_state, pattern.detectors,
                          std::vector<int>(pattern.detectors.size(), pattern.required_count));
}

}  // namespace analysis_detail

/// Builds the scheme at the given angle, runs it and projects on the
/// four-fold coincidence.
inline double success_probability(double theta) {
    constexpr double half_pi = std::numbers::pi / 2;
    if (!(theta >= 0.0 && theta <= half_pi)) {
        throw std::invalid_argument("success_probability: theta must lie in [0, pi/2]");
    }
    return analysis_detail::run_and_project(theta, W4Variant::Plain).probability;
}

/// Uniform inclusive grid over [theta_min, theta_max].
inline std::vector<SweepRecord> sweep_theta(double theta_min, double theta_max, int steps) {
    constexpr double half_pi = std::numbers::pi / 2;
    if (!(theta_min >= 0.0 && theta_min < theta_max && theta_max <= half_pi)) {
        throw std::invalid_argument("sweep_theta: need 0 <= theta_min < theta_max <= pi/2");
    }
    if (steps < 2) {
        throw std::invalid_argument("sweep_theta: need at least 2 steps");
    }
    const StateVector target = w_state(4, w4_readout_order());
    std::vector<SweepRecord> records;
    records.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        SweepRecord rec;
        rec.theta = theta_min + (theta_max - theta_min) * i / (steps - 1);
        const Projection projection = analysis_detail::run_and_project(rec.theta, W4Variant::Plain);
        rec.probability = projection.probability;
        rec.fidelity = projection.conditional.empty() ? 0.0 : fidelity(projection.conditional, target);
        rec.closed_form = reference::success_probability_closed_form(rec.theta);
        rec.deviation = std::abs(rec.probability - rec.closed_form);
        records.push_back(rec);
    }
    return records;
}

struct Optimum {
    double theta_star = 0.0;
    double p_star = 0.0;
};

/// Golden-section search for the angle of maximal success probability. The
/// objective is smooth and unimodal on [0, pi/2], so the derivative-free
/// bracket is enough. Returns theta within tol of the true optimum.
inline Optimum maximize_success(double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("maximize_success: tol must be positive");
    }
    constexpr double half_pi = std::numbers::pi / 2;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = half_pi;
    double c = hi - ratio * (hi - lo);
    double d = lo + ratio * (hi - lo);
    double fc = success_probability(c);
    double fd = success_probability(d);
    while (hi - lo > tol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = success_probability(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = success_probability(d);
        }
    }
    Optimum opt;
    opt.theta_star = 0.5 * (lo + hi);
    opt.p_star = success_probability(opt.theta_star);
    return opt;
}

/// CSV emission, full double precision (17 significant digits).
inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << "theta_rad,theta_deg,probability,closed_form,deviation,fidelity\n";
    char buf[256];
    for (const SweepRecord& rec : records) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", rec.theta,
                      rec.theta * 180.0 / std::numbers::pi, rec.probability, rec.closed_form,
                      rec.deviation, rec.fidelity);
        out << buf;
    }
}

}  // namespace wsim
