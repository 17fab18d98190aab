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

// Acceptance suite: one pass/fail line per pinned criterion of the scheme.
// Criteria 1 through 9 run the in-library verification checks; criterion 10
// times an end-to-end `wsim verify` child process.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "wsim/verify.hpp"

namespace {

struct Criterion {
    int number;
    const char* check_name;
    const char* description;
};

constexpr Criterion kCriteria[] = {
    {1, "stage1_epr_split", "EPR split stage matches its closed form (<= 1e-12, < 0.1 s)"},
    {2, "stage2_injection_vs_oracle", "injection stage matches the dense oracle (<= 1e-10, diffs reported)"},
    {3, "stage4_coincidence_prefactor", "coincidence amplitudes cos(t)sin^2(t)/(2sqrt2), common sign (<= 1e-12)"},
    {4, "probability_law_grid", "probability law cos^2(t)sin^4(t)/2 on 50-point grid (<= 1e-10, < 1 s)"},
    {5, "optimum_theta_star", "optimum at arccos(1/sqrt3) within 1e-6, p* = 2/27 within 1e-9"},
    {6, "w4_fidelity_grid", "conditional state fidelity 1 with the W target across the grid (<= 1e-12)"},
    {7, "polarizer_variant_w3", "polarizer variant yields the three-photon W, amplitudes 1/sqrt3 (<= 1e-12)"},
    {8, "detector_pattern_completeness", "detector pattern probabilities sum to 1 (<= 1e-10)"},
    {9, "property_suite", "HOM dip, unitarity, norm and photon conservation, round trip (<= 1e-12)"},
};

}  // namespace

int main() {
    const std::vector<wsim::CheckResult> results = wsim::run_verification();
    bool all_pass = true;
    int diff_notes = 0;

    for (const Criterion& criterion : kCriteria) {
        const wsim::CheckResult* found = nullptr;
        for (const wsim::CheckResult& r : results) {
            if (r.name == criterion.check_name) {
                found = &r;
            }
        }
        if (found == nullptr) {
            std::printf("[FAIL] criterion %2d: %s (check missing)\n", criterion.number,
                        criterion.description);
            all_pass = false;
            continue;
        }
        std::printf("[%s] criterion %2d: %s  [deviation %.3e, tolerance %.3e, %.1f ms]\n",
                    found->pass ? "PASS" : "FAIL", criterion.number, criterion.description,
                    found->deviation, found->tolerance, found->millis);
        for (const std::string& note : found->notes) {
            std::printf("        %s\n", note.c_str());
            diff_notes += (note.rfind("psi2@", 0) == 0 || note.rfind("psi3@", 0) == 0) ? 1 : 0;
        }
        all_pass = all_pass && found->pass;
    }
    std::printf("        stage term-diff notes reported: %d (expected 12: one sign pair at 3 angles, 2 stages)\n",
                diff_notes);
    if (diff_notes != 12) {
        std::printf("[FAIL] criterion  2: expected exactly 12 term-diff notes\n");
        all_pass = false;
    }

    // Criterion 10: the CLI verify command end to end.
    {
        const auto start = std::chrono::steady_clock::now();
        const int rc = std::system(WSIM_CLI_PATH " verify > /dev/null 2>&1");
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = rc == 0 && seconds < 10.0;
        std::printf("[%s] criterion 10: end-to-end `wsim verify` exits 0 in under 10 s  [%.2f s, exit %d]\n",
                    pass ? "PASS" : "FAIL", seconds, rc);
        all_pass = all_pass && pass;
    }

    std::printf("acceptance: %s\n", all_pass ? "all criteria passed" : "FAILURES PRESENT");
    return all_pass ? 0 : 1;
}
