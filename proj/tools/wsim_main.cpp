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

// Command line front end: run, sweep, optimize and verify workflows over the
// four-photon W-state scheme and over user supplied circuit files.
//
// Exit codes: 0 success, 1 runtime or validation failure, 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wsim/analysis.hpp"
#include "wsim/circuit_io.hpp"
#include "wsim/verify.hpp"

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

using OrderedJson = nlohmann::ordered_json;

struct RunReport {
    std::string source;
    std::optional<double> theta_rad;
    std::vector<std::string> tap_order;
    const wsim::RunResult* result = nullptr;
    const wsim::Circuit* circuit = nullptr;
    std::optional<wsim::Projection> projection;
    std::optional<double> fidelity;
    std::string target_label;
};

std::vector<std::string> readout_order(const wsim::Circuit& circuit) {
    return circuit.postselect ? circuit.postselect->detectors : std::vector<std::string>{};
}

OrderedJson report_to_json(const RunReport& report) {
    OrderedJson root;
    root["command"] = "run";
    root["source"] = report.source;
    if (report.theta_rad) {
        root["theta_rad"] = *report.theta_rad;
        root["theta_deg"] = *report.theta_rad * kDegPerRad;
    }
    OrderedJson taps = OrderedJson::array();
    for (const std::string& name : report.tap_order) {
        const wsim::StateVector& state = report.result->taps.at(name);
        taps.push_back({{"name", name}, {"terms", state.term_count()}, {"norm", wsim::norm(state)}});
    }
    root["taps"] = std::move(taps);
    if (report.circuit->postselect) {
        root["postselect"] = {{"detectors", report.circuit->postselect->detectors},
                              {"count", report.circuit->postselect->required_count}};
        root["probability"] = report.projection->probability;
        OrderedJson conditional = OrderedJson::array();
        const auto order = readout_order(*report.circuit);
        for (const auto& [occ, amp] : report.projection->conditional.terms()) {
            conditional.push_back(
                {{"ket", wsim::format_ket(occ, order)}, {"re", amp.real()}, {"im", amp.imag()}});
        }
        root["conditional"] = std::move(conditional);
    } else {
        root["postselect"] = nullptr;
    }
    if (report.fidelity) {
        root["fidelity"] = *report.fidelity;
        root["target"] = report.target_label;
    } else {
        root["fidelity"] = nullptr;
    }
    return root;
}

void print_report_text(const RunReport& report) {
    std::printf("source:       %s\n", report.source.c_str());
    if (report.theta_rad) {
        std::printf("theta:        %.17g rad (%.17g deg)\n", *report.theta_rad,
                    *report.theta_rad * kDegPerRad);
    }
    for (const std::string& name : report.tap_order) {
        const wsim::StateVector& state = report.result->taps.at(name);
        std::printf("tap %-8s  terms %3zu  norm %.12f\n", name.c_str(), state.term_count(),
                    wsim::norm(state));
    }
    if (report.circuit->postselect) {
        std::printf("postselect:   exactly %d photon(s) in each of (", report.circuit->postselect->required_count);
        const auto& detectors = report.circuit->postselect->detectors;
        for (std::size_t i = 0; i < detectors.size(); ++i) {
            std::printf("%s%s", i == 0 ? "" : ",", detectors[i].c_str());
        }
        std::printf(")\n");
        std::printf("probability:  %.17g\n", report.projection->probability);
        std::printf("conditional state:\n");
        const auto order = readout_order(*report.circuit);
        for (const auto& [occ, amp] : report.projection->conditional.terms()) {
            std::printf("  %-28s %+.12f %+.12fi\n", wsim::format_ket(occ, order).c_str(), amp.real(),
                        amp.imag());
        }
    }
    if (report.fidelity) {
        std::printf("fidelity:     %.12f  (target: %s)\n", *report.fidelity, report.target_label.c_str());
    }
}

int cmd_run(const std::string& builtin, double theta_deg, const std::string& circuit_path, bool as_json) {
    wsim::Circuit circuit;
    RunReport report;
    if (!circuit_path.empty()) {
        circuit = wsim::parse_circuit_file(circuit_path);
        report.source = "file:" + circuit_path;
    } else {
        const double theta = theta_deg / kDegPerRad;
        circuit = wsim::build_w4_circuit(
            theta, builtin == "w4" ? wsim::W4Variant::Plain : wsim::W4Variant::PolarizerD1);
        report.source = "builtin:" + builtin;
        report.theta_rad = theta;
    }
    const wsim::StateVector input =
        circuit.input.empty() ? wsim::StateVector::vacuum() : wsim::input_state(circuit);
    const wsim::RunResult result = wsim::run_circuit(circuit, input);
    report.circuit = &circuit;
    report.result = &result;
    for (const wsim::Tap& tap : circuit.taps) {
        report.tap_order.push_back(tap.name);
    }
    if (circuit.postselect) {
        report.projection = wsim::project_counts(
            result.final_state, circuit.postselect->detectors,
            std::vector<int>(circuit.postselect->detectors.size(), circuit.postselect->required_count));
    }
    if (!builtin.empty() && report.projection && !report.projection->conditional.empty()) {
        if (builtin == "w4") {
            report.target_label = "four-photon W on detectors (1,3,2,4)";
            report.fidelity =
                wsim::fidelity(report.projection->conditional, wsim::w_state(4, wsim::w4_readout_order()));
        } else {
            report.target_label = "|H>1 x three-photon W on detectors (3,2,4)";
            wsim::StateVector h1(wsim::Convention::Fock);
            h1.add_term({{wsim::mode_h("1"), 1}}, 1.0);
            report.fidelity = wsim::fidelity(report.projection->conditional,
                                             wsim::tensor(h1, wsim::w_state(3, {"3", "2", "4"})));
        }
    }
    if (as_json) {
        std::printf("%s\n", report_to_json(report).dump(2).c_str());
    } else {
        print_report_text(report);
    }
    return 0;
}

int cmd_sweep(double min_deg, double max_deg, int steps, const std::string& out_path) {
    const auto records = wsim::sweep_theta(min_deg / kDegPerRad, max_deg / kDegPerRad, steps);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << out_path << "'\n";
        return 1;
    }
    wsim::write_sweep_csv(out, records);
    out.flush();
    if (!out) {
        std::cerr << "error: failed writing '" << out_path << "'\n";
        return 1;
    }
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].probability > records[argmax].probability) {
            argmax = i;
        }
    }
    const wsim::SweepRecord& best = records[argmax];
    std::printf("%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", best.theta, best.theta * kDegPerRad,
                best.probability, best.closed_form, best.deviation, best.fidelity);
    return 0;
}

int cmd_optimize(double tol_rad, bool as_json) {
    const wsim::Optimum opt = wsim::maximize_success(tol_rad);
    const double expected_theta = wsim::reference::optimal_theta();
    const double expected_p = wsim::reference::optimal_probability();
    if (as_json) {
        OrderedJson root;
        root["command"] = "optimize";
        root["tol_rad"] = tol_rad;
        root["theta_star_rad"] = opt.theta_star;
        root["theta_star_deg"] = opt.theta_star * kDegPerRad;
        root["p_star"] = opt.p_star;
        root["expected_theta_rad"] = expected_theta;
        root["expected_p"] = expected_p;
        std::printf("%s\n", root.dump(2).c_str());
    } else {
        std::printf("theta_star:  %.9f rad (%.6f deg)\n", opt.theta_star, opt.theta_star * kDegPerRad);
        std::printf("p_star:      %.12f\n", opt.p_star);
        std::printf("expected:    theta = arccos(1/sqrt(3)) = %.9f rad, p = 2/27 = %.12f\n",
                    expected_theta, expected_p);
        std::printf("deviation:   theta %.3e, p %.3e\n", std::abs(opt.theta_star - expected_theta),
                    std::abs(opt.p_star - expected_p));
    }
    return 0;
}

int cmd_verify(double tol, bool as_json) {
    wsim::VerifyOptions options;
    options.tol_cap = tol;
    const std::vector<wsim::CheckResult> results = wsim::run_verification(options);
    int failed = 0;
    int psi2_notes = 0;
    int psi3_notes = 0;
    for (const wsim::CheckResult& r : results) {
        for (const std::string& note : r.notes) {
            psi2_notes += note.rfind("psi2@", 0) == 0 ? 1 : 0;
            psi3_notes += note.rfind("psi3@", 0) == 0 ? 1 : 0;
        }
        failed += r.pass ? 0 : 1;
    }
    if (as_json) {
        OrderedJson root;
        root["command"] = "verify";
        root["tol"] = tol;
        OrderedJson checks = OrderedJson::array();
        for (const wsim::CheckResult& r : results) {
            checks.push_back({{"name", r.name},
                              {"pass", r.pass},
                              {"deviation", r.deviation},
                              {"tolerance", r.tolerance},
                              {"millis", r.millis},
                              {"notes", r.notes}});
        }
        root["checks"] = std::move(checks);
        root["stage_term_diff_notes"] = {{"psi2", psi2_notes}, {"psi3", psi3_notes}};
        root["passed"] = static_cast<int>(results.size()) - failed;
        root["total"] = results.size();
        std::printf("%s\n", root.dump(2).c_str());
    } else {
        for (const wsim::CheckResult& r : results) {
            std::printf("[%s] %-32s deviation %9.3e  tolerance %9.3e  (%.1f ms)\n",
                        r.pass ? "PASS" : "FAIL", r.name.c_str(), r.deviation, r.tolerance, r.millis);
            for (const std::string& note : r.notes) {
                std::printf("       note: %s\n", note.c_str());
            }
        }
        std::printf("stage term-diff notes: psi2=%d psi3=%d\n", psi2_notes, psi3_notes);
        std::printf("verification: %zu/%zu checks passed\n", results.size() - failed, results.size());
    }
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear-optical post-selection simulator for the four-photon W-state scheme"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a circuit and report taps, probability and fidelity");
    std::string builtin;
    std::string circuit_path;
    double theta_deg = 0.0;
    bool run_json = false;
    auto* opt_builtin = run->add_option("--builtin", builtin, "Built-in scheme: w4 or w4-polarizer")
                            ->check(CLI::IsMember({"w4", "w4-polarizer"}));
    auto* opt_circuit = run->add_option("--circuit", circuit_path, "Circuit description file (JSON)");
    auto* opt_theta =
        run->add_option("--theta-deg", theta_deg, "Splitter angle in degrees (built-in circuits)")
            ->check(CLI::Range(0.0, 90.0));
    run->add_flag("--json", run_json, "Machine-readable output");
    run->add_flag("--text", "Human-readable output (default)")->excludes("--json");
    opt_builtin->excludes(opt_circuit);
    opt_theta->excludes(opt_circuit);
    opt_theta->needs(opt_builtin);

    auto* sweep = app.add_subcommand("sweep", "Sweep the splitter angle and write a CSV table");
    double min_deg = 0.0;
    double max_deg = 90.0;
    int steps = 0;
    std::string out_path;
    sweep->add_option("--min-deg", min_deg, "Lower angle bound in degrees")
        ->required()
        ->check(CLI::Range(0.0, 90.0));
    sweep->add_option("--max-deg", max_deg, "Upper angle bound in degrees")
        ->required()
        ->check(CLI::Range(0.0, 90.0));
    sweep->add_option("--steps", steps, "Number of grid points (>= 2)")
        ->required()
        ->check(CLI::Range(2, 1000000));
    sweep->add_option("--out", out_path, "Output CSV path")->required();

    auto* optimize = app.add_subcommand("optimize", "Maximize the success probability over the angle");
    double tol_rad = 1e-6;
    bool optimize_json = false;
    optimize->add_option("--tol-rad", tol_rad, "Search tolerance in radians")->check(CLI::PositiveNumber);
    optimize->add_flag("--json", optimize_json, "Machine-readable output");

    auto* verify = app.add_subcommand("verify", "Run the full verification suite");
    double verify_tol = 1e-9;
    bool verify_json = false;
    verify->add_option("--tol", verify_tol, "Tightening cap applied to the built-in check tolerances")
        ->check(CLI::PositiveNumber);
    verify->add_flag("--json", verify_json, "Machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) {
            if (builtin.empty() && circuit_path.empty()) {
                std::cerr << "error: exactly one of --builtin or --circuit is required\n";
                return 2;
            }
            if (!builtin.empty() && opt_theta->count() == 0) {
                std::cerr << "error: --theta-deg is required with --builtin\n";
                return 2;
            }
            return cmd_run(builtin, theta_deg, circuit_path, run_json);
        }
        if (sweep->parsed()) {
            if (!(min_deg < max_deg)) {
                std::cerr << "error: --min-deg must be smaller than --max-deg\n";
                return 2;
            }
            return cmd_sweep(min_deg, max_deg, steps, out_path);
        }
        if (optimize->parsed()) {
            return cmd_optimize(tol_rad, optimize_json);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_tol, verify_json);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
