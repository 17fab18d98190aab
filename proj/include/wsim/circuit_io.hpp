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
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "wsim/circuit.hpp"

// Circuit description files are JSON. Angles in files are degrees; the
// in-memory representation is radians. Unknown keys are rejected so typos
// fail loudly. Schema:
//
//   {
//     "modes": ["1", "2", ...],
//     "input": [ {"mode": "1", "pol": "H", "count": 1}, ... ]            (one product term)
//            | [ {"amplitude": [re, im], "photons": [ ... ]}, ... ]      (weighted terms)
//     "elements": [ {"type": "bs", "theta_deg": 45, "in": ["b","e"], "out": ["b","e"]},
//                   {"type": "pbs", "in": ["1","u1"], "out": ["b","a"]},
//                   {"type": "mirror", "in": ["a"], "out": ["a"]},
//                   {"type": "polarizer", "in": ["1"], "out": ["1"], "orientation": "H"} ],
//     "taps": [ {"after": 1, "name": "psi1"}, ... ],
//     "postselect": {"detectors": ["1","3","2","4"], "count": 1}
//   }

namespace wsim {

class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace io_detail {

using nlohmann::json;

inline ParseError error_at(const std::string& where, const std::string& what) {
    return ParseError(where + ": " + what);
}

inline void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const std::string& k : allowed) {
            known = known || (k == key);
        }
        if (!known) {
            throw error_at(where, "unknown key '" + key + "'");
        }
    }
}

inline const json& require(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw error_at(where, "missing key '" + key + "'");
    }
    return *it;
}

inline std::string get_string(const json& v, const std::string& where) {
    if (!v.is_string()) {
        throw error_at(where, "expected a string");
    }
    return v.get<std::string>();
}

inline double get_number(const json& v, const std::string& where) {
    if (!v.is_number()) {
        throw error_at(where, "expected a number");
    }
    return v.get<double>();
}

inline int get_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) {
        throw error_at(where, "expected an integer");
    }
    return v.get<int>();
}

inline Polarization get_pol(const json& v, const std::string& where) {
    const std::string s = get_string(v, where);
    if (s != "H" && s != "V") {
        throw error_at(where, "polarization must be \"H\" or \"V\"");
    }
    return pol_from_char(s[0]);
}

inline std::vector<std::string> get_string_array(const json& v, const std::string& where) {
    if (!v.is_array()) {
        throw error_at(where, "expected an array");
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(get_string(v[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

inline Occupation parse_photon_group_list(const json& list, const std::string& where) {
    Occupation occ;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const json& g = list[i];
        const std::string gw = where + "[" + std::to_string(i) + "]";
        if (!g.is_object()) {
            throw error_at(gw, "expected an object");
        }
        reject_unknown_keys(g, {"mode", "pol", "count"}, gw);
        const std::string mode = get_string(require(g, "mode", gw), gw + ".mode");
        const Polarization pol = get_pol(require(g, "pol", gw), gw + ".pol");
        int count = 1;
        if (g.contains("count")) {
            count = get_int(g["count"], gw + ".count");
            if (count < 1) {
                throw error_at(gw + ".count", "photon count must be >= 1");
            }
        }
        occ[{mode, pol}] += count;
    }
    return occ;
}

/// "line L, column C" for a byte offset inside a JSON parse error message.
inline std::string locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace io_detail

/// Parses a circuit description and validates it. Throws ParseError with a
/// location for syntax and schema violations, CircuitError for semantic ones
/// (undeclared modes and the like).
inline Circuit parse_circuit(const std::string& text) {
    using io_detail::json;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("syntax error at " + io_detail::locate(text, e.byte) + ": " + e.what());
    }
    if (!root.is_object()) {
        throw ParseError("circuit description must be a JSON object");
    }
    io_detail::reject_unknown_keys(root, {"modes", "input", "elements", "taps", "postselect"}, "top level");

    Circuit circuit;
    circuit.modes = io_detail::get_string_array(io_detail::require(root, "modes", "top level"), "modes");

    if (root.contains("input")) {
        const json& input = root["input"];
        if (!input.is_array()) {
            throw io_detail::error_at("input", "expected an array");
        }
        const bool weighted = !input.empty() && input[0].is_object() && input[0].contains("amplitude");
        if (weighted) {
            for (std::size_t i = 0; i < input.size(); ++i) {
                const json& t = input[i];
                const std::string where = "input[" + std::to_string(i) + "]";
                if (!t.is_object()) {
                    throw io_detail::error_at(where, "expected an object");
                }
                io_detail::reject_unknown_keys(t, {"amplitude", "photons"}, where);
                const json& amp = io_detail::require(t, "amplitude", where);
                if (!amp.is_array() || amp.size() != 2) {
                    throw io_detail::error_at(where + ".amplitude", "expected [re, im]");
                }
                const Complex coeff{io_detail::get_number(amp[0], where + ".amplitude[0]"),
                                    io_detail::get_number(amp[1], where + ".amplitude[1]")};
                const json& photons = io_detail::require(t, "photons", where);
                if (!photons.is_array()) {
                    throw io_detail::error_at(where + ".photons", "expected an array");
                }
                circuit.input.push_back(
                    {io_detail::parse_photon_group_list(photons, where + ".photons"), coeff});
            }
        } else if (!input.empty()) {
            circuit.input.push_back({io_detail::parse_photon_group_list(input, "input"), 1.0});
        }
    }

    if (root.contains("elements")) {
        const json& elements = root["elements"];
        if (!elements.is_array()) {
            throw io_detail::error_at("elements", "expected an array");
        }
        for (std::size_t i = 0; i < elements.size(); ++i) {
            const json& e = elements[i];
            const std::string where = "elements[" + std::to_string(i) + "]";
            if (!e.is_object()) {
                throw io_detail::error_at(where, "expected an object");
            }
            const std::string type = io_detail::get_string(io_detail::require(e, "type", where), where + ".type");
            Element element;
            if (type == "bs") {
                element.kind = ElementKind::BeamSplitter;
                io_detail::reject_unknown_keys(e, {"type", "theta_deg", "in", "out"}, where);
                const double deg =
                    io_detail::get_number(io_detail::require(e, "theta_deg", where), where + ".theta_deg");
                element.theta_rad = deg * std::numbers::pi / 180.0;
            } else if (type == "pbs") {
                element.kind = ElementKind::Pbs;
                io_detail::reject_unknown_keys(e, {"type", "in", "out"}, where);
            } else if (type == "mirror") {
                element.kind = ElementKind::Mirror;
                io_detail::reject_unknown_keys(e, {"type", "in", "out"}, where);
            } else if (type == "polarizer") {
                element.kind = ElementKind::Polarizer;
                io_detail::reject_unknown_keys(e, {"type", "in", "out", "orientation"}, where);
                element.orientation =
                    io_detail::get_pol(io_detail::require(e, "orientation", where), where + ".orientation");
            } else {
                throw io_detail::error_at(where + ".type", "unknown element type '" + type + "'");
            }
            element.in = io_detail::get_string_array(io_detail::require(e, "in", where), where + ".in");
            element.out = io_detail::get_string_array(io_detail::require(e, "out", where), where + ".out");
            circuit.elements.push_back(std::move(element));
        }
    }

    if (root.contains("taps")) {
        const json& taps = root["taps"];
        if (!taps.is_array()) {
            throw io_detail::error_at("taps", "expected an array");
        }
        for (std::size_t i = 0; i < taps.size(); ++i) {
            const json& t = taps[i];
            const std::string where = "taps[" + std::to_string(i) + "]";
            if (!t.is_object()) {
                throw io_detail::error_at(where, "expected an object");
            }
            io_detail::reject_unknown_keys(t, {"after", "name"}, where);
            Tap tap;
            tap.after = io_detail::get_int(io_detail::require(t, "after", where), where + ".after");
            tap.name = io_detail::get_string(io_detail::require(t, "name", where), where + ".name");
            circuit.taps.push_back(std::move(tap));
        }
    }

    if (root.contains("postselect")) {
        const json& ps = root["postselect"];
        if (!ps.is_object()) {
            throw io_detail::error_at("postselect", "expected an object");
        }
        io_detail::reject_unknown_keys(ps, {"detectors", "count"}, "postselect");
        CoincidencePattern pattern;
        pattern.detectors = io_detail::get_string_array(io_detail::require(ps, "detectors", "postselect"),
                                                        "postselect.detectors");
        if (ps.contains("count")) {
            pattern.required_count = io_detail::get_int(ps["count"], "postselect.count");
        }
        circuit.postselect = std::move(pattern);
    }

    validate(circuit);
    return circuit;
}

inline Circuit parse_circuit_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open circuit file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_circuit(buffer.str());
}

/// Serializes a circuit back to the file format. parse_circuit of the result
/// reproduces the circuit; beam splitter angles round-trip through degrees
/// and may differ in the last ulp.
inline std::string serialize_circuit(const Circuit& circuit) {
    nlohmann::ordered_json root;
    root["modes"] = circuit.modes;
    nlohmann::ordered_json input = nlohmann::ordered_json::array();
    for (const FockTerm& term : circuit.input) {
        nlohmann::ordered_json photons = nlohmann::ordered_json::array();
        for (const auto& [mode, count] : term.occ) {
            photons.push_back({{"mode", mode.spatial},
                               {"pol", std::string(1, pol_char(mode.pol))},
                               {"count", count}});
        }
        input.push_back({{"amplitude", {term.coeff.real(), term.coeff.imag()}}, {"photons", photons}});
    }
    root["input"] = std::move(input);
    nlohmann::ordered_json elements = nlohmann::ordered_json::array();
    for (const Element& e : circuit.elements) {
        nlohmann::ordered_json obj;
        obj["type"] = element_kind_name(e.kind);
        if (e.kind == ElementKind::BeamSplitter) {
            obj["theta_deg"] = e.theta_rad * 180.0 / std::numbers::pi;
        }
        obj["in"] = e.in;
        obj["out"] = e.out;
        if (e.kind == ElementKind::Polarizer) {
            obj["orientation"] = std::string(1, pol_char(e.orientation));
        }
        elements.push_back(std::move(obj));
    }
    root["elements"] = std::move(elements);
    nlohmann::ordered_json taps = nlohmann::ordered_json::array();
    for (const Tap& tap : circuit.taps) {
        taps.push_back({{"after", tap.after}, {"name", tap.name}});
    }
    root["taps"] = std::move(taps);
    if (circuit.postselect) {
        root["postselect"] = {{"detectors", circuit.postselect->detectors},
                              {"count", circuit.postselect->required_count}};
    }
    return root.dump(2) + "\n";
}

/// Structural equality with a tolerance on beam splitter angles, which pass
/// through a radian/degree conversion at the file boundary.
inline bool circuits_equivalent(const Circuit& a, const Circuit& b, double theta_tol = 1e-12) {
    if (a.modes != b.modes || a.elements.size() != b.elements.size() || a.taps.size() != b.taps.size() ||
        a.input.size() != b.input.size() || a.postselect.has_value() != b.postselect.has_value()) {
        return false;
    }
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
        const Element& x = a.elements[i];
        const Element& y = b.elements[i];
        if (x.kind != y.kind || x.in != y.in || x.out != y.out || x.orientation != y.orientation ||
            std::abs(x.theta_rad - y.theta_rad) > theta_tol) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.taps.size(); ++i) {
        if (a.taps[i].after != b.taps[i].after || a.taps[i].name != b.taps[i].name) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.input.size(); ++i) {
        if (a.input[i].occ != b.input[i].occ || std::abs(a.input[i].coeff - b.input[i].coeff) > theta_tol) {
            return false;
        }
    }
    if (a.postselect &&
        (a.postselect->detectors != b.postselect->detectors ||
         a.postselect->required_count != b.postselect->required_count)) {
        return false;
    }
    return true;
}

}  // namespace wsim
