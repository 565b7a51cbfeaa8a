// JSON serialization of bipartite states and report helpers.
#pragma once

#include <string>

#include <json.hpp>

#include "bipartite.hpp"

namespace polygon_chsh {

// Round to 12 decimals so JSON output is byte-stable across runs.
inline double json_round(double v) {
    const double r = std::round(v * 1e12) / 1e12;
    return r == 0.0 ? 0.0 : r;  // normalize -0
}

inline nlohmann::json to_json(const BipartiteState& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["map"] = nlohmann::json::array();
    for (int i = 0; i < 3; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < 3; ++k) row.push_back(json_round(s.map[i][k]));
        j["map"].push_back(row);
    }
    return j;
}

// Accepts either {"n": int, "map": [[f64;3];3]} or the vertex-index mixture
// shorthand {"n": int, "mixture": [[weight, iA, iB], ...]}.
inline BipartiteState state_from_json(const Theory& t, const nlohmann::json& j, double tol = 1e-9) {
    if (j.contains("mixture")) {
        std::vector<MixtureTerm> mix;
        for (const auto& term : j.at("mixture"))
            mix.push_back({term.at(0).get<double>(),
                           pure_state(t, term.at(1).get<int>()),
                           pure_state(t, term.at(2).get<int>())});
        return separable_state(t, mix);
    }
    Mat3 m;
    const auto& rows = j.at("map");
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) m[i][k] = rows.at(i).at(k).get<double>();
    return state_from_map(t, m, tol);
}

}  // namespace polygon_chsh
