// Bipartite states of the maximal tensor product, stored as their induced
// 3x3 cone-preserving maps, plus assemblage generation.
#pragma once

#include <stdexcept>
#include <vector>

#include "theory.hpp"

namespace polygon_chsh {

struct NotNormalized : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotPositive : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadMixture : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotSymmetry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BipartiteState {
    int n = 0;    // side count of both subsystems
    Mat3 map;     // eta_hat with <f, eta_hat e> = <e (x) f, eta>
    bool validated = false;
};

struct Assemblage {
    int s = 0;                 // Alice's setting label
    double probs[2] = {0, 0};  // p(a|s)
    Vec3 states[2];            // omega_s^a
    bool degenerate[2] = {false, false};  // p == 0 branches report omega_M
};

struct AssemblagePair {
    Assemblage a0, a1;  // s = 0 and s = 1
    Vec3 average;       // sum_a p(a|s) omega_s^a (s-independent by no-signaling)
};

// Extreme rays of the effect cone: the first n stored pure effects. For odd
// n the complements ebar(i) are conic combinations of adjacent e(j) and are
// redundant as cone generators.
inline int effect_generator_count(const Theory& t) { return t.n; }

// Max-tensor membership: normalization <u, eta_hat u> = 1 and positivity on
// every pair of pure-effect cone generators.
inline bool in_max_tensor(const Theory& t, const Mat3& map, double tol = 1e-9) {
    if (std::abs(map[2][2] - 1.0) > tol) return false;
    const int g = effect_generator_count(t);
    for (int i = 0; i < g; ++i) {
        const Vec3 me = map * t.pure_effects[i];
        for (int j = 0; j < g; ++j)
            if (dot(t.pure_effects[j], me) < -tol) return false;
    }
    return true;
}

inline BipartiteState state_from_map(const Theory& t, const Mat3& map, double tol = 1e-9) {
    if (std::abs(map[2][2] - 1.0) > tol)
        throw NotNormalized("state_from_map: <u, eta_hat u> != 1");
    if (!in_max_tensor(t, map, tol))
        throw NotPositive("state_from_map: negative on a pure-effect pair");
    return {t.n, map, true};
}

struct MixtureTerm {
    double weight;
    Vec3 alice, bob;
};

inline BipartiteState separable_state(const Theory& t, const std::vector<MixtureTerm>& mixture) {
    double total = 0.0;
    Mat3 map;
    for (const MixtureTerm& term : mixture) {
        if (term.weight < 0) throw BadMixture("separable_state: negative weight");
        if (!contains_state(t, term.alice) || !contains_state(t, term.bob))
            throw BadMixture("separable_state: component outside the state space");
        total += term.weight;
        map = map + outer(term.bob, term.alice) * term.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw BadMixture("separable_state: weights must sum to 1");
    return {t.n, map, true};
}

inline BipartiteState max_entangled(const Theory& t, const Mat3& g) {
    if (!is_orthogonal(g, 1e-9) || norm(g * t.max_mixed - t.max_mixed) > 1e-9)
        throw NotSymmetry("max_entangled: g is not a polygon symmetry");
    bool permutes = true;
    for (const Vec3& w : t.pure_states) {
        const Vec3 gw = g * w;
        bool hit = false;
        for (const Vec3& v : t.pure_states) hit = hit || norm(gw - v) <= 1e-9;
        permutes = permutes && hit;
    }
    if (!permutes) throw NotSymmetry("max_entangled: g does not permute the vertices");
    return {t.n, t.T * g, true};
}

// One maximally entangled state per element of the dihedral group, in the
// symmetry_group enumeration order (rotations first, then reflections).
inline std::vector<BipartiteState> enumerate_max_entangled(const Theory& t) {
    std::vector<BipartiteState> out;
    out.reserve(2 * t.n);
    for (const Mat3& g : symmetry_group(t)) out.push_back({t.n, t.T * g, true});
    return out;
}

inline BipartiteState transpose_state(const BipartiteState& s) {
    return {s.n, s.map.transposed(), s.validated};
}

inline Assemblage conditional_assemblage(const Theory& t, const BipartiteState& state,
                                         const Observable& alice_obs, int s = 0) {
    Assemblage out;
    out.s = s;
    const Vec3 effects[2] = {alice_obs.effect0, alice_obs.effect1};
    for (int a = 0; a < 2; ++a) {
        const Vec3 img = state.map * effects[a];
        const double p = dot(t.unit, img);
        out.probs[a] = p;
        if (p > 1e-12) {
            out.states[a] = img / p;
        } else {
            out.states[a] = t.max_mixed;
            out.degenerate[a] = true;
        }
    }
    return out;
}

inline AssemblagePair assemblage_pair(const Theory& t, const BipartiteState& state,
                                      const Observable& a0, const Observable& a1) {
    AssemblagePair pair;
    pair.a0 = conditional_assemblage(t, state, a0, 0);
    pair.a1 = conditional_assemblage(t, state, a1, 1);
    pair.average = pair.a0.probs[0] * pair.a0.states[0] + pair.a0.probs[1] * pair.a0.states[1];
    return pair;
}

}  // namespace polygon_chsh
