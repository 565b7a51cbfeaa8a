// CHSH-game arithmetic: probability tables, the game predicate, the CHSH
// value through four equivalent routes, and the explicit symmetric-parameter
// formula for odd polygons.
#pragma once

#include <array>
#include <stdexcept>

#include "bipartite.hpp"

namespace polygon_chsh {

struct InvalidProbability : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ChshSetting {
    BipartiteState state;
    Observable a0, a1;  // Alice, settings s = 0, 1
    Observable b0, b1;  // Bob, settings t = 0, 1
};

struct ProbTable {
    // p[a][b][s][t], outcomes and settings in {0,1} ({+1,-1} maps 1->0, -1->1).
    double p[2][2][2][2] = {};
};

// CHSH game predicate: win iff a XOR b = s AND t.
inline int game_predicate(int a, int b, int s, int t) { return ((a ^ b) == (s & t)) ? 1 : 0; }

inline ProbTable prob_table(const Theory& theory, const ChshSetting& setting) {
    const Observable* alice[2] = {&setting.a0, &setting.a1};
    const Observable* bob[2] = {&setting.b0, &setting.b1};
    ProbTable table;
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a) {
            const Vec3 img = setting.state.map * (a == 0 ? alice[s]->effect0 : alice[s]->effect1);
            for (int t = 0; t < 2; ++t)
                for (int b = 0; b < 2; ++b) {
                    const double v = dot(b == 0 ? bob[t]->effect0 : bob[t]->effect1, img);
                    if (v < -1e-9) throw InvalidProbability("prob_table: negative probability");
                    table.p[a][b][s][t] = v;
                }
        }
    (void)theory;
    return table;
}

// Correlator route: C = E(00) + E(01) + E(10) - E(11).
inline double chsh_value(const ProbTable& table) {
    double c = 0.0;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
            double e = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) e += (((a ^ b) == 0) ? 1.0 : -1.0) * table.p[a][b][s][t];
            c += (s == 1 && t == 1) ? -e : e;
        }
    return c;
}

// Predicate route: P_win = (1/4) sum_{s,t,a,b} V(a,b|s,t) p(a,b|s,t).
inline double winning_probability(const ProbTable& table) {
    double w = 0.0;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) w += game_predicate(a, b, s, t) * table.p[a][b][s][t];
    return 0.25 * w;
}

inline double chsh_from_win(double p_win) { return 4.0 * (2.0 * p_win - 1.0); }

// Q_s^a = (1/2) sum_{t,b} V(a,b|s,t) B_t^b; each {Q_s^0, Q_s^1} is an observable.
struct QEffects {
    Vec3 q[2][2];  // q[s][a]
};

inline QEffects q_effects(const Observable& b0, const Observable& b1) {
    QEffects out;
    const Vec3 bt[2][2] = {{b0.effect0, b0.effect1}, {b1.effect0, b1.effect1}};
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a) {
            Vec3 q{0, 0, 0};
            for (int t = 0; t < 2; ++t)
                for (int b = 0; b < 2; ++b)
                    if (game_predicate(a, b, s, t)) q = q + bt[t][b];
            out.q[s][a] = 0.5 * q;
        }
    return out;
}

// R_t^b mirrors Q with the roles of (s,a) and (t,b) exchanged; the predicate
// is symmetric under that exchange, so the same sums apply to Alice's side.
inline QEffects r_effects(const Observable& a0, const Observable& a1) { return q_effects(a0, a1); }

// Assemblage route: P_win = (1/2) sum_{s,a} p(a|s) <Q_s^a, omega_s^a>.
inline double win_via_assemblage(const AssemblagePair& pair, const QEffects& q) {
    double w = 0.0;
    const Assemblage* asm_s[2] = {&pair.a0, &pair.a1};
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a)
            w += asm_s[s]->probs[a] * dot(q.q[s][a], asm_s[s]->states[a]);
    return 0.5 * w;
}

// Parameters of a self-adjoint bipartite state in the rotated frame W:
// the frame matrix of eta is [[a,b,c],[b,d,e],[c,e,1]].
struct SymmetricParams {
    int n = 0;        // odd side count
    int n_star = 0;   // optimal setting separation from Lemma 1
    double a = 0, b = 0, c = 0, d = 0, e = 0;
};

// The C-vector of the explicit CHSH formula for the quintuple
// (eta; E(n_star), E(0); E(n_star), E(0)) in frame W.
inline std::array<double, 5> chsh_coefficient_vector(const Theory& t, int n_star) {
    const double th = t.theta, r = t.r;
    return {r * (1.0 + std::cos(2.0 * n_star * th)),
            2.0 * r * std::sin(2.0 * n_star * th),
            2.0 * (1.0 - r * r) * std::cos(n_star * th),
            r * (-1.0 + std::cos(2.0 * n_star * th)),
            2.0 * (1.0 - r * r) * std::sin(n_star * th)};
}

inline double symmetric_chsh(const Theory& t, const SymmetricParams& p) {
    const std::array<double, 5> cv = chsh_coefficient_vector(t, p.n_star);
    const double dotv = cv[0] * p.a + cv[1] * p.b + cv[2] * p.c + cv[3] * p.d + cv[4] * p.e;
    const double w = 1.0 - 2.0 * t.R;
    return 4.0 * t.R * t.R * t.r * dotv + 2.0 * w * w;
}

// Frame W: rotation by n_star * theta; reconstructs the canonical-frame map.
inline Mat3 frame_rotation(const Theory& t, int n_star) { return rotation_z(n_star * t.theta); }

inline Mat3 reconstruct_symmetric(const Theory& t, const SymmetricParams& p) {
    Mat3 mf;
    mf[0] = {p.a, p.b, p.c};
    mf[1] = {p.b, p.d, p.e};
    mf[2] = {p.c, p.e, 1.0};
    const Mat3 w = frame_rotation(t, p.n_star);
    return w * mf * w.transposed();
}

}  // namespace polygon_chsh
