#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polygon_chsh/theory.hpp"

using namespace polygon_chsh;

TEST_CASE("build_theory rejects n < 3") {
    CHECK_THROWS_AS(build_theory(2), std::invalid_argument);
    CHECK_THROWS_AS(build_theory(0), std::invalid_argument);
}

TEST_CASE("pinned coordinates") {
    const Theory t3 = build_theory(3);
    CHECK(t3.r == doctest::Approx(1.414214).epsilon(1e-6));
    CHECK(t3.pure_effects[0].x == doctest::Approx(0.471405).epsilon(1e-6));
    CHECK(t3.pure_effects[0].y == doctest::Approx(0.0).scale(1));
    CHECK(t3.pure_effects[0].z == doctest::Approx(0.333333).epsilon(1e-6));

    const Theory t4 = build_theory(4);
    CHECK(t4.pure_states[0].x == doctest::Approx(1.189207).epsilon(1e-6));
    CHECK(t4.pure_states[0].z == doctest::Approx(1.0));
    CHECK(t4.pure_effects[0].x == doctest::Approx(0.420448).epsilon(1e-6));
    CHECK(t4.pure_effects[0].y == doctest::Approx(0.420448).epsilon(1e-6));
    CHECK(t4.pure_effects[0].z == doctest::Approx(0.5));

    const Theory t6 = build_theory(6);
    CHECK(pure_state(t6, 3).x == doctest::Approx(-1.074570).epsilon(1e-6));
    CHECK(pure_state(t6, 3).y == doctest::Approx(0.0).scale(1));
}

TEST_CASE("index wrapping") {
    const Theory t = build_theory(4);
    CHECK(norm(pure_state(t, 4) - pure_state(t, 0)) == doctest::Approx(0.0).scale(1));
    CHECK(norm(pure_state(t, -1) - pure_state(t, 3)) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("core invariants over n in [3,40]") {
    for (int n = 3; n <= 40; ++n) {
        const Theory t = build_theory(n);
        CHECK(t.pure_effects.size() == static_cast<std::size_t>(n % 2 == 0 ? n : 2 * n));
        // maximally mixed state is the vertex average
        Vec3 avg{0, 0, 0};
        for (const Vec3& w : t.pure_states) avg = avg + w;
        avg = avg / static_cast<double>(n);
        CHECK(norm(avg - t.max_mixed) <= 1e-12);
        for (const Vec3& w : t.pure_states) {
            CHECK(dot(t.unit, w) == doctest::Approx(1.0).epsilon(1e-12));
            for (const Vec3& e : t.pure_effects) {
                const double p = dot(e, w);
                CHECK(p >= -1e-12);
                CHECK(p <= 1.0 + 1e-12);
            }
        }
        // order isomorphism maps pure effects onto scaled vertices
        const double c = n % 2 == 0 ? 0.5 : 1.0 / (1.0 + t.r * t.r);
        for (int i = 0; i < n; ++i)
            CHECK(norm(t.T * t.pure_effects[i] - c * t.pure_states[i]) <= 1e-12);
        if (n % 2 == 0)
            for (int i = 0; i < n; ++i)
                CHECK(norm((t.unit - pure_effect(t, i)) - pure_effect(t, i + n / 2)) <= 1e-12);
    }
}

TEST_CASE("effect saturation for odd n") {
    const Theory t = build_theory(5);
    CHECK(dot(pure_effect(t, 0), pure_state(t, 0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("contains_state") {
    const Theory t4 = build_theory(4);
    CHECK(contains_state(t4, t4.max_mixed));
    CHECK_FALSE(contains_state(t4, Vec3{2, 0, 1}));
    const Theory t5 = build_theory(5);
    CHECK(contains_state(t5, pure_state(t5, 3)));

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 3 + static_cast<int>(unif(rng) * 8);
        const Theory t = build_theory(n);
        Vec3 v{0, 0, 0};
        double total = 0;
        for (int i = 0; i < n; ++i) {
            const double w = unif(rng);
            v = v + w * t.pure_states[i];
            total += w;
        }
        v = v / total;
        CHECK(contains_state(t, v));
    }
    for (int n = 3; n <= 10; ++n) {
        const Theory t = build_theory(n);
        const Vec3 out = t.max_mixed + 1.01 * (pure_state(t, 0) - t.max_mixed);
        CHECK_FALSE(contains_state(t, out));
    }
}

TEST_CASE("contains_effect") {
    const Theory t5 = build_theory(5);
    CHECK(contains_effect(t5, t5.unit));
    CHECK(contains_effect(t5, Vec3{0, 0, 0}));
    CHECK_FALSE(contains_effect(t5, 1.1 * pure_effect(t5, 0)));
}

TEST_CASE("binary_observable") {
    const Theory t6 = build_theory(6);
    const Observable o = binary_observable(t6, 1);
    CHECK(norm(o.effect0 + o.effect1 - t6.unit) <= 1e-12);
    CHECK(norm(o.effect1 - pure_effect(t6, 4)) <= 1e-12);
    const Theory t5 = build_theory(5);
    const Observable o5 = binary_observable(t5, 2);
    CHECK(contains_effect(t5, o5.effect0));
    CHECK(contains_effect(t5, o5.effect1));
}

TEST_CASE("symmetry group") {
    for (int n : {4, 5, 7}) {
        const Theory t = build_theory(n);
        const std::vector<Mat3> group = symmetry_group(t);
        CHECK(group.size() == static_cast<std::size_t>(2 * n));
        CHECK(max_abs_diff(group[0], Mat3::identity()) <= 1e-15);
        for (const Mat3& g : group) {
            CHECK(is_orthogonal(g));
            CHECK(norm(g * t.max_mixed - t.max_mixed) <= 1e-12);
            // permutes vertex set
            for (const Vec3& w : t.pure_states) {
                const Vec3 gw = g * w;
                double best = 1e9;
                for (const Vec3& v : t.pure_states) best = std::min(best, norm(gw - v));
                CHECK(best <= 1e-9);
            }
            // preserves the pure-effect set
            for (const Vec3& e : t.pure_effects) {
                const Vec3 ge = g * e;
                double best = 1e9;
                for (const Vec3& f : t.pure_effects) best = std::min(best, norm(ge - f));
                CHECK(best <= 1e-9);
            }
        }
    }
    const Theory t4 = build_theory(4);
    CHECK(norm(symmetry_group(t4)[1] * pure_state(t4, 0) - pure_state(t4, 1)) <= 1e-12);
}

TEST_CASE("order isomorphism") {
    CHECK(max_abs_diff(order_isomorphism(build_theory(5)), Mat3::identity()) <= 1e-15);
    const Theory t4 = build_theory(4);
    CHECK(norm(order_isomorphism(t4) * pure_effect(t4, 0) - 0.5 * pure_state(t4, 0)) <= 1e-12);
    const Theory t6 = build_theory(6);
    for (int i = 0; i < 6; ++i) {
        const Vec3 img = order_isomorphism(t6) * pure_effect(t6, i);
        CHECK(norm(img - 0.5 * pure_state(t6, i)) <= 1e-12);
    }
}
