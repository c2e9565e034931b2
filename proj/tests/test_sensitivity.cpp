#include <doctest.h>

#include <cmath>

#include "nads/errors.hpp"
#include "nads/sensitivity.hpp"
#include "nads/systems.hpp"

using namespace nads;

namespace {

MapSequence half() {
    return systems::affine(ParamSequence::constant(0.5), ParamSequence::constant(0), Interval(0, 1));
}

MapSequence periodic234() { return systems::logistic(ParamSequence::periodic({2, 3, 4})); }

// Plain double iteration of r x (1 - x), independent of the map classes.
double logistic_pair_sep(const ParamSequence& r, double x, double y, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        x = (r.value(k) * x) * (1.0 - x);
        y = (r.value(k) * y) * (1.0 - y);
    }
    return std::fabs(y - x);
}

}  // namespace

TEST_CASE("probe_separation: hand iterations") {
    CHECK(probe_separation(half(), 0.0, 0.1, 3) == std::vector<double>{0.1, 0.05, 0.025, 0.0125});

    const auto four = systems::logistic(ParamSequence::constant(4));
    CHECK(probe_separation(four, 0.0, 0.25, 2) == std::vector<double>{0.25, 0.75, 0.75});

    const auto two = systems::logistic(ParamSequence::constant(2));
    const double y0 = 1e-6;
    const auto w = probe_separation(two, 0.0, y0, 1);
    CHECK(w[1] == doctest::Approx(2 * y0 * (1 - y0)).epsilon(1e-10));

    CHECK_THROWS_AS(probe_separation(two, 0.0, 0.0, 3), ConfigError);
    CHECK_THROWS_AS(probe_separation(two, 0.0, 2.0, 3), DomainError);
}

TEST_CASE("probe_points: geometric, plus side first, clamped") {
    const auto ys = probe_points(Interval(0, 1), 0.5, 1e-3, 8);
    REQUIRE(ys.size() == 8);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(ys[2 * j] == 0.5 + std::ldexp(1e-3, -static_cast<int>(j)));
        CHECK(ys[2 * j + 1] == 0.5 - std::ldexp(1e-3, -static_cast<int>(j)));
    }
    // At the left endpoint the minus side clamps onto x0 and is dropped.
    const auto edge = probe_points(Interval(0, 1), 0.0, 1e-3, 16);
    CHECK(edge.size() == 8);
    for (double y : edge) CHECK(y > 0.0);
}

TEST_CASE("strong sensitivity: the periodic (2, 3, 4) logistic at 0") {
    const auto seq = periodic234();
    const auto rep = strong_sensitivity_test(seq, 0.0, 0.1, 1e-3, 16, 10000);
    CHECK(rep.verdict == SensitivityVerdict::StronglySensitive);
    CHECK(rep.probes.size() == 8);
    const auto r = ParamSequence::periodic({2, 3, 4});
    for (const auto& p : rep.probes) {
        REQUIRE(p.escapeTime.has_value());
        CHECK(p.initialGap > 0.0);
        CHECK(p.maxSeparation > 0.1);
        // Re-assert from an independent pair iteration.
        CHECK(logistic_pair_sep(r, 0.0, p.y0, *p.escapeTime) > 0.1);
        if (*p.escapeTime > 0) CHECK(logistic_pair_sep(r, 0.0, p.y0, *p.escapeTime - 1) <= 0.1);
    }
}

TEST_CASE("strong sensitivity: contractions are not detected") {
    for (std::size_t horizon : {10u, 1000u}) {
        const auto rep = strong_sensitivity_test(half(), 0.0, 0.01, 1e-3, 16, horizon);
        CHECK(rep.verdict == SensitivityVerdict::NotDetected);
        for (const auto& p : rep.probes) {
            CHECK_FALSE(p.escapeTime.has_value());
            CHECK_FALSE(p.growing);
        }
    }
    const auto six = systems::logistic(ParamSequence::constant(0.6));
    const auto rep = strong_sensitivity_test(six, 0.0, 0.01, 1e-3, 16, 10000);
    CHECK(rep.verdict == SensitivityVerdict::NotDetected);
    // Oracle: |w_{n+1}| <= 0.6 |w_n| near 0.
    for (const auto& p : rep.probes) {
        double prev = p.initialGap;
        for (std::size_t n = 1; n < 50; ++n) {
            const double w = logistic_pair_sep(ParamSequence::constant(0.6), 0.0, p.y0, n);
            CHECK(w <= 0.6 * prev + 1e-18);
            prev = w;
        }
    }
}

TEST_CASE("strong sensitivity: verdict logic") {
    // Expanding but too short a horizon: separations grow yet never pass delta.
    const auto two = systems::logistic(ParamSequence::constant(2));
    const auto rep = strong_sensitivity_test(two, 0.0, 0.1, 1e-6, 8, 8);
    CHECK(rep.verdict == SensitivityVerdict::Undetermined);
    for (const auto& p : rep.probes) CHECK(p.growing);

    // Verdict is StronglySensitive exactly when every probe escapes.
    for (double x0 : {0.0, 0.2, 0.5, 0.9}) {
        const auto r = strong_sensitivity_test(periodic234(), x0, 0.05, 1e-3, 16, 2000);
        bool all = true;
        for (const auto& p : r.probes) all = all && p.escapeTime.has_value();
        CHECK((r.verdict == SensitivityVerdict::StronglySensitive) == all);
    }
}

TEST_CASE("strong sensitivity: errors") {
    const auto seq = periodic234();
    CHECK_THROWS_AS(strong_sensitivity_test(seq, 1.5, 0.1, 1e-3, 16, 10), DomainError);
    CHECK_THROWS_AS(strong_sensitivity_test(seq, 0.0, 0.0, 1e-3, 16, 10), ConfigError);
    CHECK_THROWS_AS(strong_sensitivity_test(seq, 0.0, 0.1, -1e-3, 16, 10), ConfigError);
    CHECK_THROWS_AS(strong_sensitivity_test(seq, 0.0, 0.1, 1e-3, 4, 10), ConfigError);
    CHECK(default_delta(Interval(0, 1)) == 0.05);
}

TEST_CASE("sensitivity in a set") {
    const auto four = systems::logistic(ParamSequence::constant(4));
    const auto chaotic = sensitivity_in_set_test(four, {0.0, 0.13, 0.77}, 0.05, 1e-3, 16, 10000);
    CHECK(chaotic.verdict == SensitivityVerdict::StronglySensitive);
    CHECK(chaotic.points.size() == 3);

    const auto calm = sensitivity_in_set_test(half(), {0.1, 0.5, 0.9}, 0.05, 1e-3, 16, 1000);
    CHECK(calm.verdict == SensitivityVerdict::NotDetected);

    const auto single = sensitivity_in_set_test(periodic234(), {0.0}, 0.1, 1e-3, 16, 10000);
    const auto point = strong_sensitivity_test(periodic234(), 0.0, 0.1, 1e-3, 16, 10000);
    CHECK(single.verdict == point.verdict);
    REQUIRE(single.points.size() == 1);
    for (std::size_t i = 0; i < point.probes.size(); ++i)
        CHECK(single.points[0].probes[i].escapeTime == point.probes[i].escapeTime);

    CHECK_THROWS_AS(sensitivity_in_set_test(four, {}, 0.05, 1e-3, 16, 10), ConfigError);
}

TEST_CASE("separation table matches probe_separation") {
    const auto seq = periodic234();
    const auto rep = strong_sensitivity_test(seq, 0.0, 0.1, 1e-3, 8, 200);
    const auto rows = separation_table(seq, rep);
    REQUIRE(rows.size() == 201);
    for (std::size_t i = 0; i < rep.probes.size(); ++i) {
        const auto w = probe_separation(seq, 0.0, rep.probes[i].y0, 200);
        for (std::size_t n = 0; n <= 200; ++n) REQUIRE(rows[n][i] == w[n]);
    }
}

TEST_CASE("shift replay reproduces escapes bit for bit") {
    const auto seq = periodic234();
    const auto rep = strong_sensitivity_test(seq, 0.0, 0.1, 1e-3, 16, 10000);
    for (std::size_t k : {1u, 2u, 5u}) {
        const auto r = shift_sensitivity_check(seq, 0.0, k, rep);
        CHECK(r.pass);
        CHECK(r.replays.size() + r.skipped == rep.probes.size());
        for (const auto& p : r.replays) {
            CHECK(p.bitwiseEqual);
            CHECK(p.exceedsDelta);
        }
    }
    // k = N - 1 leaves a single step to replay.
    const std::size_t N = *rep.probes.front().escapeTime;
    REQUIRE(N >= 2);
    const auto edge = shift_sensitivity_check(seq, 0.0, N - 1, rep);
    CHECK(edge.pass);

    CHECK_THROWS_AS(shift_sensitivity_check(seq, 0.0, 0, rep), PreconditionError);
    CHECK_THROWS_AS(shift_sensitivity_check(seq, 0.0, 100000, rep), PreconditionError);
}

TEST_CASE("verdict names") {
    CHECK(to_string(SensitivityVerdict::StronglySensitive) == "StronglySensitive");
    CHECK(to_string(SensitivityVerdict::NotDetected) == "NotDetected");
    CHECK(to_string(SensitivityVerdict::Undetermined) == "Undetermined");
}
