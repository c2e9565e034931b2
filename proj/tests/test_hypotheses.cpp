#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nads/errors.hpp"
#include "nads/hypotheses.hpp"
#include "nads/systems.hpp"

using namespace nads;

namespace {

MapSequence half() {
    return systems::affine(ParamSequence::constant(0.5), ParamSequence::constant(0), Interval(0, 1));
}

MapSequence periodic234() { return systems::logistic(ParamSequence::periodic({2, 3, 4})); }

// Smallest grid offset m at which some index n and grid pair (i, i + m) has
// |h(x_{i+m}) - h(x_i)| >= eps, by direct enumeration; cells + 1 when none.
std::size_t first_failing_offset(const IndexedFamily& h, const Interval& dom, std::size_t cells,
                                 std::uint64_t indices, double eps) {
    const auto xs = MapSequence::grid(dom, cells + 1);
    std::vector<double> v(xs.size());
    std::size_t best = cells + 1;
    for (std::uint64_t n = 0; n < indices; ++n) {
        h(n, xs, v);
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i + 1; j < v.size() && j - i < best; ++j)
                if (std::fabs(v[j] - v[i]) >= eps) {
                    best = j - i;
                    break;
                }
    }
    return best;
}

}  // namespace

TEST_CASE("modulus of the logistic derivative family") {
    const auto seq = periodic234();
    const auto m = estimate_modulus(seq, seq.domain(), {0.1, 0.01}, 1e-4, 3);
    REQUIRE(m.table.size() == 2);
    CHECK(m.table[0].epsilon == 0.1);
    CHECK(m.table[1].epsilon == 0.01);
    // Lipschitz constant 2 max r = 8
    CHECK(m.table[0].delta >= 0.0125 * 0.9);
    CHECK(m.table[0].delta <= 0.0125 * 1.1);
    CHECK(m.table[1].delta >= 0.00125 * 0.9);
    CHECK(m.exactForPeriodic);
    CHECK(m.delta_for(0.5) == m.table[0].delta);
    CHECK(m.delta_for(0.05) == m.table[1].delta);
    CHECK_FALSE(m.delta_for(0.001).has_value());
}

TEST_CASE("modulus: zero and small oscillation give the full width") {
    const auto m = estimate_modulus(half(), Interval(0, 1), {0.1, 0.01}, 1e-3, 4);
    for (const auto& row : m.table) CHECK(row.delta == 1.0);

    // Logistic derivative range under r = 2 is [-2, 2]: eps = 5 exceeds it.
    const auto two = systems::logistic(ParamSequence::constant(2));
    const auto w = estimate_modulus(two, two.domain(), {5.0}, 1e-3, 1);
    CHECK(w.table[0].delta == 1.0);
}

TEST_CASE("modulus: table agrees with direct pair enumeration") {
    const auto seq = systems::logistic(ParamSequence::seeded_uniform(1, 4, 12));
    const IndexedFamily h = [&seq](std::uint64_t n, std::span<const double> x, std::span<double> out) {
        seq.deriv1_batch(n, x, out);
        for (auto& v : out) v = std::sin(5 * v);  // nonlinear, non-monotone in x
    };
    const Interval dom(0, 1);
    const std::size_t cells = 400;
    const std::vector<double> eps{0.5, 0.2, 0.05, 0.01};
    const auto m = estimate_modulus(h, dom, eps, dom.width() / cells, 20);
    for (const auto& row : m.table) {
        const std::size_t fail = first_failing_offset(h, dom, cells, 20, row.epsilon);
        CAPTURE(row.epsilon);
        CHECK(row.delta == doctest::Approx(std::min(1.0, fail * (1.0 / cells))).epsilon(1e-12));
    }
    // delta decreases with epsilon
    for (std::size_t i = 1; i < m.table.size(); ++i) CHECK(m.table[i].delta <= m.table[i - 1].delta);
}

TEST_CASE("modulus composition") {
    const auto outer = lipschitz_modulus(2.0, {0.1, 0.01}, 10.0);
    const auto inner = lipschitz_modulus(3.0, {0.05, 0.005}, 10.0);
    const auto c = compose_modulus(outer, inner, true);
    REQUIRE(c.table.size() == 2);
    CHECK(c.table[0].delta == doctest::Approx(0.1 / 6).epsilon(1e-15));
    CHECK(c.table[1].delta == doctest::Approx(0.01 / 6).epsilon(1e-15));

    const auto id = lipschitz_modulus(1.0, {0.1, 0.01}, 10.0);
    const auto inner2 = lipschitz_modulus(4.0, {0.1, 0.01}, 10.0);
    const auto c2 = compose_modulus(id, inner2, true);
    for (std::size_t i = 0; i < 2; ++i) CHECK(c2.table[i].delta == inner2.table[i].delta);

    CHECK_THROWS_AS(compose_modulus(outer, inner, false), RangeError);
    CHECK_THROWS_AS(compose_modulus(outer, lipschitz_modulus(1.0, {1.0}, 1.0), true), ConfigError);
}

TEST_CASE("composition with a clamped logarithm survives a double-grid check") {
    // g(z) = ln(max(z, M/2)) applied to |f_n'|, M = inf |f_n'(0)| = 2.
    const auto seq = periodic234();
    const double M = 2.0;
    const auto outer = lipschitz_modulus(2.0 / M, {0.1, 0.01}, 4.0);
    const IndexedFamily absd = [&seq](std::uint64_t n, std::span<const double> x, std::span<double> out) {
        seq.deriv1_batch(n, x, out);
        for (auto& v : out) v = std::fabs(v);
    };
    std::vector<double> innerEps;
    for (const auto& r : outer.table) innerEps.push_back(r.delta);
    const auto inner = estimate_modulus(absd, seq.domain(), innerEps, 1e-3, 3, true);
    const auto comp = compose_modulus(outer, inner, true);

    const auto xs = MapSequence::grid(seq.domain(), 1001);
    std::vector<double> v(xs.size());
    for (const auto& row : comp.table) {
        for (std::uint64_t n = 0; n < 3; ++n) {
            absd(n, xs, v);
            for (auto& z : v) z = std::log(std::max(z, M / 2));
            // offsets measured in cells so rounding in xs cannot widen the window
            const auto reach = static_cast<std::size_t>(std::llround(row.delta / 1e-3));
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = i + 1; j < xs.size() && j - i < reach; ++j)
                    REQUIRE(std::fabs(v[j] - v[i]) < row.epsilon);
        }
    }
}

TEST_CASE("derivative infimum along an orbit") {
    const auto seq = periodic234();
    CHECK(derivative_infimum(seq, iterate_orbit(seq, 0.0, 100), 0) == 2.0);
    CHECK(derivative_infimum(half(), iterate_orbit(half(), 0.9, 50), 0) == 0.5);
    const auto four = systems::logistic(ParamSequence::constant(4));
    CHECK(derivative_infimum(four, iterate_orbit(four, 0.5, 10), 0) == 0.0);
}

TEST_CASE("second derivative bound") {
    CHECK(second_derivative_bound(periodic234(), 0, 0) == 8.0);
    const auto rnd = systems::logistic(ParamSequence::seeded_uniform(0.5, 0.7, 1));
    const double m = second_derivative_bound(rnd, 0, 0);
    CHECK(m <= 1.4);
    CHECK(m > 1.3);
    CHECK(second_derivative_bound(half(), 0, 0) == 0.0);
    const auto c1 = systems::polynomial({ParamSequence::constant(0), ParamSequence::constant(0.5)},
                                        Interval(-1, 1), Smoothness::C1);
    CHECK_THROWS_AS(second_derivative_bound(c1, 0, 0), SmoothnessError);
}

TEST_CASE("total invariance") {
    const auto four = systems::logistic(ParamSequence::constant(4));
    const auto full = check_invariance(four, Interval(0, 1), 0, 0);
    CHECK(full.pass);
    CHECK_FALSE(full.sampled);
    const auto part = check_invariance(four, Interval(0, 0.9), 0, 0);
    CHECK_FALSE(part.pass);
    CHECK(part.worstExcursion == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(check_invariance(half(), Interval(0, 1), 0, 0).pass);
    CHECK(check_invariance(systems::logistic(ParamSequence::seeded_uniform(1, 4, 3)), Interval(0, 1), 0, 0)
              .sampled);
    CHECK_THROWS_AS(check_invariance(four, Interval(0.5, 1.5), 0, 0), ConfigError);
}

TEST_CASE("theorem hypotheses at a point") {
    const auto seq = periodic234();
    const auto e = estimate_exponents(iterate_orbit(seq, 0.0, 1000));
    const auto t31 = check_theorem(seq, Theorem::T31, 0.0, e);
    CHECK(t31.pass);
    CHECK(t31.theorem == Theorem::T31);
    CHECK(t31.suggestedDelta == 0.05);
    REQUIRE(t31.checks.size() == 3);
    CHECK(t31.checks[1].name == "derivative_infimum_positive");
    CHECK(t31.checks[1].evidence == 2.0);
    CHECK_FALSE(t31.checks[1].sampled);  // fixed orbit, exact period
    CHECK(t31.sampled);                  // exponent is a finite-horizon estimate

    const auto rnd = systems::logistic(ParamSequence::seeded_uniform(0.5, 0.7, 1));
    const auto t41 = check_theorem(rnd, Theorem::T41, 0.0, estimate_exponents(iterate_orbit(rnd, 0.0, 1000)));
    CHECK(t41.pass);

    const auto two = systems::logistic(ParamSequence::constant(2));
    const auto bad = check_theorem(two, Theorem::T41, 0.0, estimate_exponents(iterate_orbit(two, 0.0, 1000)));
    CHECK_FALSE(bad.pass);
    const auto neg = std::find_if(bad.checks.begin(), bad.checks.end(),
                                  [](const HypothesisCheck& c) { return c.name == "exponent_negative"; });
    REQUIRE(neg != bad.checks.end());
    CHECK_FALSE(neg->pass);

    CHECK_THROWS_AS(check_theorem(seq, Theorem::T32, 0.0, e), ConfigError);
    CHECK(to_string(Theorem::T41) == "T41");
}

TEST_CASE("theorem hypotheses on a set") {
    const auto four = systems::logistic(ParamSequence::constant(4));
    HypothesisConfig cfg;
    cfg.orbitHorizon = 2000;
    const auto r = check_theorem(four, Interval(0, 1), {0.1, 0.3, 0.7}, cfg);
    CHECK(r.theorem == Theorem::T32);
    REQUIRE(r.checks.size() == 4);
    CHECK(r.checks[0].pass);        // total invariance
    CHECK_FALSE(r.checks[2].pass);  // f'(1/2) = 0
    CHECK_FALSE(r.pass);

    // x -> 1 - x: |f'| = 1 everywhere, exponent exactly 0.
    const auto flip = systems::affine(ParamSequence::constant(-1), ParamSequence::constant(1), Interval(0, 1));
    const auto f = check_theorem(flip, Interval(0, 1), {0.2}, cfg);
    CHECK(f.checks[0].pass);
    CHECK(f.checks[2].pass);
    CHECK_FALSE(f.checks[3].pass);  // exponent is exactly 0

    CHECK_THROWS_AS(check_theorem(four, Interval(0.2, 0.4), {0.5}, cfg), DomainError);
    CHECK_THROWS_AS(check_theorem(four, Interval(0, 1), {}, cfg), ConfigError);
}
