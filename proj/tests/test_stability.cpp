#include <doctest.h>

#include <cmath>
#include <random>

#include "nads/errors.hpp"
#include "nads/sensitivity.hpp"
#include "nads/stability.hpp"
#include "nads/systems.hpp"
#include "oracles.hpp"

using namespace nads;

namespace {

MapSequence half() {
    return systems::affine(ParamSequence::constant(0.5), ParamSequence::constant(0), Interval(0, 1));
}

ExponentEstimate exponents_at(const MapSequence& seq, double x0, std::size_t N = 1000) {
    return estimate_exponents(iterate_orbit(seq, x0, N));
}

}  // namespace

TEST_CASE("discrete Gronwall bound: closed forms") {
    const auto flat = discrete_gronwall_bound(5.0, std::vector<double>(10, 0.0));
    CHECK(flat == std::vector<double>(11, 5.0));

    const auto e = discrete_gronwall_bound(1.0, std::vector<double>(3, 1.0));
    REQUIRE(e.size() == 4);
    for (std::size_t n = 0; n < 4; ++n) CHECK(e[n] == doctest::Approx(std::exp(double(n))).epsilon(1e-15));

    CHECK_THROWS_AS(discrete_gronwall_bound(-1.0, std::vector<double>{}), NegativeInputError);
    CHECK_THROWS_AS(discrete_gronwall_bound(1.0, std::vector<double>{0.5, -0.1}), NegativeInputError);
    CHECK(discrete_gronwall_bound(2.0, std::vector<double>{}) == std::vector<double>{2.0});
}

TEST_CASE("discrete Gronwall bound dominates the equality recursion") {
    const auto z = oracle::gronwall_equality(1.0, std::vector<double>(40, 1.0));
    const auto b = discrete_gronwall_bound(1.0, std::vector<double>(40, 1.0));
    for (std::size_t n = 0; n <= 40; ++n) {
        CHECK(z[n] == std::ldexp(1.0, static_cast<int>(n)));
        CHECK(z[n] <= b[n]);
    }

    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> B(0.0, 10.0), mu(0.0, 0.5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> m(64);
        for (auto& v : m) v = mu(g);
        const double b0 = B(g);
        const auto zz = oracle::gronwall_equality(b0, m);
        const auto bb = discrete_gronwall_bound(b0, m);
        for (std::size_t n = 0; n <= 64; ++n) REQUIRE(zz[n] <= bb[n] + 4 * oracle::ulp(bb[n]));
    }
}

TEST_CASE("Lyapunov stability probe") {
    const auto r = lyapunov_stability_test(half(), 0.0, 0.1, {0.05, 0.01}, 1000);
    CHECK(r.pass);
    REQUIRE(r.witnessDelta.has_value());
    CHECK(*r.witnessDelta == 0.05);
    REQUIRE(r.gaps.size() == 2);
    CHECK(r.gaps[0].gap == 0.01);  // ascending
    CHECK(r.gaps[1].supSeparation == 0.05);

    const auto four = systems::logistic(ParamSequence::constant(4));
    const auto f = lyapunov_stability_test(four, 0.0, 0.1, {0.05}, 100);
    CHECK_FALSE(f.pass);
    CHECK_FALSE(f.witnessDelta.has_value());
    // Oracle pair: 4 y (1 - y) from 0.05 exceeds 0.1 at the first step.
    CHECK(4 * 0.05 * (1 - 0.05) > 0.1);

    const auto vac = lyapunov_stability_test(four, 0.3, 1.5, {0.01, 0.1, 0.2}, 500);
    CHECK(vac.pass);
    CHECK(*vac.witnessDelta == 0.2);

    CHECK_THROWS_AS(lyapunov_stability_test(half(), 0.0, 0.0, {0.1}, 10), ConfigError);
    CHECK_THROWS_AS(lyapunov_stability_test(half(), 0.0, 0.1, {}, 10), ConfigError);
    CHECK_THROWS_AS(lyapunov_stability_test(half(), 2.0, 0.1, {0.1}, 10), DomainError);
}

TEST_CASE("contraction ground truth") {
    const auto w = probe_separation(half(), 0.0, 0.4, 60);
    const auto fit = fit_envelope(w);
    CHECK(fit.C == 0.4);
    CHECK(std::fabs(fit.lambdaFit - std::log(2.0)) <= 1e-12);
    CHECK(fit.residual == 0.0);
    CHECK(fit.holds);

    std::vector<double> gaps;
    for (int j = 0; j < 10; ++j) gaps.push_back(0.01 * std::ldexp(1.0, -j));
    const auto r = lyapunov_stability_test(half(), 0.3, 0.01, gaps, 1000);
    CHECK(r.pass);
    for (const auto& g : r.gaps) CHECK(g.pass);
}

TEST_CASE("fit_envelope") {
    const auto a = fit_envelope(std::vector<double>{0.1, 0.05, 0.025});
    CHECK(a.C == 0.1);
    CHECK(a.lambdaFit == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(a.holds);

    const auto b = fit_envelope(std::vector<double>{0.1, 0.2, 0.1});
    CHECK(b.lambdaFit <= 0.0);
    CHECK_FALSE(b.holds);

    const auto c = fit_envelope(std::vector<double>{0.1, 0.09, 0.0001});
    CHECK(c.lambdaFit == doctest::Approx(std::log(0.1 / 0.09)).epsilon(1e-14));
    CHECK(c.lambdaFit < std::log(1000.0) / 2);
    CHECK(c.holds);

    CHECK_THROWS_AS(fit_envelope(std::vector<double>{}), EmptyInputError);
    CHECK_THROWS_AS(fit_envelope(std::vector<double>{0.1, -0.01}), NegativeInputError);
}

TEST_CASE("certificate for the constant 0.6 logistic") {
    const auto seq = systems::logistic(ParamSequence::constant(0.6));
    const auto e = exponents_at(seq, 0.0);
    const double l6 = std::log(0.6);
    CHECK(e.upper == l6);
    CHECK(e.lower == l6);

    const auto c = build_certificate(seq, 0.0, 0.01, e);
    CHECK(c.lambdaUpper == l6);
    CHECK(c.lambdaLower == l6);
    CHECK(c.epsilon0 == doctest::Approx(-l6 / 6).epsilon(1e-14));
    CHECK(c.lambda == doctest::Approx(5 * l6 / 6).epsilon(1e-14));
    CHECK(c.lambdaTilde == doctest::Approx(l6 / 2).epsilon(1e-14));
    CHECK(c.lambdaTilde == doctest::Approx(-0.2554).epsilon(1e-3));
    CHECK(c.M == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(c.C0 == 1.0);

    // Invariants
    CHECK(c.epsilon0 > 0);
    CHECK(c.epsilon0 < (c.lambdaLower - 2 * c.lambdaUpper) / 3);
    CHECK(c.lambda < 0);
    CHECK(c.lambdaTilde < 0);
    CHECK(c.C0 >= 1);
    CHECK(c.Deta >= 0);
    CHECK(c.delta > 0);
    CHECK(c.delta <= c.eta);
    const auto r = certificate_radius(c.M, c.C0, c.eta, c.lambda, c.lambdaTilde);
    CHECK(r.Deta == c.Deta);
    CHECK(r.delta == c.delta);
    // Independent arithmetic
    const double et = std::exp(c.lambdaTilde);
    CHECK(c.Deta == doctest::Approx(c.M * c.C0 * c.eta * std::exp(-2 * c.lambda) * et / (2 * (1 - et))).epsilon(1e-14));
    CHECK(c.delta == doctest::Approx(std::exp(-c.Deta) * c.eta / c.C0).epsilon(1e-14));
}

TEST_CASE("certificate gates") {
    const auto rnd = systems::logistic(ParamSequence::seeded_uniform(0.5, 0.7, 1));
    const auto e = exponents_at(rnd, 0.0);
    CHECK(e.lower >= std::log(0.5));
    CHECK(e.upper <= std::log(0.7));
    CHECK(2 * e.upper < e.lower);
    CHECK_NOTHROW(build_certificate(rnd, 0.0, 0.01, e));

    const auto two = systems::logistic(ParamSequence::constant(2));
    CHECK_THROWS_AS(build_certificate(two, 0.0, 0.01, exponents_at(two, 0.0)), HypothesisError);

    // Negative but with too wide a spread: 2u >= l.
    ExponentEstimate wide = e;
    wide.upper = -0.1;
    wide.lower = -0.5;
    CHECK_THROWS_AS(build_certificate(rnd, 0.0, 0.01, wide), HypothesisError);

    const auto c1 = systems::polynomial({ParamSequence::constant(0), ParamSequence::constant(0.5)},
                                        Interval(-1, 1), Smoothness::C1);
    CHECK_THROWS_AS(build_certificate(c1, 0.0, 0.01, exponents_at(c1, 0.0)), SmoothnessError);

    CertificateOptions bad;
    bad.epsilon0 = 1.0;
    CHECK_THROWS_AS(build_certificate(rnd, 0.0, 0.01, e, bad), ConfigError);
}

TEST_CASE("compute_c0 matches the O(N^2) enumeration") {
    std::mt19937_64 g(99);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const bool logistic = trial % 2 == 0;
        const std::uint64_t seed = g();
        const MapSequence seq =
            logistic ? systems::logistic(ParamSequence::seeded_uniform(0.2 + 3 * U(g), 3.99, seed))
                     : systems::affine(ParamSequence::seeded_uniform(-0.9, 0.9, seed),
                                       ParamSequence::constant(0), Interval(-1, 1));
        const double x0 = logistic ? 0.05 + 0.9 * U(g) : 2 * U(g) - 1;
        const std::size_t H = 16 + static_cast<std::size_t>(U(g) * 496);
        const auto orbit = iterate_orbit(seq, x0, H);
        // Rates near the orbit's own average keep C0 well inside double range.
        const double avg = orbit.partialSums[H] / static_cast<double>(H);
        const double u = avg + 0.2 * (U(g) - 0.5), l = u - U(g), eps0 = 0.05 * U(g);
        const double lambda = u + eps0;
        const double beta = u - l + 2 * eps0;
        const double c0 = compute_c0(seq, orbit, lambda, u, l, eps0, H);
        const long double ref = oracle::c0_brute_force(orbit.logDerivs, lambda, beta, H);
        CAPTURE(trial);
        CHECK(std::fabs(c0 - static_cast<double>(ref)) <= 1e-12 * static_cast<double>(ref));
    }
}

TEST_CASE("compute_c0: envelopes that dominate give exactly 1") {
    const auto six = systems::logistic(ParamSequence::constant(0.6));
    const double l6 = std::log(0.6);
    const double eps0 = -l6 / 6;
    CHECK(compute_c0(six, iterate_orbit(six, 0.0, 200), l6 + eps0, l6, l6, eps0, 200) == 1.0);

    // Slope 0.5, epsilon0 = 0.01 with a lower estimate below the upper one:
    // every log ratio is -(n-k) eps0 - k beta <= 0.
    const double l2 = std::log(0.5);
    const auto orbit = iterate_orbit(half(), 0.7, 100);
    const double c0 = compute_c0(half(), orbit, l2 + 0.01, l2, l2 - 0.01, 0.01, 100);
    CHECK(c0 == 1.0);
    CHECK(oracle::c0_brute_force(orbit.logDerivs, l2 + 0.01, 0.03, 100) == 1.0L);

    // Horizon 0: only the empty product.
    CHECK(compute_c0(half(), orbit, l2, l2, l2, 0.01, 0) == 1.0);

    const auto four = systems::logistic(ParamSequence::constant(4));
    CHECK_THROWS_AS(compute_c0(four, iterate_orbit(four, 0.5, 10), -0.1, -0.2, -0.3, 0.01, 10),
                    HypothesisError);
    CHECK_THROWS_AS(compute_c0(half(), orbit, l2, l2, l2, 0.01, 101), ConfigError);
}

TEST_CASE("envelope verification") {
    const auto six = systems::logistic(ParamSequence::constant(0.6));
    const auto c = build_certificate(six, 0.0, 0.01, exponents_at(six, 0.0));
    const auto v = verify_envelope(six, 0.0, c, 1000, 1000);
    CHECK(v.pass);
    CHECK(v.margin > 0);
    CHECK(v.relativeMargin > 0);
    CHECK(v.samples + v.skipped == 1000);
    REQUIRE(v.tightest.size() == 1001);
    for (const auto& row : v.tightest) CHECK(row.sep <= row.bound);
    // Left of 0 is outside the domain: samples land in (0, delta).
    CHECK(v.tightestY0 > 0);
    CHECK(v.tightestY0 < c.delta);

    const auto rnd = systems::logistic(ParamSequence::seeded_uniform(0.5, 0.7, 42));
    const auto cr = build_certificate(rnd, 0.0, 0.01, exponents_at(rnd, 0.0));
    const auto vr = verify_envelope(rnd, 0.0, cr, 1000, 1000);
    CHECK(vr.pass);
    CHECK(vr.relativeMargin > 0);

    // Same seed, same answer.
    const auto again = verify_envelope(rnd, 0.0, cr, 1000, 1000);
    CHECK(again.margin == vr.margin);
    CHECK(again.tightestY0 == vr.tightestY0);

    CHECK_THROWS_AS(verify_envelope(rnd, 0.0, cr, 5, 100), ConfigError);
}

TEST_CASE("envelope verification fails an overstated radius") {
    const auto seq = systems::logistic(ParamSequence::constant(3.9));
    StabilityCertificate fake;
    fake.eta = 0.01;
    fake.delta = 0.01;
    fake.lambda = -0.5;
    const auto v = verify_envelope(seq, 0.3, fake, 50, 100);
    CHECK_FALSE(v.pass);
    CHECK(v.margin < 0);
}

TEST_CASE("certify") {
    const auto rnd = systems::logistic(ParamSequence::seeded_uniform(0.5, 0.7, 1));
    const auto res = certify(rnd, 0.0, 0.01, exponents_at(rnd, 0.0));
    CHECK(res.status == CertificationStatus::Certified);
    CHECK_FALSE(res.retried);
    CHECK(to_string(CertificationStatus::Certified) == "Certified");
    CHECK(to_string(CertificationStatus::Indeterminate) == "IndeterminateCertificate");
}
