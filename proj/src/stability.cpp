#include "nads/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nads/counter_rng.hpp"
#include "nads/errors.hpp"
#include "nads/hypotheses.hpp"
#include "nads/kernels.hpp"

namespace nads {

std::vector<double> discrete_gronwall_bound(double B, std::span<const double> mu) {
    if (!(B >= 0.0)) throw NegativeInputError("Gronwall constant B must be nonnegative");
    std::vector<double> out(mu.size() + 1);
    out[0] = B;
    double sum = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
        if (!(mu[k] >= 0.0))
            throw NegativeInputError("Gronwall weight mu_" + std::to_string(k + 1) +
                                     " must be nonnegative");
        sum += mu[k];
        out[k + 1] = B * std::exp(sum);
    }
    return out;
}

LyapunovStabilityResult lyapunov_stability_test(const MapSequence& seq, double x0, double eta,
                                                std::vector<double> gaps, std::size_t horizon) {
    if (!seq.domain().contains(x0)) throw DomainError("x0 outside the domain");
    if (!(eta > 0.0)) throw ConfigError("eta must be positive");
    if (gaps.empty()) throw ConfigError("at least one gap is required");
    for (double g : gaps)
        if (!(g > 0.0)) throw ConfigError("gaps must be positive");
    std::sort(gaps.begin(), gaps.end());

    LyapunovStabilityResult res;
    std::vector<double> starts{x0};
    std::vector<std::size_t> owner;  // gap index per probe lane
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        GapOutcome g;
        g.gap = gaps[i];
        for (double y : {x0 + gaps[i], x0 - gaps[i]}) {
            // x0 +- gap can round outward; pull back so the realized gap never exceeds it
            while (std::fabs(y - x0) > gaps[i]) y = std::nextafter(y, x0);
            if (seq.domain().contains(y) && y != x0) {
                starts.push_back(y);
                owner.push_back(i);
                ++g.probes;
            }
        }
        res.gaps.push_back(g);
    }

    const std::size_t lanes = owner.size();
    std::vector<double> sup(lanes, 0.0), base(lanes), sep(lanes);
    Ensemble ens(seq, std::move(starts));
    for (std::size_t n = 0; n <= horizon && lanes > 0; ++n) {
        if (n > 0) ens.step();
        const auto& s = ens.states();
        std::fill(base.begin(), base.end(), s[0]);
        kernels::abs_diff(std::span<const double>(s).subspan(1), base, sep);
        for (std::size_t i = 0; i < lanes; ++i) sup[i] = std::max(sup[i], sep[i]);
    }
    for (std::size_t i = 0; i < lanes; ++i)
        res.gaps[owner[i]].supSeparation = std::max(res.gaps[owner[i]].supSeparation, sup[i]);

    res.pass = true;
    bool prefix = true;
    for (auto& g : res.gaps) {
        g.pass = g.supSeparation <= eta;
        res.pass = res.pass && g.pass;
        prefix = prefix && g.pass;
        if (prefix) res.witnessDelta = g.gap;
    }
    return res;
}

RadiusTerms certificate_radius(double M, double C0, double eta, double lambda, double lambdaTilde) {
    const double et = std::exp(lambdaTilde);
    const double Deta = 0.5 * M * C0 * eta * std::exp(-2.0 * lambda) * et / (1.0 - et);
    const double delta = (1.0 / C0) * std::exp(-Deta) * eta;
    return {Deta, delta};
}

double compute_c0([[maybe_unused]] const MapSequence& seq, const Orbit& orbit, double lambda, double lambdaUpper,
                  double lambdaLower, double epsilon0, std::size_t horizon) {
    if (horizon > orbit.horizon()) throw ConfigError("C0 horizon exceeds the orbit length");
    for (std::size_t i = 0; i < horizon; ++i)
        if (orbit.logDerivs[i] == kNegInf)
            throw HypothesisError("derivative vanishes on the orbit at step " + std::to_string(i));

    // log of the ratio for a pair (k, n) is P_n - Q_k with
    //   P_n = S_n - lambda n,  Q_k = S_k - lambda k + k beta.
    const double beta = lambdaUpper - lambdaLower + 2.0 * epsilon0;
    double minQ = std::numeric_limits<double>::infinity();
    double best = 0.0;  // the empty product n = k = 0 gives exactly 0
    for (std::size_t n = 0; n <= horizon; ++n) {
        const double dn = static_cast<double>(n);
        const double S = orbit.partialSums[n];
        minQ = std::min(minQ, (S - lambda * dn) + dn * beta);
        best = std::max(best, (S - lambda * dn) - minQ);
    }
    return std::max(1.0, std::exp(best));
}

StabilityCertificate build_certificate(const MapSequence& seq, double x0, double eta,
                                       const ExponentEstimate& exponents,
                                       const CertificateOptions& options) {
    if (!seq.domain().contains(x0)) throw DomainError("x0 outside the domain");
    if (!(eta > 0.0)) throw ConfigError("eta must be positive");
    if (seq.smoothness() != Smoothness::C2)
        throw SmoothnessError("stability certificate needs a C2 map sequence");
    const double u = exponents.upper, l = exponents.lower;
    if (exponents.hitSentinel || !std::isfinite(u) || !std::isfinite(l))
        throw HypothesisError("exponent estimate is not finite");
    if (!(u < 0.0)) throw HypothesisError("upper exponent " + std::to_string(u) + " is not negative");
    if (!(2.0 * u < l))
        throw HypothesisError("exponent gap fails: 2 * upper = " + std::to_string(2.0 * u) +
                              " is not below lower = " + std::to_string(l));

    StabilityCertificate c;
    c.lambdaUpper = u;
    c.lambdaLower = l;
    const double admissible = (l - 2.0 * u) / 3.0;
    c.epsilon0 = options.epsilon0.value_or(admissible / 2.0);
    if (!(c.epsilon0 > 0.0 && c.epsilon0 < admissible))
        throw ConfigError("epsilon0 must lie in (0, (lower - 2 upper) / 3)");
    c.lambda = u + c.epsilon0;
    c.lambdaTilde = 2.0 * u - l + 3.0 * c.epsilon0;
    c.M = second_derivative_bound(seq, options.gridSpacing, options.indexHorizon);

    c.c0Horizon = options.c0Horizon;
    c.exponentHorizon = exponents.horizon;
    const Orbit orbit = iterate_orbit(seq, x0, std::max<std::size_t>(1, options.c0Horizon));
    c.C0 = compute_c0(seq, orbit, c.lambda, u, l, c.epsilon0, options.c0Horizon);

    c.eta = eta;
    const auto r = certificate_radius(c.M, c.C0, c.eta, c.lambda, c.lambdaTilde);
    c.Deta = r.Deta;
    c.delta = r.delta;
    return c;
}

EnvelopeVerification verify_envelope(const MapSequence& seq, double x0,
                                     const StabilityCertificate& cert, std::size_t sampleCount,
                                     std::size_t horizon, std::uint64_t seed) {
    if (!seq.domain().contains(x0)) throw DomainError("x0 outside the domain");
    if (sampleCount < 10) throw ConfigError("envelope verification needs at least 10 samples");
    if (!(cert.delta > 0.0 && cert.eta > 0.0)) throw ConfigError("certificate radius is not positive");

    const double a = std::max(x0 - cert.delta, seq.domain().lo());
    const double b = std::min(x0 + cert.delta, seq.domain().hi());

    EnvelopeVerification out;
    out.horizon = horizon;
    std::vector<double> starts{x0};
    for (std::size_t i = 0; i < sampleCount; ++i) {
        const double y = a + (b - a) * counter_uniform01(seed, i);
        if (y == x0 || !(std::fabs(y - x0) < cert.delta) || !seq.domain().contains(y)) {
            ++out.skipped;
            continue;
        }
        starts.push_back(y);
    }
    out.samples = starts.size() - 1;
    if (out.samples == 0) throw ConfigError("no admissible envelope samples");

    const std::size_t lanes = out.samples;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> laneMargin(lanes, inf), laneRelative(lanes, inf);
    std::vector<double> base(lanes), sep(lanes), ratio(lanes);
    const std::vector<double> ys(starts.begin() + 1, starts.end());
    Ensemble ens(seq, std::move(starts));
    for (std::size_t n = 0; n <= horizon; ++n) {
        if (n > 0) ens.step();
        const auto& s = ens.states();
        std::fill(base.begin(), base.end(), s[0]);
        kernels::abs_diff(std::span<const double>(s).subspan(1), base, sep);
        const double bound = cert.eta * std::exp(cert.lambda * static_cast<double>(n));
        kernels::envelope_update(sep, bound, laneMargin);
        // Once the bound underflows only the absolute margin is meaningful.
        if (bound > 0.0) {
            for (std::size_t i = 0; i < lanes; ++i) ratio[i] = sep[i] / bound;
            kernels::envelope_update(ratio, 1.0, laneRelative);
        }
    }

    out.margin = *std::min_element(laneMargin.begin(), laneMargin.end());
    const auto worst = std::min_element(laneRelative.begin(), laneRelative.end());
    out.relativeMargin = *worst;
    out.pass = out.margin >= 0.0 && out.relativeMargin >= 0.0;
    out.tightestY0 = ys[static_cast<std::size_t>(worst - laneRelative.begin())];

    double x = x0, y = out.tightestY0;
    out.tightest.reserve(horizon + 1);
    for (std::size_t n = 0; n <= horizon; ++n) {
        if (n > 0) {
            x = seq.eval(n - 1, x);
            y = seq.eval(n - 1, y);
        }
        out.tightest.push_back(
            {n, std::fabs(y - x), cert.eta * std::exp(cert.lambda * static_cast<double>(n))});
    }
    return out;
}

EnvelopeFit fit_envelope(std::span<const double> separations) {
    if (separations.empty()) throw EmptyInputError("separation series is empty");
    for (double w : separations)
        if (!(w >= 0.0)) throw NegativeInputError("separations must be nonnegative");

    EnvelopeFit fit;
    fit.C = separations[0];
    double rate = std::numeric_limits<double>::infinity();
    double largest = 0.0;
    for (std::size_t n = 1; n < separations.size(); ++n) {
        const double w = separations[n];
        if (w == 0.0) continue;
        largest = std::max(largest, w);
        if (fit.C == 0.0) {
            rate = -std::numeric_limits<double>::infinity();
            continue;
        }
        rate = std::min(rate, -std::log(w / fit.C) / static_cast<double>(n));
    }
    fit.lambdaFit = rate;

    if (fit.C == 0.0) {
        fit.residual = largest;
    } else {
        // rate * n carries about n ulp of rounding into the exponent; excess
        // below that is not a violation.
        for (std::size_t n = 1; n < separations.size(); ++n) {
            const double w = separations[n];
            const double bound = fit.C * std::exp(-rate * static_cast<double>(n));
            const double excess = w - bound;
            const double slack = w * static_cast<double>(n + 4) * std::numeric_limits<double>::epsilon();
            if (excess > slack) fit.residual = std::max(fit.residual, excess);
        }
    }
    fit.holds = fit.lambdaFit > 0.0 && fit.residual == 0.0;
    return fit;
}

std::string_view to_string(CertificationStatus s) noexcept {
    switch (s) {
        case CertificationStatus::Certified: return "Certified";
        case CertificationStatus::Indeterminate: return "IndeterminateCertificate";
    }
    return "unknown";
}

CertificationResult certify(const MapSequence& seq, double x0, double eta,
                            const ExponentEstimate& exponents, const CertifyOptions& options) {
    CertificationResult res;
    res.certificate = build_certificate(seq, x0, eta, exponents, options.certificate);
    res.verification = verify_envelope(seq, x0, res.certificate, options.samples, options.horizon,
                                       options.seed);
    if (!res.verification.pass) {
        CertificateOptions retry = options.certificate;
        retry.epsilon0 = res.certificate.epsilon0 / 2.0;
        res.retried = true;
        res.certificate = build_certificate(seq, x0, eta, exponents, retry);
        res.verification = verify_envelope(seq, x0, res.certificate, options.samples,
                                           options.horizon, options.seed);
    }
    res.status = res.verification.pass ? CertificationStatus::Certified
                                       : CertificationStatus::Indeterminate;
    return res;
}

}  // namespace nads
