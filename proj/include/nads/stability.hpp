#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nads/lyapunov.hpp"
#include "nads/map_sequence.hpp"
#include "nads/orbit.hpp"

namespace nads {

/// b_n = B exp(mu_1 + ... + mu_n) for n = 0..N, where mu holds mu_1..mu_N.
/// NegativeInputError if B or any mu_k is negative (or NaN).
std::vector<double> discrete_gronwall_bound(double B, std::span<const double> mu);

struct GapOutcome {
    double gap = 0.0;
    /// Probes x0 +/- gap that fall inside the domain.
    std::size_t probes = 0;
    double supSeparation = 0.0;
    bool pass = false;
};

struct LyapunovStabilityResult {
    bool pass = false;
    /// Largest tested gap such that it and every smaller gap pass.
    std::optional<double> witnessDelta;
    /// Ascending by gap.
    std::vector<GapOutcome> gaps;
};

/// Probes x0 +/- g for every gap and checks sup_n |y_n - x_n| <= eta up to the horizon.
LyapunovStabilityResult lyapunov_stability_test(const MapSequence& seq, double x0, double eta,
                                                std::vector<double> gaps, std::size_t horizon);

/// Constants of the exponential stability argument at x0.
struct StabilityCertificate {
    double lambdaUpper = 0.0;  ///< upper exponent estimate used
    double lambdaLower = 0.0;  ///< lower exponent estimate used
    double epsilon0 = 0.0;
    double lambda = 0.0;       ///< lambdaUpper + epsilon0
    double lambdaTilde = 0.0;  ///< 2 lambdaUpper - lambdaLower + 3 epsilon0
    double M = 0.0;            ///< sampled sup |f_n''|
    double C0 = 1.0;
    double eta = 0.0;
    double Deta = 0.0;
    double delta = 0.0;        ///< admissible initial-gap radius
    std::size_t c0Horizon = 0;
    std::size_t exponentHorizon = 0;
};

struct RadiusTerms {
    double Deta;
    double delta;
};

/// D_eta = M C0 eta exp(-2 lambda) exp(lt) / (2 (1 - exp(lt))) and
/// delta = exp(-D_eta) eta / C0, evaluated in a fixed operation order so the
/// certificate fields can be recomputed bit for bit.
RadiusTerms certificate_radius(double M, double C0, double eta, double lambda, double lambdaTilde);

/// Minimal C0 >= 1 with |a_{n-1}...a_k| <= C0 exp(lambda (n - k) + l_k) for
/// 0 <= k <= n <= horizon, a_i = f_i'(x_i), l_k = k (lambdaUpper - lambdaLower + 2 epsilon0).
/// Linear time via prefix minima of the log-space terms. HypothesisError on a
/// vanishing derivative.
double compute_c0(const MapSequence& seq, const Orbit& orbit, double lambda, double lambdaUpper,
                  double lambdaLower, double epsilon0, std::size_t horizon);

struct CertificateOptions {
    std::size_t c0Horizon = 1000;
    /// Overrides the default (lambdaLower - 2 lambdaUpper) / 6.
    std::optional<double> epsilon0;
    /// 0 selects the hypotheses defaults.
    double gridSpacing = 0.0;
    std::uint64_t indexHorizon = 0;
};

/// HypothesisError unless -inf < upper < 0 and 2 upper < lower; SmoothnessError unless C2.
StabilityCertificate build_certificate(const MapSequence& seq, double x0, double eta,
                                       const ExponentEstimate& exponents,
                                       const CertificateOptions& options = {});

struct EnvelopeRow {
    std::size_t n;
    double sep;
    double bound;
};

struct EnvelopeVerification {
    bool pass = false;
    /// min over samples and n of (eta exp(lambda n) - |w_n|)
    double margin = 0.0;
    /// min over samples and n of (1 - |w_n| / (eta exp(lambda n))); stays
    /// informative where the absolute margin decays with the envelope.
    double relativeMargin = 0.0;
    std::size_t samples = 0;
    /// Draws equal to x0 or on the open boundary, not counted as failures.
    std::size_t skipped = 0;
    std::size_t horizon = 0;
    /// Sample attaining the minimum relative margin, with its full separation history.
    double tightestY0 = 0.0;
    std::vector<EnvelopeRow> tightest;
};

/// Draws sampleCount starts uniformly from (x0 - delta, x0 + delta) within the
/// domain (counter-based, seeded) and checks |w_n| <= eta exp(lambda n) up to the horizon.
EnvelopeVerification verify_envelope(const MapSequence& seq, double x0,
                                     const StabilityCertificate& cert, std::size_t sampleCount,
                                     std::size_t horizon, std::uint64_t seed = 1);

struct EnvelopeFit {
    double C = 0.0;
    double lambdaFit = 0.0;
    double residual = 0.0;
    bool holds = false;
};

/// Anchors C = |w_0| and takes the largest rate with |w_n| <= C exp(-rate n).
EnvelopeFit fit_envelope(std::span<const double> separations);

enum class CertificationStatus { Certified, Indeterminate };

std::string_view to_string(CertificationStatus s) noexcept;

struct CertificationResult {
    CertificationStatus status = CertificationStatus::Indeterminate;
    StabilityCertificate certificate;
    EnvelopeVerification verification;
    /// The first verification failed and epsilon0 was halved once.
    bool retried = false;
};

struct CertifyOptions {
    CertificateOptions certificate;
    std::size_t samples = 1000;
    std::size_t horizon = 1000;
    std::uint64_t seed = 1;
};

/// build_certificate + verify_envelope, retrying once with epsilon0 halved.
CertificationResult certify(const MapSequence& seq, double x0, double eta,
                            const ExponentEstimate& exponents, const CertifyOptions& options = {});

}  // namespace nads
