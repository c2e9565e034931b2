#pragma once

#include <cstddef>
#include <vector>

#include "nads/map_sequence.hpp"
#include "nads/orbit.hpp"

namespace nads {

/// Tail width (nats/step) below which the upper and lower estimates count as converged.
inline constexpr double kConvergenceTolerance = 1e-3;

/// Finite-horizon surrogate for the upper exponent (limsup of Cesaro averages of
/// ln|f_k'(x_k)|) and the lower exponent (liminf), taken as the max/min of the
/// averages over the tail window [tailStart, horizon].
struct ExponentEstimate {
    /// a_n = S_n / n for n = 1..N, stored at index n - 1.
    std::vector<double> finiteTimeSeries;
    double upper = 0.0;
    double lower = 0.0;
    std::size_t tailStart = 1;
    std::size_t horizon = 0;
    bool converged = false;
    double oscillationWidth = 0.0;
    /// A derivative vanished on the orbit; upper = lower = -inf.
    bool hitSentinel = false;

    double at(std::size_t n) const { return finiteTimeSeries.at(n - 1); }
};

/// a_n = S_n / n for n = 1..N, accumulated relative to the first term so a
/// constant sequence of log-derivatives averages to exactly that constant.
std::vector<double> finite_time_exponents(const Orbit& orbit);

/// Tail max/min of the finite-time exponents. Requires N >= 10 and 0 < tailFraction < 1;
/// tailStart = ceil(tailFraction * N).
ExponentEstimate estimate_exponents(const Orbit& orbit, double tailFraction = 0.5,
                                    double tolerance = kConvergenceTolerance);
ExponentEstimate estimate_exponents(std::vector<double> finiteTimeSeries, double tailFraction = 0.5,
                                    double tolerance = kConvergenceTolerance);

struct ShiftDiscrepancy {
    /// S_N / N of the original run
    double original = 0.0;
    /// S'_{N-k} / (N - k) of the shifted system started at x_k
    double shifted = 0.0;
    double discrepancy = 0.0;
    /// (|S_k| + k max_n |a_n|) / (N - k)
    double bound = 0.0;
};

/// Compares the exponent of the original system at x0 with that of the
/// system shifted by k started from x_k, both at horizon N.
ShiftDiscrepancy shift_exponent_check(const MapSequence& seq, double x0, std::size_t k,
                                      std::size_t horizon);

}  // namespace nads
