#include "nads/lyapunov.hpp"

#include <algorithm>
#include <cmath>

#include "nads/errors.hpp"
#include "nads/kernels.hpp"

namespace nads {

std::vector<double> finite_time_exponents(const Orbit& orbit) {
    const std::size_t n = orbit.horizon();
    std::vector<double> out(n);
    if (n == 0) return out;
    const double ref = orbit.logDerivs[0];
    if (ref == kNegInf) {
        std::fill(out.begin(), out.end(), kNegInf);
        return out;
    }

    // a_n = l_0 + (1/n) sum_{k<n} (l_k - l_0). Equal to S_n / n up to rounding,
    // and exactly l_0 when every term is the same.
    std::vector<double> resid(n);
    double sum = 0.0, comp = 0.0;
    bool dead = false;
    for (std::size_t k = 0; k < n; ++k) {
        const double l = orbit.logDerivs[k];
        if (dead || l == kNegInf) {
            dead = true;
            resid[k] = kNegInf;
            continue;
        }
        const double d = l - ref;
        const double t = sum + d;
        if (std::fabs(sum) >= std::fabs(d))
            comp += (sum - t) + d;
        else
            comp += (d - t) + sum;
        sum = t;
        resid[k] = sum + comp;
    }
    kernels::running_mean(resid, out, 1);
    for (double& a : out) a = ref + a;
    return out;
}

ExponentEstimate estimate_exponents(const Orbit& orbit, double tailFraction, double tolerance) {
    return estimate_exponents(finite_time_exponents(orbit), tailFraction, tolerance);
}

ExponentEstimate estimate_exponents(std::vector<double> series, double tailFraction,
                                    double tolerance) {
    const std::size_t horizon = series.size();
    if (horizon < 10) throw ConfigError("exponent estimation needs a horizon of at least 10");
    if (!(tailFraction > 0.0 && tailFraction < 1.0))
        throw ConfigError("tail fraction must lie in (0, 1)");

    ExponentEstimate est;
    est.horizon = horizon;
    est.tailStart = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(tailFraction * static_cast<double>(horizon))), 1,
        horizon);
    est.finiteTimeSeries = std::move(series);

    const auto tail = std::span<const double>(est.finiteTimeSeries).subspan(est.tailStart - 1);
    const auto mm = kernels::minmax(tail);
    if (mm.min == kNegInf) {
        est.upper = est.lower = kNegInf;
        est.hitSentinel = true;
        est.converged = false;
        est.oscillationWidth = 0.0;
        return est;
    }
    est.upper = mm.max;
    est.lower = mm.min;
    est.oscillationWidth = est.upper - est.lower;
    est.converged = est.oscillationWidth <= tolerance;
    return est;
}

ShiftDiscrepancy shift_exponent_check(const MapSequence& seq, double x0, std::size_t k,
                                      std::size_t horizon) {
    if (k < 1 || k >= horizon) throw PreconditionError("shift needs 1 <= k < N");
    const Orbit orig = iterate_orbit(seq, x0, horizon);
    const Orbit tail = iterate_orbit(seq.shifted(k), orig.points[k], horizon - k);

    ShiftDiscrepancy out;
    const double nk = static_cast<double>(horizon - k);
    out.original = orig.partialSums[horizon] / static_cast<double>(horizon);
    out.shifted = tail.partialSums[horizon - k] / nk;
    out.discrepancy = std::fabs(out.original - out.shifted);
    if (std::isnan(out.discrepancy)) out.discrepancy = 0.0;  // both -inf

    const auto a = finite_time_exponents(orig);
    out.bound = (std::fabs(orig.partialSums[k]) + static_cast<double>(k) * kernels::max_abs(a)) / nk;
    return out;
}

}  // namespace nads
