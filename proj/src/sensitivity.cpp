#include "nads/sensitivity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "nads/errors.hpp"
#include "nads/kernels.hpp"
#include "nads/orbit.hpp"

namespace nads {

namespace {

void check_common(const MapSequence& seq, double x0, double delta, double radius,
                  std::size_t probeCount) {
    if (!seq.domain().contains(x0)) throw DomainError("x0 outside the domain");
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    if (!(radius > 0.0)) throw ConfigError("radius must be positive");
    if (probeCount < 8) throw ConfigError("at least 8 probes are required");
}

}  // namespace

std::string_view to_string(SensitivityVerdict v) noexcept {
    switch (v) {
        case SensitivityVerdict::StronglySensitive: return "StronglySensitive";
        case SensitivityVerdict::NotDetected: return "NotDetected";
        case SensitivityVerdict::Undetermined: return "Undetermined";
    }
    return "Unknown";
}

double default_delta(const Interval& domain) noexcept { return domain.width() / 20.0; }

std::vector<double> probe_separation(const MapSequence& seq, double x0, double y0,
                                     std::size_t horizon) {
    if (!seq.domain().contains(x0) || !seq.domain().contains(y0))
        throw DomainError("probe pair outside the domain");
    if (x0 == y0) throw ConfigError("probe must differ from x0");
    std::vector<double> sep(horizon + 1);
    double x = x0, y = y0;
    sep[0] = std::fabs(y - x);
    for (std::size_t n = 0; n < horizon; ++n) {
        x = seq.eval(n, x);
        y = seq.eval(n, y);
        sep[n + 1] = std::fabs(y - x);
    }
    return sep;
}

std::vector<double> probe_points(const Interval& domain, double x0, double radius,
                                 std::size_t probeCount) {
    std::vector<double> out;
    for (std::size_t j = 0; j < probeCount / 2; ++j) {
        const double step = std::ldexp(radius, -static_cast<int>(j));
        for (double y : {x0 + step, x0 - step}) {
            y = domain.clamp(y);
            if (y != x0) out.push_back(y);
        }
    }
    return out;
}

SensitivityReport strong_sensitivity_test(const MapSequence& seq, double x0, double delta,
                                          double radius, std::size_t probeCount,
                                          std::size_t horizon) {
    check_common(seq, x0, delta, radius, probeCount);
    const auto ys = probe_points(seq.domain(), x0, radius, probeCount);
    if (ys.empty()) throw ConfigError("every probe clamps onto x0");

    SensitivityReport rep;
    rep.x0 = x0;
    rep.delta = delta;
    rep.radius = radius;
    rep.horizon = horizon;

    const std::size_t lanes = ys.size();
    const std::size_t quarter = std::max<std::size_t>(1, (horizon + 1) / 4);
    const std::size_t lastQuarterBegin = horizon + 1 - quarter;

    std::vector<double> starts;
    starts.reserve(lanes + 1);
    starts.push_back(x0);
    starts.insert(starts.end(), ys.begin(), ys.end());
    Ensemble ens(seq, std::move(starts));

    std::vector<double> base(lanes), sep(lanes), firstMax(lanes, 0.0), lastMax(lanes, 0.0);
    rep.probes.resize(lanes);
    for (std::size_t i = 0; i < lanes; ++i) {
        rep.probes[i].y0 = ys[i];
        rep.probes[i].initialGap = std::fabs(ys[i] - x0);
    }

    for (std::size_t n = 0; n <= horizon; ++n) {
        if (n > 0) ens.step();
        const auto& s = ens.states();
        std::fill(base.begin(), base.end(), s[0]);
        kernels::abs_diff(std::span<const double>(s).subspan(1), base, sep);
        for (std::size_t i = 0; i < lanes; ++i) {
            auto& p = rep.probes[i];
            const double w = sep[i];
            if (w > p.maxSeparation) p.maxSeparation = w;
            if (!p.escapeTime && w > delta) p.escapeTime = n;
            if (n < quarter && w > firstMax[i]) firstMax[i] = w;
            if (n >= lastQuarterBegin && w > lastMax[i]) lastMax[i] = w;
        }
    }

    bool all = true, undetermined = false;
    for (std::size_t i = 0; i < lanes; ++i) {
        auto& p = rep.probes[i];
        p.growing = lastMax[i] > firstMax[i];
        if (!p.escapeTime) {
            all = false;
            if (p.growing) undetermined = true;
        }
    }
    rep.verdict = all            ? SensitivityVerdict::StronglySensitive
                  : undetermined ? SensitivityVerdict::Undetermined
                                 : SensitivityVerdict::NotDetected;
    return rep;
}

SetSensitivityReport sensitivity_in_set_test(const MapSequence& seq,
                                             const std::vector<double>& samplePoints, double delta,
                                             double radius, std::size_t probeCount,
                                             std::size_t horizon) {
    if (samplePoints.empty()) throw ConfigError("sample point set is empty");
    SetSensitivityReport out;
    out.delta = delta;
    bool all = true, undetermined = false;
    for (double x : samplePoints) {
        out.points.push_back(strong_sensitivity_test(seq, x, delta, radius, probeCount, horizon));
        const auto v = out.points.back().verdict;
        if (v != SensitivityVerdict::StronglySensitive) all = false;
        if (v == SensitivityVerdict::Undetermined) undetermined = true;
    }
    out.verdict = all            ? SensitivityVerdict::StronglySensitive
                  : undetermined ? SensitivityVerdict::Undetermined
                                 : SensitivityVerdict::NotDetected;
    return out;
}

std::vector<std::vector<double>> separation_table(const MapSequence& seq,
                                                  const SensitivityReport& report) {
    std::vector<double> starts{report.x0};
    for (const auto& p : report.probes) starts.push_back(p.y0);
    Ensemble ens(seq, std::move(starts));
    const std::size_t lanes = report.probes.size();
    std::vector<std::vector<double>> rows(report.horizon + 1, std::vector<double>(lanes));
    std::vector<double> base(lanes);
    for (std::size_t n = 0; n <= report.horizon; ++n) {
        if (n > 0) ens.step();
        const auto& s = ens.states();
        std::fill(base.begin(), base.end(), s[0]);
        kernels::abs_diff(std::span<const double>(s).subspan(1), base, rows[n]);
    }
    return rows;
}

ShiftReplayResult shift_sensitivity_check(const MapSequence& seq, double x0, std::size_t k,
                                          const SensitivityReport& report) {
    if (k < 1) throw PreconditionError("shift k must be at least 1");
    ShiftReplayResult out;
    out.k = k;
    const MapSequence shifted = seq.shifted(k);

    for (std::size_t i = 0; i < report.probes.size(); ++i) {
        const auto& p = report.probes[i];
        if (!p.escapeTime) continue;
        const std::size_t escape = *p.escapeTime;
        if (escape <= k) {
            ++out.skipped;
            continue;
        }
        // Original run to step N, keeping the state at step k.
        double x = x0, y = p.y0, xk = 0.0, yk = 0.0;
        for (std::size_t n = 0; n < escape; ++n) {
            if (n == k) {
                xk = x;
                yk = y;
            }
            x = seq.eval(n, x);
            y = seq.eval(n, y);
        }
        const double original = std::fabs(y - x);

        double xs = xk, ysh = yk;
        for (std::size_t m = 0; m < escape - k; ++m) {
            xs = shifted.eval(m, xs);
            ysh = shifted.eval(m, ysh);
        }
        const double replayed = std::fabs(ysh - xs);

        ProbeReplay r;
        r.probeIndex = i;
        r.escapeTime = escape;
        r.originalSeparation = original;
        r.replayedSeparation = replayed;
        r.exceedsDelta = replayed > report.delta;
        r.bitwiseEqual = std::bit_cast<std::uint64_t>(original) == std::bit_cast<std::uint64_t>(replayed);
        out.replays.push_back(r);
    }
    if (out.replays.empty())
        throw PreconditionError("no probe escapes after step " + std::to_string(k));
    out.pass = std::all_of(out.replays.begin(), out.replays.end(),
                           [](const ProbeReplay& r) { return r.exceedsDelta && r.bitwiseEqual; });
    return out;
}

}  // namespace nads
