#include "nads/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nads/errors.hpp"
#include "nads/kernels.hpp"
#include "nads/sensitivity.hpp"

namespace nads {

namespace {

std::vector<double> sorted_epsilons(std::vector<double> eps) {
    if (eps.empty()) throw ConfigError("modulus estimation needs at least one epsilon");
    for (double e : eps)
        if (!(e > 0.0)) throw ConfigError("modulus epsilons must be positive");
    std::sort(eps.begin(), eps.end(), std::greater<>());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
    return eps;
}

double resolve_spacing(double gridSpacing, const Interval& domain) {
    return gridSpacing > 0.0 ? gridSpacing
                             : domain.width() / static_cast<double>(kDefaultGridCells);
}

std::uint64_t resolve_indices(const MapSequence& seq, std::uint64_t indexHorizon) {
    return indexHorizon > 0 ? indexHorizon : seq.sample_indices(kDefaultIndexHorizon);
}

std::size_t cells_for(const Interval& domain, double spacing) {
    const double cells = std::ceil(domain.width() / spacing);
    if (!(cells >= 1.0) || cells > 1e8) throw ConfigError("grid spacing out of range");
    return static_cast<std::size_t>(cells);
}

// Uniform grid over `domain` with at most `spacing` between neighbours, plus
// the critical points of f_n inside it.
std::vector<double> sample_points(const MapSequence& seq, std::uint64_t n, const Interval& domain,
                                  double spacing) {
    auto xs = MapSequence::grid(domain, cells_for(domain, spacing) + 1);
    for (double c : seq.critical_points(n))
        if (domain.contains(c)) xs.push_back(c);
    return xs;
}

}  // namespace

std::optional<double> ModulusEstimate::delta_for(double eps) const {
    for (const auto& row : table)
        if (row.epsilon <= eps) return row.delta;
    return std::nullopt;
}

ModulusEstimate lipschitz_modulus(double lipschitz, std::vector<double> epsilons, double width) {
    if (!(lipschitz >= 0.0)) throw ConfigError("Lipschitz constant must be nonnegative");
    ModulusEstimate m;
    m.domainWidth = width;
    m.exactForPeriodic = true;
    for (double e : sorted_epsilons(std::move(epsilons)))
        m.table.push_back({e, lipschitz > 0.0 ? std::min(width, e / lipschitz) : width});
    return m;
}

ModulusEstimate estimate_modulus(const IndexedFamily& family, const Interval& domain,
                                 std::vector<double> epsilons, double gridSpacing,
                                 std::uint64_t indexHorizon, bool exactIndices) {
    const auto eps = sorted_epsilons(std::move(epsilons));
    if (!(gridSpacing > 0.0)) throw ConfigError("grid spacing must be positive");
    if (indexHorizon < 1) throw ConfigError("index horizon must be at least 1");

    const std::size_t cells = cells_for(domain, gridSpacing);
    const double h = domain.width() / static_cast<double>(cells);
    const auto xs = MapSequence::grid(domain, cells + 1);
    std::vector<double> v(xs.size());

    // Work in ascending epsilon: as the offset m grows the running oscillation
    // first crosses the smallest tolerance. firstFail[j] is the smallest grid
    // offset at which some sampled pair violates asc[j]; it is non-decreasing in j.
    const std::vector<double> asc(eps.rbegin(), eps.rend());
    std::vector<std::size_t> firstFail(asc.size(), cells + 1);
    for (std::uint64_t n = 0; n < indexHorizon; ++n) {
        family(n, xs, v);
        const auto mm = kernels::minmax(v);
        const double range = mm.max - mm.min;
        // Tolerances above the total oscillation can never fail at this n.
        const std::size_t limit = static_cast<std::size_t>(
            std::upper_bound(asc.begin(), asc.end(), range) - asc.begin());
        std::size_t ptr = 0;
        double running = 0.0;
        for (std::size_t m = 1; m <= cells && ptr < limit; ++m) {
            if (m >= firstFail[limit - 1]) break;
            running = std::max(running, kernels::max_abs_offset_diff(v, m));
            while (ptr < limit && running >= asc[ptr]) {
                firstFail[ptr] = std::min(firstFail[ptr], m);
                ++ptr;
            }
        }
    }

    ModulusEstimate out;
    out.gridSpacing = h;
    out.indexHorizon = indexHorizon;
    out.exactForPeriodic = exactIndices;
    out.domainWidth = domain.width();
    for (std::size_t j = 0; j < eps.size(); ++j) {
        const std::size_t fail = firstFail[eps.size() - 1 - j];
        const double delta = fail > cells ? domain.width() : static_cast<double>(fail) * h;
        out.table.push_back({eps[j], std::min(delta, domain.width())});
    }
    return out;
}

ModulusEstimate estimate_modulus(const MapSequence& seq, const Interval& domain,
                                 std::vector<double> epsilons, double gridSpacing,
                                 std::uint64_t indexHorizon) {
    if (!seq.domain().contains(domain)) throw ConfigError("modulus domain must lie in the map domain");
    const IndexedFamily deriv = [&seq](std::uint64_t n, std::span<const double> x,
                                       std::span<double> out) { seq.deriv1_batch(n, x, out); };
    return estimate_modulus(deriv, domain, std::move(epsilons), gridSpacing, indexHorizon,
                            seq.exactly_covered_by(indexHorizon));
}

ModulusEstimate compose_modulus(const ModulusEstimate& outer, const ModulusEstimate& inner,
                                bool outerCoversInnerRange) {
    if (!outerCoversInnerRange)
        throw RangeError("outer modulus does not cover the range of the inner family");
    ModulusEstimate out;
    out.gridSpacing = inner.gridSpacing;
    out.indexHorizon = inner.indexHorizon;
    out.exactForPeriodic = inner.exactForPeriodic && outer.exactForPeriodic;
    out.domainWidth = inner.domainWidth;
    for (const auto& row : outer.table) {
        const auto d = inner.delta_for(row.delta);
        if (!d) continue;
        if (!out.table.empty() && *d > out.table.back().delta) {
            out.table.push_back({row.epsilon, out.table.back().delta});
        } else {
            out.table.push_back({row.epsilon, *d});
        }
    }
    if (out.table.empty())
        throw ConfigError("inner modulus has no row fine enough for the outer tolerances");
    return out;
}

double derivative_infimum(const MapSequence& seq, const Orbit& orbit, std::uint64_t indexHorizon) {
    if (orbit.points.empty()) throw ConfigError("orbit is empty");
    const std::uint64_t indices = resolve_indices(seq, indexHorizon);
    std::vector<double> d(orbit.points.size());
    double m = std::numeric_limits<double>::infinity();
    for (std::uint64_t n = 0; n < indices; ++n) {
        seq.deriv1_batch(n, orbit.points, d);
        m = std::min(m, kernels::min_abs(d));
    }
    return m;
}

double second_derivative_bound(const MapSequence& seq, double gridSpacing,
                               std::uint64_t indexHorizon) {
    if (seq.smoothness() != Smoothness::C2)
        throw SmoothnessError("second derivative bound needs a C2 map sequence");
    const double spacing = resolve_spacing(gridSpacing, seq.domain());
    const std::uint64_t indices = resolve_indices(seq, indexHorizon);
    double bound = 0.0;
    std::vector<double> d;
    for (std::uint64_t n = 0; n < indices; ++n) {
        const auto xs = sample_points(seq, n, seq.domain(), spacing);
        d.resize(xs.size());
        seq.deriv2_batch(n, xs, d);
        bound = std::max(bound, kernels::max_abs(d));
    }
    return bound;
}

InvarianceResult check_invariance(const MapSequence& seq, const Interval& sub, double gridSpacing,
                                  std::uint64_t indexHorizon) {
    if (!seq.domain().contains(sub)) throw ConfigError("subinterval must lie in the domain");
    const double spacing = resolve_spacing(gridSpacing, sub);
    const std::uint64_t indices = resolve_indices(seq, indexHorizon);
    InvarianceResult res;
    std::vector<double> ys;
    for (std::uint64_t n = 0; n < indices; ++n) {
        const auto xs = sample_points(seq, n, sub, spacing);
        ys.resize(xs.size());
        seq.eval_batch(n, xs, ys);
        const auto mm = kernels::minmax(ys);
        res.worstExcursion = std::max({res.worstExcursion, sub.lo() - mm.min, mm.max - sub.hi()});
    }
    res.pass = res.worstExcursion <= 0.0;
    res.worstExcursion = std::max(0.0, res.worstExcursion);
    res.sampled = !seq.exactly_covered_by(indices);
    return res;
}

std::string_view to_string(Theorem t) noexcept {
    switch (t) {
        case Theorem::T31: return "T31";
        case Theorem::T32: return "T32";
        case Theorem::T41: return "T41";
    }
    return "unknown";
}

namespace {

HypothesisCheck modulus_check(const MapSequence& seq, const Interval& where,
                              const HypothesisConfig& cfg, std::uint64_t indices) {
    const auto mod = estimate_modulus(seq, where, cfg.epsilons, resolve_spacing(cfg.gridSpacing, where),
                                      indices);
    HypothesisCheck c{"derivative_equicontinuity", true, true, mod.table.back().delta};
    for (const auto& row : mod.table) c.pass = c.pass && row.delta > 0.0;
    return c;
}

void finish(HypothesisReport& rep) {
    rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(),
                           [](const HypothesisCheck& c) { return c.pass; });
    rep.sampled = std::any_of(rep.checks.begin(), rep.checks.end(),
                              [](const HypothesisCheck& c) { return c.sampled; });
}

}  // namespace

HypothesisReport check_theorem(const MapSequence& seq, Theorem which, double x0,
                               const ExponentEstimate& exponents, const HypothesisConfig& cfg) {
    if (!seq.domain().contains(x0)) throw DomainError("x0 outside the domain");
    const std::uint64_t indices = resolve_indices(seq, cfg.indexHorizon);
    const bool exactIndices = seq.exactly_covered_by(indices);

    HypothesisReport rep;
    rep.theorem = which;
    switch (which) {
        case Theorem::T31: {
            rep.suggestedDelta = default_delta(seq.domain());
            rep.checks.push_back(modulus_check(seq, seq.domain(), cfg, indices));

            const Orbit orbit = iterate_orbit(seq, x0, std::max<std::size_t>(1, cfg.orbitHorizon));
            const bool fixedOrbit = std::all_of(orbit.points.begin(), orbit.points.end(),
                                                [x0](double x) { return x == x0; });
            const double M = derivative_infimum(seq, orbit, indices);
            rep.checks.push_back({"derivative_infimum_positive", M > 0.0, !(fixedOrbit && exactIndices), M});

            rep.checks.push_back({"exponent_positive", !exponents.hitSentinel && exponents.upper > 0.0,
                                  true, exponents.upper});
            break;
        }
        case Theorem::T41: {
            const bool c2 = seq.smoothness() == Smoothness::C2;
            rep.checks.push_back({"c2_smoothness", c2, false, c2 ? 2.0 : 1.0});
            if (c2) {
                const double M = second_derivative_bound(seq, cfg.gridSpacing, indices);
                rep.checks.push_back({"second_derivative_bounded", std::isfinite(M), !exactIndices, M});
            }
            const bool finite = !exponents.hitSentinel && std::isfinite(exponents.lower) &&
                                std::isfinite(exponents.upper);
            rep.checks.push_back({"exponent_finite", finite, true, exponents.lower});
            rep.checks.push_back({"exponent_negative", finite && exponents.upper < 0.0, true,
                                  exponents.upper});
            rep.checks.push_back({"exponent_gap", finite && 2.0 * exponents.upper < exponents.lower,
                                  true, exponents.lower - 2.0 * exponents.upper});
            break;
        }
        case Theorem::T32:
            throw ConfigError("T32 is checked on an invariant set, not at a point");
    }
    finish(rep);
    return rep;
}

HypothesisReport check_theorem(const MapSequence& seq, const Interval& invariantSet,
                               const std::vector<double>& samplePoints, const HypothesisConfig& cfg) {
    if (samplePoints.empty()) throw ConfigError("T32 needs at least one sample point");
    for (double x : samplePoints)
        if (!invariantSet.contains(x)) throw DomainError("sample point outside the invariant set");
    const std::uint64_t indices = resolve_indices(seq, cfg.indexHorizon);

    HypothesisReport rep;
    rep.theorem = Theorem::T32;
    rep.suggestedDelta = default_delta(seq.domain());

    const auto inv = check_invariance(seq, invariantSet, cfg.gridSpacing, indices);
    rep.checks.push_back({"total_invariance", inv.pass, inv.sampled, inv.worstExcursion});

    rep.checks.push_back(modulus_check(seq, invariantSet, cfg, indices));

    const double spacing = resolve_spacing(cfg.gridSpacing, invariantSet);
    std::vector<double> d;
    double M = std::numeric_limits<double>::infinity();
    for (std::uint64_t n = 0; n < indices; ++n) {
        const auto xs = sample_points(seq, n, invariantSet, spacing);
        d.resize(xs.size());
        seq.deriv1_batch(n, xs, d);
        M = std::min(M, kernels::min_abs(d));
    }
    rep.checks.push_back({"derivative_lower_bound", M > 0.0, true, M});

    double inf = std::numeric_limits<double>::infinity();
    for (double x : samplePoints) {
        const Orbit orbit = iterate_orbit(seq, x, std::max<std::size_t>(10, cfg.orbitHorizon));
        const auto est = estimate_exponents(orbit, cfg.tailFraction);
        inf = std::min(inf, est.upper);
    }
    rep.checks.push_back({"exponent_infimum_positive", inf > 0.0, true, inf});

    finish(rep);
    return rep;
}

}  // namespace nads
