#include "nads/map_sequence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nads/errors.hpp"
#include "nads/kernels.hpp"

namespace nads {

namespace {

constexpr std::size_t kMaxCoefficients = 16;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

MapSequence::MapSequence(Interval domain, Family family, Smoothness smoothness,
                         const ValidationOptions& options)
    : domain_(domain), family_(std::move(family)), smoothness_(smoothness) {
    if (const auto* poly = std::get_if<Polynomial>(&family_)) {
        if (poly->coefficients.empty())
            throw ConfigError("polynomial family needs at least one coefficient sequence");
        if (poly->coefficients.size() > kMaxCoefficients)
            throw ConfigError("polynomial degree above " + std::to_string(kMaxCoefficients - 1) +
                              " is not supported");
    }
    validate(options);
}

MapSequence::MapSequence(Unchecked, Interval domain, Family family, Smoothness smoothness)
    : domain_(domain), family_(std::move(family)), smoothness_(smoothness) {}

std::string MapSequence::family_name() const {
    return std::visit(overloaded{
                          [](const Logistic&) { return std::string("logistic"); },
                          [](const Affine&) { return std::string("affine"); },
                          [](const Polynomial&) { return std::string("polynomial"); },
                      },
                      family_);
}

void MapSequence::polynomial_coefficients(std::uint64_t n, int order,
                                          std::vector<double>& out) const {
    const auto& seqs = std::get<Polynomial>(family_).coefficients;
    out.clear();
    for (std::size_t d = static_cast<std::size_t>(order); d < seqs.size(); ++d) {
        double factor = 1.0;
        for (int j = 0; j < order; ++j) factor *= static_cast<double>(d - j);
        out.push_back(factor * seqs[d].value(n));
    }
}

void MapSequence::eval_batch(std::uint64_t n, std::span<const double> x,
                             std::span<double> out) const {
    std::visit(overloaded{
                   [&](const Logistic& f) { kernels::logistic_step(f.r.value(n), x, out); },
                   [&](const Affine& f) {
                       kernels::affine_step(f.slope.value(n), f.intercept.value(n), x, out);
                   },
                   [&](const Polynomial&) {
                       std::vector<double> c;
                       polynomial_coefficients(n, 0, c);
                       kernels::horner(c, x, out);
                   },
               },
               family_);
}

void MapSequence::deriv1_batch(std::uint64_t n, std::span<const double> x,
                               std::span<double> out) const {
    std::visit(overloaded{
                   [&](const Logistic& f) { kernels::logistic_deriv(f.r.value(n), x, out); },
                   [&](const Affine& f) {
                       std::fill_n(out.begin(), x.size(), f.slope.value(n));
                   },
                   [&](const Polynomial&) {
                       std::vector<double> c;
                       polynomial_coefficients(n, 1, c);
                       kernels::horner(c, x, out);
                   },
               },
               family_);
}

void MapSequence::deriv2_batch(std::uint64_t n, std::span<const double> x,
                               std::span<double> out) const {
    if (smoothness_ != Smoothness::C2)
        throw SmoothnessError("second derivative requested from a C1 map sequence");
    std::visit(overloaded{
                   [&](const Logistic& f) { std::fill_n(out.begin(), x.size(), -2.0 * f.r.value(n)); },
                   [&](const Affine&) { std::fill_n(out.begin(), x.size(), 0.0); },
                   [&](const Polynomial&) {
                       std::vector<double> c;
                       polynomial_coefficients(n, 2, c);
                       kernels::horner(c, x, out);
                   },
               },
               family_);
}

double MapSequence::eval(std::uint64_t n, double x) const {
    if (!domain_.contains(x))
        throw DomainError("x = " + fmt(x) + " lies outside [" + fmt(domain_.lo()) + ", " +
                          fmt(domain_.hi()) + "]");
    double y = 0.0;
    eval_batch(n, {&x, 1}, {&y, 1});
    return y;
}

double MapSequence::deriv1(std::uint64_t n, double x) const {
    if (!domain_.contains(x)) throw DomainError("x = " + fmt(x) + " lies outside the domain");
    double y = 0.0;
    deriv1_batch(n, {&x, 1}, {&y, 1});
    return y;
}

double MapSequence::deriv2(std::uint64_t n, double x) const {
    if (!domain_.contains(x)) throw DomainError("x = " + fmt(x) + " lies outside the domain");
    double y = 0.0;
    deriv2_batch(n, {&x, 1}, {&y, 1});
    return y;
}

std::vector<double> MapSequence::critical_points(std::uint64_t n) const {
    return std::visit(
        overloaded{
            [&](const Logistic& f) -> std::vector<double> {
                if (f.r.value(n) == 0.0) return {};
                return domain_.contains(0.5) ? std::vector<double>{0.5} : std::vector<double>{};
            },
            [](const Affine&) -> std::vector<double> { return {}; },
            [&](const Polynomial&) -> std::vector<double> {
                // Bracket sign changes of f_n' on a fine grid, then bisect.
                constexpr std::size_t kCells = 1024;
                const auto xs = grid(domain_, kCells + 1);
                std::vector<double> d(xs.size());
                deriv1_batch(n, xs, d);
                std::vector<double> roots;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    if (d[i] == 0.0) {
                        roots.push_back(xs[i]);
                        continue;
                    }
                    if (i + 1 < xs.size() && d[i + 1] != 0.0 && (d[i] < 0.0) != (d[i + 1] < 0.0)) {
                        double a = xs[i], b = xs[i + 1], fa = d[i];
                        for (int it = 0; it < 200 && a < b; ++it) {
                            const double mid = 0.5 * (a + b);
                            if (mid <= a || mid >= b) break;
                            double fm = 0.0;
                            deriv1_batch(n, {&mid, 1}, {&fm, 1});
                            if ((fm < 0.0) == (fa < 0.0)) {
                                a = mid;
                                fa = fm;
                            } else {
                                b = mid;
                            }
                        }
                        roots.push_back(0.5 * (a + b));
                    }
                }
                return roots;
            },
        },
        family_);
}

MapSequence MapSequence::shifted(std::uint64_t k) const {
    Family f = std::visit(overloaded{
                              [k](const Logistic& g) -> Family { return Logistic{g.r.shifted(k)}; },
                              [k](const Affine& g) -> Family {
                                  return Affine{g.slope.shifted(k), g.intercept.shifted(k)};
                              },
                              [k](const Polynomial& g) -> Family {
                                  Polynomial p;
                                  for (const auto& c : g.coefficients) p.coefficients.push_back(c.shifted(k));
                                  return p;
                              },
                          },
                          family_);
    return MapSequence(Unchecked{}, domain_, std::move(f), smoothness_);
}

std::optional<IndexCover> MapSequence::cover() const {
    auto combine = [](std::optional<IndexCover> acc,
                      const ParamSequence& p) -> std::optional<IndexCover> {
        const auto c = p.cover();
        if (!acc || !c) return std::nullopt;
        return merge(*acc, *c);
    };
    return std::visit(overloaded{
                          [&](const Logistic& f) { return f.r.cover(); },
                          [&](const Affine& f) {
                              return combine(f.slope.cover(), f.intercept);
                          },
                          [&](const Polynomial& f) {
                              std::optional<IndexCover> acc = IndexCover{0, 1};
                              for (const auto& c : f.coefficients) acc = combine(acc, c);
                              return acc;
                          },
                      },
                      family_);
}

std::uint64_t MapSequence::sample_indices(std::uint64_t fallback, std::uint64_t cap) const {
    const auto c = cover();
    const std::uint64_t want = c ? c->count() : fallback;
    return std::max<std::uint64_t>(1, std::min(want, cap));
}

bool MapSequence::exactly_covered_by(std::uint64_t indexCount) const {
    const auto c = cover();
    return c && indexCount >= c->count();
}

std::vector<double> MapSequence::grid(const Interval& domain, std::size_t points) {
    if (points < 2) points = 2;
    std::vector<double> xs(points);
    const double h = domain.width() / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) xs[i] = domain.lo() + h * static_cast<double>(i);
    xs.back() = domain.hi();
    return xs;
}

void MapSequence::validate(const ValidationOptions& options) const {
    const std::uint64_t indices = sample_indices(options.aperiodicIndices, options.maxIndices);
    const auto base = grid(domain_, options.gridPoints);
    std::vector<double> xs, ys;

    // Interior points for the central-difference check.
    const double h = 1e-6 * std::max(1.0, domain_.width());
    std::vector<double> probe;
    if (domain_.width() > 4.0 * h) {
        const Interval inner(domain_.lo() + h, domain_.hi() - h);
        probe = grid(inner, options.derivativeCheckPoints);
    }
    std::vector<double> plus(probe.size()), minus(probe.size()), fp(probe.size()), fm(probe.size()),
        d(probe.size());

    for (std::uint64_t n = 0; n < indices; ++n) {
        xs = base;
        const auto crit = critical_points(n);
        xs.insert(xs.end(), crit.begin(), crit.end());
        ys.resize(xs.size());
        eval_batch(n, xs, ys);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!domain_.contains(ys[i]))
                throw SelfMapError("f_" + std::to_string(n) + "(" + fmt(xs[i]) + ") = " + fmt(ys[i]) +
                                   " leaves [" + fmt(domain_.lo()) + ", " + fmt(domain_.hi()) + "]");
        }

        if (probe.empty()) continue;
        for (std::size_t i = 0; i < probe.size(); ++i) {
            plus[i] = probe[i] + h;
            minus[i] = probe[i] - h;
        }
        auto check = [&](const char* what, auto&& value, auto&& derivative) {
            value(plus, fp);
            value(minus, fm);
            derivative(probe, d);
            for (std::size_t i = 0; i < probe.size(); ++i) {
                const double fd = (fp[i] - fm[i]) / (plus[i] - minus[i]);
                if (std::fabs(fd - d[i]) > options.derivativeRelTol * std::max(1.0, std::fabs(d[i])))
                    throw ConfigError(std::string(what) + " of f_" + std::to_string(n) + " at " +
                                      fmt(probe[i]) + " disagrees with a central difference (" +
                                      fmt(d[i]) + " vs " + fmt(fd) + ")");
            }
        };
        check(
            "first derivative", [&](auto in, auto& out) { eval_batch(n, in, out); },
            [&](auto in, auto& out) { deriv1_batch(n, in, out); });
        if (smoothness_ == Smoothness::C2)
            check(
                "second derivative", [&](auto in, auto& out) { deriv1_batch(n, in, out); },
                [&](auto in, auto& out) { deriv2_batch(n, in, out); });
    }
}

}  // namespace nads
