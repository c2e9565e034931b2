#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nads/interval.hpp"
#include "nads/param_sequence.hpp"

namespace nads {

enum class Smoothness { C1, C2 };

/// Knobs for the construction-time self-checks.
struct ValidationOptions {
    std::size_t gridPoints = 10'000;
    /// Indices checked when the parameters have no finite cover.
    std::uint64_t aperiodicIndices = 64;
    /// Upper bound on indices checked even when a finite cover exists.
    std::uint64_t maxIndices = 4096;
    std::size_t derivativeCheckPoints = 101;
    double derivativeRelTol = 1e-6;
};

/// The sequence {f_n} of interval self-maps driving x_{n+1} = f_n(x_n).
///
/// Construction validates that each sampled f_n maps a dense grid (plus the
/// endpoints and critical points) into the domain, and that the closed-form
/// derivatives agree with central differences. Immutable afterwards.
class MapSequence {
public:
    /// f_n(x) = r_n x (1 - x)
    struct Logistic {
        ParamSequence r;
    };
    /// f_n(x) = a_n x + b_n
    struct Affine {
        ParamSequence slope;
        ParamSequence intercept;
    };
    /// f_n(x) = sum_d c_{d,n} x^d; coefficients[d] is the sequence for x^d.
    struct Polynomial {
        std::vector<ParamSequence> coefficients;
    };
    using Family = std::variant<Logistic, Affine, Polynomial>;

    MapSequence(Interval domain, Family family, Smoothness smoothness = Smoothness::C2,
                const ValidationOptions& options = {});

    const Interval& domain() const noexcept { return domain_; }
    const Family& family() const noexcept { return family_; }
    Smoothness smoothness() const noexcept { return smoothness_; }
    std::string family_name() const;

    /// f_n(x); DomainError if x is outside the domain.
    double eval(std::uint64_t n, double x) const;
    double deriv1(std::uint64_t n, double x) const;
    /// SmoothnessError unless the sequence is C2.
    double deriv2(std::uint64_t n, double x) const;

    // Batch forms without domain checks. `out` may alias `x`. Results are
    // bitwise identical to the scalar forms.
    void eval_batch(std::uint64_t n, std::span<const double> x, std::span<double> out) const;
    void deriv1_batch(std::uint64_t n, std::span<const double> x, std::span<double> out) const;
    void deriv2_batch(std::uint64_t n, std::span<const double> x, std::span<double> out) const;

    /// Zeros of f_n' inside the domain (none for affine maps).
    std::vector<double> critical_points(std::uint64_t n) const;

    /// g_m := f_{m+k}, same domain, no re-validation.
    MapSequence shifted(std::uint64_t k) const;

    /// Present when finitely many indices determine every f_n.
    std::optional<IndexCover> cover() const;

    /// Index count that covers the sequence exactly, else `fallback`; never above `cap`.
    std::uint64_t sample_indices(std::uint64_t fallback, std::uint64_t cap = 1u << 20) const;
    bool exactly_covered_by(std::uint64_t indexCount) const;

    /// Uniform grid of `points` values from lo to hi inclusive.
    static std::vector<double> grid(const Interval& domain, std::size_t points);

private:
    struct Unchecked {};
    MapSequence(Unchecked, Interval domain, Family family, Smoothness smoothness);

    void validate(const ValidationOptions& options) const;
    void polynomial_coefficients(std::uint64_t n, int order, std::vector<double>& out) const;

    Interval domain_;
    Family family_;
    Smoothness smoothness_;
};

}  // namespace nads
