#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nads/lyapunov.hpp"
#include "nads/map_sequence.hpp"
#include "nads/orbit.hpp"

namespace nads {

/// Default number of indices sampled when the map sequence has no finite cover.
inline constexpr std::uint64_t kDefaultIndexHorizon = 256;
/// Default grid resolution: domain width / kDefaultGridCells.
inline constexpr std::size_t kDefaultGridCells = 10'000;

/// Batch evaluator of an indexed function family h_n.
using IndexedFamily =
    std::function<void(std::uint64_t n, std::span<const double> x, std::span<double> out)>;

struct ModulusRow {
    double epsilon;
    double delta;
};

/// Sampled equi-continuity modulus: for every tabulated epsilon, any sampled
/// n and grid pair with |x - y| < delta satisfies |h_n(x) - h_n(y)| < epsilon.
struct ModulusEstimate {
    /// epsilon strictly decreasing
    std::vector<ModulusRow> table;
    double gridSpacing = 0.0;
    std::uint64_t indexHorizon = 0;
    bool exactForPeriodic = false;
    double domainWidth = 0.0;

    /// Conservative lookup: the delta of the largest tabulated epsilon <= eps.
    std::optional<double> delta_for(double eps) const;
};

/// Lipschitz modulus delta = epsilon / L, capped at `width`.
ModulusEstimate lipschitz_modulus(double lipschitz, std::vector<double> epsilons, double width);

ModulusEstimate estimate_modulus(const IndexedFamily& family, const Interval& domain,
                                 std::vector<double> epsilons, double gridSpacing,
                                 std::uint64_t indexHorizon, bool exactIndices = false);

/// Modulus of the derivative family {f_n'}.
ModulusEstimate estimate_modulus(const MapSequence& seq, const Interval& domain,
                                 std::vector<double> epsilons, double gridSpacing,
                                 std::uint64_t indexHorizon);

/// delta(eps) = inner.delta(outer.delta(eps)) for g o h_n. `outerCoversInnerRange`
/// asserts that every h_n maps into the set where `outer` was estimated.
ModulusEstimate compose_modulus(const ModulusEstimate& outer, const ModulusEstimate& inner,
                                bool outerCoversInnerRange);

/// min |f_n'(x_k)| over n < indexHorizon and every orbit point.
double derivative_infimum(const MapSequence& seq, const Orbit& orbit, std::uint64_t indexHorizon);

/// max |f_n''| over the grid, endpoints and critical points, n < indexHorizon.
double second_derivative_bound(const MapSequence& seq, double gridSpacing,
                               std::uint64_t indexHorizon);

struct InvarianceResult {
    bool pass = false;
    bool sampled = true;
    /// Largest distance of an image from the subinterval (0 when invariant).
    double worstExcursion = 0.0;
};

InvarianceResult check_invariance(const MapSequence& seq, const Interval& sub, double gridSpacing,
                                  std::uint64_t indexHorizon);

enum class Theorem { T31, T32, T41 };

std::string_view to_string(Theorem t) noexcept;

struct HypothesisCheck {
    std::string name;
    bool pass = false;
    /// Grid or finite-horizon evidence rather than an exact computation.
    bool sampled = false;
    double evidence = 0.0;
};

struct HypothesisReport {
    Theorem theorem = Theorem::T31;
    std::vector<HypothesisCheck> checks;
    bool pass = false;
    bool sampled = false;
    /// Candidate sensitivity constant for the sensitivity theorems (width / 20).
    double suggestedDelta = 0.0;
};

struct HypothesisConfig {
    std::vector<double> epsilons{0.1, 0.01};
    /// 0 selects domain width / 10^4.
    double gridSpacing = 0.0;
    /// 0 selects one exact cover of the parameters, else 256 indices.
    std::uint64_t indexHorizon = 0;
    std::size_t orbitHorizon = 1000;
    double tailFraction = 0.5;
};

/// Hypotheses of the positive-exponent sensitivity theorem (T31) or the
/// negative-exponent stability theorem (T41) at x0.
HypothesisReport check_theorem(const MapSequence& seq, Theorem which, double x0,
                               const ExponentEstimate& exponents, const HypothesisConfig& config = {});

/// Hypotheses of the set version of the sensitivity theorem (T32) on the
/// subinterval `invariantSet`; exponents are estimated at `samplePoints`.
HypothesisReport check_theorem(const MapSequence& seq, const Interval& invariantSet,
                               const std::vector<double>& samplePoints,
                               const HypothesisConfig& config = {});

}  // namespace nads
