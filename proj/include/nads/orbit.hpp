#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "nads/map_sequence.hpp"

namespace nads {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Trajectory x_0..x_N together with the log-derivative partial sums
/// S_n = sum_{k<n} ln|f_k'(x_k)|. A vanishing derivative makes S_n = -inf from
/// that step on.
struct Orbit {
    double x0 = 0.0;
    /// x_0..x_N
    std::vector<double> points;
    /// ln|f_k'(x_k)| for k = 0..N-1
    std::vector<double> logDerivs;
    /// S_0..S_N with S_0 = 0 (compensated summation)
    std::vector<double> partialSums;

    std::size_t horizon() const noexcept { return logDerivs.size(); }
};

/// Deterministic iteration of x_{n+1} = f_n(x_n) for `horizon` steps.
/// DomainError if x0 (or, through roundoff, a later point) leaves the domain.
Orbit iterate_orbit(const MapSequence& seq, double x0, std::size_t horizon);

/// Iterates several initial conditions in lockstep; row n holds every x_n.
/// Points are bitwise identical to iterate_orbit run per start.
class Ensemble {
public:
    Ensemble(const MapSequence& seq, std::vector<double> starts);

    /// Applies f_n, where n is the current step, to every member.
    void step();

    std::size_t step_index() const noexcept { return step_; }
    const std::vector<double>& states() const noexcept { return states_; }

private:
    const MapSequence* seq_;
    std::vector<double> states_;
    std::size_t step_ = 0;
};

}  // namespace nads
