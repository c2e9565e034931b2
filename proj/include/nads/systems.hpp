#pragma once

#include <vector>

#include "nads/map_sequence.hpp"

namespace nads::systems {

/// Indices sampled for parameter-range checks when the parameters are aperiodic.
inline constexpr std::uint64_t kParamCheckIndices = 256;

/// f_n(x) = r_n x (1 - x) on [0, 1]; ParamRangeError unless 0 < r_n <= 4 on
/// one period (or the first 256 indices).
MapSequence logistic(const ParamSequence& r);

/// f_n(x) = a_n x + b_n on `domain`; SelfMapError if an image leaves the domain.
MapSequence affine(const ParamSequence& slopes, const ParamSequence& intercepts,
                   const Interval& domain);

/// f_n(x) = sum_d c_{d,n} x^d on `domain`.
MapSequence polynomial(std::vector<ParamSequence> coefficients, const Interval& domain,
                       Smoothness smoothness = Smoothness::C2);

}  // namespace nads::systems
