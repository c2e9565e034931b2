#include "nads/systems.hpp"

#include <cmath>
#include <sstream>

#include "nads/errors.hpp"

namespace nads::systems {

MapSequence logistic(const ParamSequence& r) {
    const MapSequence::Family family = MapSequence::Logistic{r};
    const Interval unit(0.0, 1.0);
    const auto cover = r.cover();
    const std::uint64_t count = cover ? cover->count() : kParamCheckIndices;
    for (std::uint64_t n = 0; n < count; ++n) {
        const double v = r.value(n);
        if (!(v > 0.0 && v <= 4.0)) {
            std::ostringstream os;
            os.precision(17);
            os << "logistic parameter r_" << n << " = " << v << " is outside (0, 4]";
            throw ParamRangeError(os.str());
        }
    }
    return MapSequence(unit, family, Smoothness::C2);
}

MapSequence affine(const ParamSequence& slopes, const ParamSequence& intercepts,
                   const Interval& domain) {
    return MapSequence(domain, MapSequence::Affine{slopes, intercepts}, Smoothness::C2);
}

MapSequence polynomial(std::vector<ParamSequence> coefficients, const Interval& domain,
                       Smoothness smoothness) {
    return MapSequence(domain, MapSequence::Polynomial{std::move(coefficients)}, smoothness);
}

}  // namespace nads::systems
