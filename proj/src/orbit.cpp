#include "nads/orbit.hpp"

#include <cmath>
#include <string>

#include "nads/errors.hpp"

namespace nads {

Orbit iterate_orbit(const MapSequence& seq, double x0, std::size_t horizon) {
    if (horizon < 1) throw ConfigError("orbit horizon must be at least 1");
    if (!seq.domain().contains(x0)) throw DomainError("initial point outside the domain");

    Orbit orbit;
    orbit.x0 = x0;
    orbit.points.resize(horizon + 1);
    orbit.logDerivs.resize(horizon);
    orbit.partialSums.resize(horizon + 1);
    orbit.points[0] = x0;
    orbit.partialSums[0] = 0.0;

    // Neumaier summation keeps S_n accurate to a few ulp regardless of n.
    double sum = 0.0;
    double comp = 0.0;
    bool dead = false;
    for (std::size_t n = 0; n < horizon; ++n) {
        const double x = orbit.points[n];
        double y = 0.0, d = 0.0;
        seq.eval_batch(n, {&x, 1}, {&y, 1});
        seq.deriv1_batch(n, {&x, 1}, {&d, 1});
        if (!seq.domain().contains(y))
            throw DomainError("orbit left the domain at step " + std::to_string(n + 1));
        orbit.points[n + 1] = y;

        const double ad = std::fabs(d);
        const double l = ad == 0.0 ? kNegInf : std::log(ad);
        orbit.logDerivs[n] = l;
        if (dead || l == kNegInf) {
            dead = true;
            orbit.partialSums[n + 1] = kNegInf;
            continue;
        }
        const double t = sum + l;
        if (std::fabs(sum) >= std::fabs(l))
            comp += (sum - t) + l;
        else
            comp += (l - t) + sum;
        sum = t;
        orbit.partialSums[n + 1] = sum + comp;
    }
    return orbit;
}

Ensemble::Ensemble(const MapSequence& seq, std::vector<double> starts)
    : seq_(&seq), states_(std::move(starts)) {
    for (double s : states_)
        if (!seq.domain().contains(s)) throw DomainError("ensemble start outside the domain");
}

void Ensemble::step() {
    seq_->eval_batch(step_, states_, states_);
    ++step_;
}

}  // namespace nads
