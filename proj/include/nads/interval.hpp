#pragma once

#include <string>

#include "nads/errors.hpp"

namespace nads {

/// Non-degenerate closed interval [lo, hi] with the metric |x - y|.
class Interval {
public:
    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!(lo < hi))
            throw ConfigError("interval must satisfy lo < hi, got [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
    }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double width() const noexcept { return hi_ - lo_; }

    bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& other) const noexcept {
        return lo_ <= other.lo_ && other.hi_ <= hi_;
    }

    double clamp(double x) const noexcept { return x < lo_ ? lo_ : (x > hi_ ? hi_ : x); }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_;
    double hi_;
};

}  // namespace nads
