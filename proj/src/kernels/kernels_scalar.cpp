#include <cmath>
#include <limits>

#include "kernels_internal.hpp"

namespace nads::kernels::scalar {

namespace {

void logistic_step(double r, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (r * x[i]) * (1.0 - x[i]);
}

void logistic_deriv(double r, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = r * (1.0 - 2.0 * x[i]);
}

void affine_step(double a, double b, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b;
}

void horner(const double* c, std::size_t ncoef, const double* x, double* out, std::size_t n) {
    if (ncoef == 0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double acc = c[ncoef - 1];
        for (std::size_t k = ncoef - 1; k-- > 0;) acc = acc * x[i] + c[k];
        out[i] = acc;
    }
}

void abs_diff(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(a[i] - b[i]);
}

MinMax minmax(const double* x, std::size_t n) {
    MinMax mm{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < n; ++i) {
        mm.min = x[i] < mm.min ? x[i] : mm.min;
        mm.max = x[i] > mm.max ? x[i] : mm.max;
    }
    return mm;
}

double min_abs(const double* x, std::size_t n) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(x[i]);
        m = a < m ? a : m;
    }
    return m;
}

double max_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(x[i]);
        m = a > m ? a : m;
    }
    return m;
}

double max_abs_offset_diff(const double* v, std::size_t n, std::size_t m) {
    double best = 0.0;
    if (m >= n) return best;
    for (std::size_t i = 0; i + m < n; ++i) {
        const double d = std::fabs(v[i + m] - v[i]);
        best = d > best ? d : best;
    }
    return best;
}

void running_mean(const double* sums, double* out, std::size_t n, std::size_t first) {
    for (std::size_t i = 0; i < n; ++i) out[i] = sums[i] / static_cast<double>(first + i);
}

void envelope_update(const double* sep, double bound, double* lane_margin, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double m = bound - sep[i];
        lane_margin[i] = m < lane_margin[i] ? m : lane_margin[i];
    }
}

}  // namespace

const KernelTable& table() noexcept {
    static const KernelTable t{
        logistic_step, logistic_deriv, affine_step,         horner,       abs_diff,        minmax,
        min_abs,       max_abs,        max_abs_offset_diff, running_mean, envelope_update,
    };
    return t;
}

}  // namespace nads::kernels::scalar
