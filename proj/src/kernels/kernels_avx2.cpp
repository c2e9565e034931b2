// Compiled with -mavx2 only (no -mfma); see kernels.hpp for the equivalence rule.
#include <immintrin.h>

#include <cmath>
#include <limits>

#include "kernels_internal.hpp"

namespace nads::kernels::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline double hmin(__m256d v) {
    alignas(32) double t[kLanes];
    _mm256_store_pd(t, v);
    double m = t[0];
    for (std::size_t i = 1; i < kLanes; ++i) m = t[i] < m ? t[i] : m;
    return m;
}

inline double hmax(__m256d v) {
    alignas(32) double t[kLanes];
    _mm256_store_pd(t, v);
    double m = t[0];
    for (std::size_t i = 1; i < kLanes; ++i) m = t[i] > m ? t[i] : m;
    return m;
}

void logistic_step(double r, const double* x, double* out, std::size_t n) {
    const __m256d vr = _mm256_set1_pd(r);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_mul_pd(vr, vx), _mm256_sub_pd(one, vx)));
    }
    for (; i < n; ++i) out[i] = (r * x[i]) * (1.0 - x[i]);
}

void logistic_deriv(double r, const double* x, double* out, std::size_t n) {
    const __m256d vr = _mm256_set1_pd(r);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(vr, _mm256_sub_pd(one, _mm256_mul_pd(two, vx))));
    }
    for (; i < n; ++i) out[i] = r * (1.0 - 2.0 * x[i]);
}

void affine_step(double a, double b, const double* x, double* out, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes)
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)), vb));
    for (; i < n; ++i) out[i] = a * x[i] + b;
}

void horner(const double* c, std::size_t ncoef, const double* x, double* out, std::size_t n) {
    if (ncoef == 0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
        return;
    }
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        __m256d acc = _mm256_set1_pd(c[ncoef - 1]);
        for (std::size_t k = ncoef - 1; k-- > 0;)
            acc = _mm256_add_pd(_mm256_mul_pd(acc, vx), _mm256_set1_pd(c[k]));
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i) {
        double acc = c[ncoef - 1];
        for (std::size_t k = ncoef - 1; k-- > 0;) acc = acc * x[i] + c[k];
        out[i] = acc;
    }
}

void abs_diff(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes)
        _mm256_storeu_pd(out + i,
                         abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
    for (; i < n; ++i) out[i] = std::fabs(a[i] - b[i]);
}

MinMax minmax(const double* x, std::size_t n) {
    __m256d lo = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256d hi = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d v = _mm256_loadu_pd(x + i);
        lo = _mm256_min_pd(v, lo);
        hi = _mm256_max_pd(v, hi);
    }
    MinMax mm{hmin(lo), hmax(hi)};
    for (; i < n; ++i) {
        mm.min = x[i] < mm.min ? x[i] : mm.min;
        mm.max = x[i] > mm.max ? x[i] : mm.max;
    }
    return mm;
}

double min_abs(const double* x, std::size_t n) {
    __m256d acc = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) acc = _mm256_min_pd(abs_pd(_mm256_loadu_pd(x + i)), acc);
    double m = hmin(acc);
    for (; i < n; ++i) {
        const double a = std::fabs(x[i]);
        m = a < m ? a : m;
    }
    return m;
}

double max_abs(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) acc = _mm256_max_pd(abs_pd(_mm256_loadu_pd(x + i)), acc);
    double m = hmax(acc);
    for (; i < n; ++i) {
        const double a = std::fabs(x[i]);
        m = a > m ? a : m;
    }
    return m;
}

double max_abs_offset_diff(const double* v, std::size_t n, std::size_t m) {
    if (m >= n) return 0.0;
    const std::size_t count = n - m;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= count; i += kLanes)
        acc = _mm256_max_pd(
            abs_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i + m), _mm256_loadu_pd(v + i))), acc);
    double best = hmax(acc);
    for (; i < count; ++i) {
        const double d = std::fabs(v[i + m] - v[i]);
        best = d > best ? d : best;
    }
    return best;
}

void running_mean(const double* sums, double* out, std::size_t n, std::size_t first) {
    // Integer-valued doubles below 2^53 add exactly, so the lane counters match
    // static_cast<double>(first + i) bit for bit.
    const double f = static_cast<double>(first);
    __m256d idx = _mm256_set_pd(f + 3.0, f + 2.0, f + 1.0, f);
    const __m256d step = _mm256_set1_pd(static_cast<double>(kLanes));
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(sums + i), idx));
        idx = _mm256_add_pd(idx, step);
    }
    for (; i < n; ++i) out[i] = sums[i] / static_cast<double>(first + i);
}

void envelope_update(const double* sep, double bound, double* lane_margin, std::size_t n) {
    const __m256d vb = _mm256_set1_pd(bound);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d m = _mm256_sub_pd(vb, _mm256_loadu_pd(sep + i));
        _mm256_storeu_pd(lane_margin + i, _mm256_min_pd(m, _mm256_loadu_pd(lane_margin + i)));
    }
    for (; i < n; ++i) {
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

}  // namespace nads::kernels::avx2
