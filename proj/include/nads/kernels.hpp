#pragma once
// Data-parallel inner loops shared by every analysis module.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant chosen at runtime. Variants are required to be bitwise identical to
// the scalar reference on finite inputs: no FMA contraction, same operation
// order per element. Reductions (min/max) are order-independent on non-NaN data.

#include <cstddef>
#include <span>
#include <string_view>

namespace nads::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct MinMax {
    double min;
    double max;
};

struct KernelTable {
    // out[i] = (r * x[i]) * (1 - x[i])
    void (*logistic_step)(double r, const double* x, double* out, std::size_t n);
    // out[i] = r * (1 - 2 * x[i])
    void (*logistic_deriv)(double r, const double* x, double* out, std::size_t n);
    // out[i] = a * x[i] + b
    void (*affine_step)(double a, double b, const double* x, double* out, std::size_t n);
    // Horner evaluation of sum_k c[k] x^k, coefficients low to high.
    void (*horner)(const double* c, std::size_t ncoef, const double* x, double* out,
                   std::size_t n);
    // out[i] = |a[i] - b[i]|
    void (*abs_diff)(const double* a, const double* b, double* out, std::size_t n);
    MinMax (*minmax)(const double* x, std::size_t n);
    double (*min_abs)(const double* x, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
    // max over i in [0, n - m) of |v[i + m] - v[i]|; 0 when m >= n
    double (*max_abs_offset_diff)(const double* v, std::size_t n, std::size_t m);
    // out[i] = sums[i] / (first + i)
    void (*running_mean)(const double* sums, double* out, std::size_t n, std::size_t first);
    // lane_margin[i] = min(lane_margin[i], bound - sep[i])
    void (*envelope_update)(const double* sep, double bound, double* lane_margin,
                            std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// Null when the binary was built without AVX2 support.
const KernelTable* avx2_table() noexcept;

bool isa_supported(Isa isa) noexcept;
Isa active_isa() noexcept;
/// Overrides runtime selection; throws ConfigError if the CPU lacks the ISA.
void force_isa(Isa isa);
/// Back to the detected default (honours NADS_ISA=scalar|avx2).
void reset_isa() noexcept;
const KernelTable& active() noexcept;

// Span front ends over the active table. Output spans must be at least as long as inputs.
void logistic_step(double r, std::span<const double> x, std::span<double> out);
void logistic_deriv(double r, std::span<const double> x, std::span<double> out);
void affine_step(double a, double b, std::span<const double> x, std::span<double> out);
void horner(std::span<const double> coeffs, std::span<const double> x, std::span<double> out);
void abs_diff(std::span<const double> a, std::span<const double> b, std::span<double> out);
MinMax minmax(std::span<const double> x);
double min_abs(std::span<const double> x);
double max_abs(std::span<const double> x);
double max_abs_offset_diff(std::span<const double> v, std::size_t m);
void running_mean(std::span<const double> sums, std::span<double> out, std::size_t first);
void envelope_update(std::span<const double> sep, double bound, std::span<double> lane_margin);

}  // namespace nads::kernels
