#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"
#include "nads/errors.hpp"

namespace nads::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(NADS_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* table_for(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return &scalar_table();
        case Isa::Avx2: return isa_supported(Isa::Avx2) ? avx2_table() : nullptr;
    }
    return nullptr;
}

Isa detect() noexcept {
    if (const char* env = std::getenv("NADS_ISA")) {
        const std::string want(env);
        if (want == "scalar") return Isa::Scalar;
        if (want == "avx2" && isa_supported(Isa::Avx2)) return Isa::Avx2;
    }
    return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() noexcept {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

const KernelTable& scalar_table() noexcept { return scalar::table(); }

const KernelTable* avx2_table() noexcept {
#if defined(NADS_HAVE_AVX2)
    return &avx2::table();
#else
    return nullptr;
#endif
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2: {
            static const bool ok = avx2_table() != nullptr && cpu_has_avx2();
            return ok;
        }
    }
    return false;
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (!isa_supported(isa))
        throw ConfigError("instruction set '" + std::string(isa_name(isa)) + "' is not available");
    current().store(isa, std::memory_order_relaxed);
}

void reset_isa() noexcept { current().store(detect(), std::memory_order_relaxed); }

const KernelTable& active() noexcept { return *table_for(active_isa()); }

void logistic_step(double r, std::span<const double> x, std::span<double> out) {
    active().logistic_step(r, x.data(), out.data(), x.size());
}

void logistic_deriv(double r, std::span<const double> x, std::span<double> out) {
    active().logistic_deriv(r, x.data(), out.data(), x.size());
}

void affine_step(double a, double b, std::span<const double> x, std::span<double> out) {
    active().affine_step(a, b, x.data(), out.data(), x.size());
}

void horner(std::span<const double> coeffs, std::span<const double> x, std::span<double> out) {
    active().horner(coeffs.data(), coeffs.size(), x.data(), out.data(), x.size());
}

void abs_diff(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    active().abs_diff(a.data(), b.data(), out.data(), a.size());
}

MinMax minmax(std::span<const double> x) { return active().minmax(x.data(), x.size()); }

double min_abs(std::span<const double> x) { return active().min_abs(x.data(), x.size()); }

double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

double max_abs_offset_diff(std::span<const double> v, std::size_t m) {
    return active().max_abs_offset_diff(v.data(), v.size(), m);
}

void running_mean(std::span<const double> sums, std::span<double> out, std::size_t first) {
    active().running_mean(sums.data(), out.data(), sums.size(), first);
}

void envelope_update(std::span<const double> sep, double bound, std::span<double> lane_margin) {
    active().envelope_update(sep.data(), bound, lane_margin.data(), sep.size());
}

}  // namespace nads::kernels
