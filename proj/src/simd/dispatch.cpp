#include <atomic>
#include <cassert>
#include <string>

#include "kernels_internal.hpp"
#include "psal/error.hpp"

namespace psal::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if PSAL_SIMD_X86 && defined(PSAL_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* initial_table() noexcept { return kernels_for(detect_backend()); }

std::atomic<const KernelTable*>& table_slot() {
    static std::atomic<const KernelTable*> slot{initial_table()};
    return slot;
}

const KernelTable& active() { return *table_slot().load(std::memory_order_acquire); }

}  // namespace

std::string_view to_string(Backend backend) noexcept {
    switch (backend) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

bool backend_supported(Backend backend) noexcept {
    switch (backend) {
        case Backend::scalar: return true;
        case Backend::avx2: return cpu_has_avx2();
    }
    return false;
}

Backend detect_backend() noexcept {
    return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

const KernelTable* kernels_for(Backend backend) noexcept {
    if (!backend_supported(backend)) return nullptr;
    switch (backend) {
        case Backend::scalar: return &detail::kScalarKernels;
        case Backend::avx2:
#if PSAL_SIMD_X86 && defined(PSAL_HAVE_AVX2_TU)
            return &detail::kAvx2Kernels;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

Backend active_backend() noexcept {
    return table_slot().load(std::memory_order_acquire) == &detail::kScalarKernels ? Backend::scalar
                                                                                   : Backend::avx2;
}

void set_backend(Backend backend) {
    const KernelTable* table = kernels_for(backend);
    if (table == nullptr) {
        fail(ErrorCode::invalid_argument,
             "SIMD backend '" + std::string(to_string(backend)) + "' is not supported on this CPU");
    }
    table_slot().store(table, std::memory_order_release);
}

double dot(std::span<const double> x, std::span<const double> y) {
    assert(x.size() == y.size());
    return active().dot(x.data(), y.data(), x.size());
}

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

double sum_sq(std::span<const double> x) { return active().sum_sq(x.data(), x.size()); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    active().axpy(alpha, x.data(), y.data(), x.size());
}

void scale_copy(double alpha, std::span<const double> x, std::span<double> out) {
    assert(x.size() == out.size());
    active().scale_copy(alpha, x.data(), out.data(), x.size());
}

}  // namespace psal::simd
