#pragma once

// Vector kernels behind the basis and projection code.
//
// Every kernel has a scalar reference implementation. On x86-64 an AVX2+FMA
// variant is compiled into a separate translation unit and selected at
// runtime when the CPU reports support. The AVX2 reductions use a different
// summation order than the scalar loops, so results agree to rounding, not
// bitwise; the backend is fixed for the lifetime of a computation, which keeps
// every result reproducible on a given machine.

#include <span>
#include <string_view>

namespace psal::simd {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend backend) noexcept;

bool backend_supported(Backend backend) noexcept;

/// Backend used by the free functions below.
Backend active_backend() noexcept;

/// Force a backend (tests use this to compare variants). Throws
/// psal::Error if the CPU cannot run it.
void set_backend(Backend backend);

/// Best backend the CPU supports.
Backend detect_backend() noexcept;

double dot(std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
double sum_sq(std::span<const double> x);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// out = alpha * x
void scale_copy(double alpha, std::span<const double> x, std::span<double> out);

// Kernel table; exposed so tests can call a specific variant directly.
struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*sum_sq)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scale_copy)(double, const double*, double*, std::size_t);
};

/// Returns nullptr when the backend is not compiled in or not supported.
const KernelTable* kernels_for(Backend backend) noexcept;

}  // namespace psal::simd
