#pragma once

#include "psal/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define PSAL_SIMD_X86 1
#else
#define PSAL_SIMD_X86 0
#endif

namespace psal::simd::detail {

extern const KernelTable kScalarKernels;

#if PSAL_SIMD_X86 && defined(PSAL_HAVE_AVX2_TU)
extern const KernelTable kAvx2Kernels;
#endif

}  // namespace psal::simd::detail
