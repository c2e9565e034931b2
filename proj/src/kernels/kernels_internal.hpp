#pragma once

#include "nads/kernels.hpp"

namespace nads::kernels {

namespace scalar {
const KernelTable& table() noexcept;
}

#if defined(NADS_HAVE_AVX2)
namespace avx2 {
const KernelTable& table() noexcept;
}
#endif

}  // namespace nads::kernels
