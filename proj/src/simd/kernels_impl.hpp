#pragma once

#include "flee/simd/kernels.hpp"

namespace flee::simd::detail {

// Defined in kernels_avx2.cpp when that translation unit is built.
const KernelTable& avx2_table();

}  // namespace flee::simd::detail
