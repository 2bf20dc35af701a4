#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense-layer inner loops. Every kernel exists as a scalar reference and,
// where the build and CPU allow it, an AVX2 variant chosen once at startup.
//
// Elementwise kernels (gemv_t_acc, ger_acc, axpy, adam) perform the same
// IEEE operations in the same order in every variant and are bitwise equal.
// gemv reduces in 4-lane partial sums with FMA under AVX2, so it agrees with
// the scalar reference only to rounding; each variant is deterministic.

namespace flee::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct AdamCoeffs {
  double lr;
  double beta1;
  double beta2;
  double eps;
  double bias1;  // 1 - beta1^t
  double bias2;  // 1 - beta2^t
};

struct KernelTable {
  Isa isa;

  /// y[r] = b[r] + sum_c W[r*cols + c] * x[c]. `b` may be empty (treated as 0).
  void (*gemv)(std::span<const double> w, std::span<const double> b, std::span<const double> x,
               std::span<double> y);

  /// out[c] += sum_r W[r*cols + c] * g[r], accumulated row by row.
  void (*gemv_t_acc)(std::span<const double> w, std::span<const double> g, std::span<double> out);

  /// G[r*cols + c] += g[r] * x[c].
  void (*ger_acc)(std::span<const double> g, std::span<const double> x, std::span<double> grad_w);

  /// y += a * x.
  void (*axpy)(double a, std::span<const double> x, std::span<double> y);

  /// Bias-corrected Adam update, in place on p, m, v.
  void (*adam)(std::span<double> p, std::span<const double> g, std::span<double> m, std::span<double> v,
               const AdamCoeffs& c);
};

const KernelTable& scalar_kernels();

/// nullptr when the variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// Kernels used by the library. Defaults to the best supported variant; the
/// FLEE_SIMD environment variable (auto|scalar|avx2) overrides at first use.
const KernelTable& active();

/// Forces a variant. Returns false (and changes nothing) if unsupported.
bool set_active(Isa isa);

}  // namespace flee::simd
