#include <atomic>
#include <cstdlib>
#include <string>

#include "flee/simd/kernels.hpp"
#include "kernels_impl.hpp"

namespace flee::simd {

std::string_view to_string(Isa isa) {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

const KernelTable* avx2_kernels() {
#if defined(FLEE_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* initial_choice() {
  const char* env = std::getenv("FLEE_SIMD");
  const std::string pref = env ? env : "auto";
  if (pref == "scalar") return &scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{initial_choice()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool set_active(Isa isa) {
  const KernelTable* t = isa == Isa::Avx2 ? avx2_kernels() : &scalar_kernels();
  if (t == nullptr) return false;
  slot().store(t, std::memory_order_release);
  return true;
}

}  // namespace flee::simd
