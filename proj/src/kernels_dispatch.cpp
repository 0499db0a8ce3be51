#include <atomic>
#include <cstdlib>
#include <string>

#include "purify/errors.hpp"
#include "purify/kernels.hpp"

namespace purify::kernels {

#if defined(PURIFY_BUILD_AVX2)
const KernelTable& avx2_table();  // defined in kernels_avx2.cpp
#endif

bool avx2_available() {
#if defined(PURIFY_BUILD_AVX2) && defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* resolve_auto() {
  if (const char* env = std::getenv("PURIFY_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return &scalar_table();
    if (v == "avx2") {
      if (!avx2_available())
        throw ConfigError("PURIFY_KERNELS=avx2 but this build/CPU has no avx2 kernels");
#if defined(PURIFY_BUILD_AVX2)
      return &avx2_table();
#endif
    }
    if (!v.empty()) throw ConfigError("unknown PURIFY_KERNELS value: " + v + " (scalar|avx2)");
  }
#if defined(PURIFY_BUILD_AVX2)
  if (avx2_available()) return &avx2_table();
#endif
  return &scalar_table();
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    t = resolve_auto();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void set_backend(Backend b) {
  switch (b) {
    case Backend::Auto:
      g_active.store(nullptr, std::memory_order_release);
      active();
      break;
    case Backend::Scalar:
      g_active.store(&scalar_table(), std::memory_order_release);
      break;
    case Backend::Avx2:
      if (!avx2_available())
        throw ConfigError("avx2 kernels are not available in this build/CPU");
#if defined(PURIFY_BUILD_AVX2)
      g_active.store(&avx2_table(), std::memory_order_release);
#endif
      break;
  }
}

}  // namespace purify::kernels
