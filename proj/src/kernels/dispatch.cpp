#include <atomic>
#include <cstdlib>
#include <string_view>

#include "swae/kernels.hpp"

namespace swae::kernels {

#if !defined(SWAE_HAVE_AVX2_KERNELS)
namespace detail {
const KernelTable* avx2_table_if_compiled() noexcept { return nullptr; }
}  // namespace detail
#endif

namespace {

bool cpu_has_avx2_fma() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* best_table() noexcept {
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

const KernelTable* initial_table() noexcept {
  if (const char* env = std::getenv("SWAE_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && avx2_table() != nullptr) return avx2_table();
  }
  return best_table();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable* avx2_table() noexcept {
  static const KernelTable* table = cpu_has_avx2_fma() ? detail::avx2_table_if_compiled() : nullptr;
  return table;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

bool select(std::string_view name) noexcept {
  const KernelTable* t = nullptr;
  if (name == "scalar") {
    t = &scalar_table();
  } else if (name == "avx2") {
    t = avx2_table();
  } else if (name == "auto") {
    t = best_table();
  }
  if (t == nullptr) return false;
  current().store(t, std::memory_order_relaxed);
  return true;
}

}  // namespace swae::kernels
