#pragma once

// Inner-loop arithmetic kernels.
//
// Each kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2/FMA variant. The variant is chosen once at first use from CPU
// capabilities; SWAE_KERNELS=scalar|avx2 in the environment overrides it.
// Variants agree up to floating-point reassociation, not bitwise.

#include <cstddef>
#include <string_view>

namespace swae::kernels {

struct KernelTable {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  /// y[m×n] = x[m×k] · w[n×k]ᵀ
  void (*matmul_nt)(const double* x, const double* w, double* y, std::size_t m, std::size_t k,
                    std::size_t n);
  /// c[rows×k] += A[rows×inner] · b[inner×k], where A(r, p) = a[r·rs + p·ps].
  void (*gemm_acc)(const double* a, std::size_t rs, std::size_t ps, const double* b, double* c,
                   std::size_t rows, std::size_t inner, std::size_t k);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// The table every library routine dispatches through.
const KernelTable& active() noexcept;
/// Switches the active table by name ("scalar", "avx2" or "auto"); returns false
/// if the requested variant is unavailable. Not thread-safe: call before work starts.
bool select(std::string_view name) noexcept;

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
inline double squared_distance(const double* a, const double* b, std::size_t n) {
  return active().squared_distance(a, b, n);
}
inline void matmul_nt(const double* x, const double* w, double* y, std::size_t m, std::size_t k,
                      std::size_t n) {
  active().matmul_nt(x, w, y, m, k, n);
}

/// c[m×k] += a[m×n] · b[n×k]
inline void matmul_nn_acc(const double* a, const double* b, double* c, std::size_t m,
                          std::size_t n, std::size_t k) {
  active().gemm_acc(a, n, 1, b, c, m, n, k);
}
/// c[n×k] += a[m×n]ᵀ · b[m×k]
inline void matmul_tn_acc(const double* a, const double* b, double* c, std::size_t m,
                          std::size_t n, std::size_t k) {
  active().gemm_acc(a, 1, n, b, c, n, m, k);
}

namespace detail {
const KernelTable* avx2_table_if_compiled() noexcept;
}

}  // namespace swae::kernels
