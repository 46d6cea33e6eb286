// Compiled with -mavx2 -mfma. Nothing in this file may run before the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include "swae/kernels.hpp"

namespace swae::kernels {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  if (i + 4 <= n) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Four weight rows per pass so each x load feeds four FMAs.
void matmul_nt_avx2(const double* x, const double* w, double* y, std::size_t m, std::size_t k,
                    std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* xi = x + i * k;
    double* yi = y + i * n;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const double* w0 = w + j * k;
      const double* w1 = w0 + k;
      const double* w2 = w1 + k;
      const double* w3 = w2 + k;
      __m256d a0 = _mm256_setzero_pd();
      __m256d a1 = _mm256_setzero_pd();
      __m256d a2 = _mm256_setzero_pd();
      __m256d a3 = _mm256_setzero_pd();
      std::size_t p = 0;
      for (; p + 4 <= k; p += 4) {
        const __m256d xv = _mm256_loadu_pd(xi + p);
        a0 = _mm256_fmadd_pd(xv, _mm256_loadu_pd(w0 + p), a0);
        a1 = _mm256_fmadd_pd(xv, _mm256_loadu_pd(w1 + p), a1);
        a2 = _mm256_fmadd_pd(xv, _mm256_loadu_pd(w2 + p), a2);
        a3 = _mm256_fmadd_pd(xv, _mm256_loadu_pd(w3 + p), a3);
      }
      double s0 = hsum(a0), s1 = hsum(a1), s2 = hsum(a2), s3 = hsum(a3);
      for (; p < k; ++p) {
        s0 += xi[p] * w0[p];
        s1 += xi[p] * w1[p];
        s2 += xi[p] * w2[p];
        s3 += xi[p] * w3[p];
      }
      yi[j] = s0;
      yi[j + 1] = s1;
      yi[j + 2] = s2;
      yi[j + 3] = s3;
    }
    for (; j < n; ++j) yi[j] = dot_avx2(xi, w + j * k, k);
  }
}

// One or two rows of c against a run of columns held in registers while the
// inner dimension streams through. R rows share every b load.
template <int R>
void gemm_rows(const double* a, std::size_t rs, std::size_t ps, const double* b, double* c,
               std::size_t r0, std::size_t inner, std::size_t k) {
  std::size_t q = 0;
  for (; q + 16 <= k; q += 16) {
    __m256d acc[R][4];
    for (int r = 0; r < R; ++r) {
      for (int v = 0; v < 4; ++v) acc[r][v] = _mm256_loadu_pd(c + (r0 + r) * k + q + 4 * v);
    }
    for (std::size_t p = 0; p < inner; ++p) {
      const double* bp = b + p * k + q;
      const __m256d b0 = _mm256_loadu_pd(bp);
      const __m256d b1 = _mm256_loadu_pd(bp + 4);
      const __m256d b2 = _mm256_loadu_pd(bp + 8);
      const __m256d b3 = _mm256_loadu_pd(bp + 12);
      for (int r = 0; r < R; ++r) {
        const __m256d av = _mm256_set1_pd(a[(r0 + r) * rs + p * ps]);
        acc[r][0] = _mm256_fmadd_pd(av, b0, acc[r][0]);
        acc[r][1] = _mm256_fmadd_pd(av, b1, acc[r][1]);
        acc[r][2] = _mm256_fmadd_pd(av, b2, acc[r][2]);
        acc[r][3] = _mm256_fmadd_pd(av, b3, acc[r][3]);
      }
    }
    for (int r = 0; r < R; ++r) {
      for (int v = 0; v < 4; ++v) _mm256_storeu_pd(c + (r0 + r) * k + q + 4 * v, acc[r][v]);
    }
  }
  for (; q + 4 <= k; q += 4) {
    __m256d acc[R];
    for (int r = 0; r < R; ++r) acc[r] = _mm256_loadu_pd(c + (r0 + r) * k + q);
    for (std::size_t p = 0; p < inner; ++p) {
      const __m256d bv = _mm256_loadu_pd(b + p * k + q);
      for (int r = 0; r < R; ++r) {
        acc[r] = _mm256_fmadd_pd(_mm256_set1_pd(a[(r0 + r) * rs + p * ps]), bv, acc[r]);
      }
    }
    for (int r = 0; r < R; ++r) _mm256_storeu_pd(c + (r0 + r) * k + q, acc[r]);
  }
  for (; q < k; ++q) {
    for (int r = 0; r < R; ++r) {
      double s = c[(r0 + r) * k + q];
      for (std::size_t p = 0; p < inner; ++p) s += a[(r0 + r) * rs + p * ps] * b[p * k + q];
      c[(r0 + r) * k + q] = s;
    }
  }
}

void gemm_acc_avx2(const double* a, std::size_t rs, std::size_t ps, const double* b, double* c,
                   std::size_t rows, std::size_t inner, std::size_t k) {
  std::size_t r = 0;
  for (; r + 2 <= rows; r += 2) gemm_rows<2>(a, rs, ps, b, c, r, inner, k);
  if (r < rows) gemm_rows<1>(a, rs, ps, b, c, r, inner, k);
}

constexpr KernelTable kAvx2{"avx2",         dot_avx2,       axpy_avx2, squared_distance_avx2,
                            matmul_nt_avx2, gemm_acc_avx2};

}  // namespace

namespace detail {
const KernelTable* avx2_table_if_compiled() noexcept { return &kAvx2; }
}  // namespace detail

}  // namespace swae::kernels
