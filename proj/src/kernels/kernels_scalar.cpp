#include "swae/kernels.hpp"

namespace swae::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void matmul_nt_scalar(const double* x, const double* w, double* y, std::size_t m, std::size_t k,
                      std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) y[i * n + j] = dot_scalar(x + i * k, w + j * k, k);
  }
}

void gemm_acc_scalar(const double* a, std::size_t rs, std::size_t ps, const double* b, double* c,
                     std::size_t rows, std::size_t inner, std::size_t k) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* cr = c + r * k;
    for (std::size_t p = 0; p < inner; ++p) {
      const double arp = a[r * rs + p * ps];
      const double* bp = b + p * k;
      for (std::size_t j = 0; j < k; ++j) cr[j] += arp * bp[j];
    }
  }
}

constexpr KernelTable kScalar{"scalar", dot_scalar, axpy_scalar, squared_distance_scalar,
                              matmul_nt_scalar, gemm_acc_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace swae::kernels
