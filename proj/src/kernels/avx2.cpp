#include <immintrin.h>

#include "bosonic/kernels.hpp"

namespace bosonic::kernels {

void caxpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  // two complex values per register: (re0, im0, re1, im1)
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    __m256d sw = _mm256_permute_pd(xv, 0x5);
    __m256d t = _mm256_mul_pd(ai, sw);
    __m256d prod = _mm256_fmaddsub_pd(ar, xv, t);
    __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(yv, prod));
  }
  if (i < n) caxpy_scalar(n - i, a, x + i, y + i);
}

}  // namespace bosonic::kernels
