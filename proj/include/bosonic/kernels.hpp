#pragma once

#include <cstddef>

#include "bosonic/space.hpp"

namespace bosonic::kernels {

// y[0..n) += a * x[0..n)
void caxpy(std::size_t n, cplx a, const cplx* x, cplx* y);

void caxpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y);
#ifdef BOSONIC_HAVE_AVX2
void caxpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y);
#endif

// "avx2" or "scalar". BOSONIC_SIMD=scalar in the environment forces scalar.
const char* active_kernel();
bool avx2_available();

}  // namespace bosonic::kernels
