#include <cstdlib>
#include <cstring>

#include "bosonic/kernels.hpp"

namespace bosonic::kernels {

namespace {

using AxpyFn = void (*)(std::size_t, cplx, const cplx*, cplx*);

bool force_scalar() {
  const char* v = std::getenv("BOSONIC_SIMD");
  return v && std::strcmp(v, "scalar") == 0;
}

AxpyFn pick() {
#ifdef BOSONIC_HAVE_AVX2
  if (!force_scalar() && avx2_available()) return &caxpy_avx2;
#endif
  return &caxpy_scalar;
}

AxpyFn g_axpy = pick();

}  // namespace

bool avx2_available() {
#ifdef BOSONIC_HAVE_AVX2
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void caxpy(std::size_t n, cplx a, const cplx* x, cplx* y) { g_axpy(n, a, x, y); }

const char* active_kernel() { return g_axpy == &caxpy_scalar ? "scalar" : "avx2"; }

}  // namespace bosonic::kernels
