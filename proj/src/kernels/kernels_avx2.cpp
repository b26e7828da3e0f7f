// AVX2/FMA variants of the inner-loop kernels. This translation unit is the
// only one compiled with -mavx2 -mfma; callers reach it through the runtime
// dispatch in kernels.cpp after a cpuid check.

#include "msdg/kernels.hpp"

#ifdef MSDG_HAVE_AVX2

#include <immintrin.h>

namespace msdg::kernels::avx2 {

void complex_dot(const double* a_re, const double* a_im,
                 const double* b_re, const double* b_im,
                 std::size_t n, double& out_re, double& out_im) {
  __m256d acc_re0 = _mm256_setzero_pd();
  __m256d acc_re1 = _mm256_setzero_pd();
  __m256d acc_im0 = _mm256_setzero_pd();
  __m256d acc_im1 = _mm256_setzero_pd();

  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    __m256d ar0 = _mm256_loadu_pd(a_re + k);
    __m256d ai0 = _mm256_loadu_pd(a_im + k);
    __m256d br0 = _mm256_loadu_pd(b_re + k);
    __m256d bi0 = _mm256_loadu_pd(b_im + k);
    acc_re0 = _mm256_fmadd_pd(ar0, br0, acc_re0);
    acc_re0 = _mm256_fnmadd_pd(ai0, bi0, acc_re0);
    acc_im0 = _mm256_fmadd_pd(ar0, bi0, acc_im0);
    acc_im0 = _mm256_fmadd_pd(ai0, br0, acc_im0);

    __m256d ar1 = _mm256_loadu_pd(a_re + k + 4);
    __m256d ai1 = _mm256_loadu_pd(a_im + k + 4);
    __m256d br1 = _mm256_loadu_pd(b_re + k + 4);
    __m256d bi1 = _mm256_loadu_pd(b_im + k + 4);
    acc_re1 = _mm256_fmadd_pd(ar1, br1, acc_re1);
    acc_re1 = _mm256_fnmadd_pd(ai1, bi1, acc_re1);
    acc_im1 = _mm256_fmadd_pd(ar1, bi1, acc_im1);
    acc_im1 = _mm256_fmadd_pd(ai1, br1, acc_im1);
  }
  for (; k + 4 <= n; k += 4) {
    __m256d ar = _mm256_loadu_pd(a_re + k);
    __m256d ai = _mm256_loadu_pd(a_im + k);
    __m256d br = _mm256_loadu_pd(b_re + k);
    __m256d bi = _mm256_loadu_pd(b_im + k);
    acc_re0 = _mm256_fmadd_pd(ar, br, acc_re0);
    acc_re0 = _mm256_fnmadd_pd(ai, bi, acc_re0);
    acc_im0 = _mm256_fmadd_pd(ar, bi, acc_im0);
    acc_im0 = _mm256_fmadd_pd(ai, br, acc_im0);
  }

  acc_re0 = _mm256_add_pd(acc_re0, acc_re1);
  acc_im0 = _mm256_add_pd(acc_im0, acc_im1);

  alignas(32) double lane_re[4];
  alignas(32) double lane_im[4];
  _mm256_store_pd(lane_re, acc_re0);
  _mm256_store_pd(lane_im, acc_im0);
  double sum_re = (lane_re[0] + lane_re[1]) + (lane_re[2] + lane_re[3]);
  double sum_im = (lane_im[0] + lane_im[1]) + (lane_im[2] + lane_im[3]);

  for (; k < n; ++k) {
    sum_re += a_re[k] * b_re[k] - a_im[k] * b_im[k];
    sum_im += a_re[k] * b_im[k] + a_im[k] * b_re[k];
  }
  out_re = sum_re;
  out_im = sum_im;
}

void scaled_add(double w, const double* x, double* y, std::size_t n) {
  const __m256d wv = _mm256_set1_pd(w);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d yv = _mm256_loadu_pd(y + k);
    __m256d xv = _mm256_loadu_pd(x + k);
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(wv, xv, yv));
  }
  for (; k < n; ++k) y[k] += w * x[k];
}

void conj_scaled_add(double w, const double* x, double* y, std::size_t n) {
  // lanes are re,im,re,im; negating w in the imaginary lanes conjugates x
  const __m256d wv = _mm256_set_pd(-w, w, -w, w);
  const std::size_t doubles = 2 * n;
  std::size_t k = 0;
  for (; k + 4 <= doubles; k += 4) {
    __m256d yv = _mm256_loadu_pd(y + k);
    __m256d xv = _mm256_loadu_pd(x + k);
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(wv, xv, yv));
  }
  for (; k + 2 <= doubles; k += 2) {
    y[k] += w * x[k];
    y[k + 1] -= w * x[k + 1];
  }
}

}  // namespace msdg::kernels::avx2

#endif  // MSDG_HAVE_AVX2
