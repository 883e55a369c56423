// Compiled with -mavx2 -mfma; only reached through the dispatcher after a CPU check.
#include <immintrin.h>

#include <vector>

#include "fricmatch/kernels/kernels.hpp"

namespace fricmatch::kernels {
namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void share_sweep(const double* ell, const double* w, std::size_t n, double r, double* q) {
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::size_t half = n / 2;
  const std::size_t nv = n - n % 4;
  std::vector<double> b(n, 0.0);
  std::vector<double> acc(2 * n, 0.0);
  std::vector<double> w2(2 * n);
  for (std::size_t i = 0; i < n; ++i) w2[i] = w2[i + n] = w[i];

  const __m256d vr = _mm256_set1_pd(r);
  const __m256d vinv = _mm256_set1_pd(inv_n);
  for (std::size_t k = 0; k <= half; ++k) {
    const bool single = k == 0 || (n % 2 == 0 && k == half);
    const double* wp = w2.data() + k;
    const double* wm = w2.data() + n - k;
    double* ap = acc.data() + k;
    double* am = acc.data() + n - k;
    std::size_t i = 0;
    for (; i < nv; i += 4) {
      __m256d lo = _mm256_loadu_pd(b.data() + i);
      __m256d inc = _mm256_loadu_pd(wp + i);
      if (!single) inc = _mm256_add_pd(inc, _mm256_loadu_pd(wm + i));
      __m256d hi = _mm256_fmadd_pd(inc, vinv, lo);
      _mm256_storeu_pd(b.data() + i, hi);
      __m256d den = _mm256_mul_pd(_mm256_add_pd(vr, lo), _mm256_add_pd(vr, hi));
      __m256d v = _mm256_div_pd(_mm256_loadu_pd(ell + i), den);
      _mm256_storeu_pd(ap + i, _mm256_add_pd(_mm256_loadu_pd(ap + i), v));
      if (!single) _mm256_storeu_pd(am + i, _mm256_add_pd(_mm256_loadu_pd(am + i), v));
    }
    for (; i < n; ++i) {
      double lo = b[i];
      double inc = single ? wp[i] : wp[i] + wm[i];
      double hi = lo + inc * inv_n;
      b[i] = hi;
      double v = ell[i] / ((r + lo) * (r + hi));
      ap[i] += v;
      if (!single) am[i] += v;
    }
  }
  for (std::size_t j = 0; j < n; ++j) q[j] = (acc[j] + acc[j + n]) * inv_n;
}

double surplus_sweep(const double* ell, const double* w, std::size_t n, double r,
                     const double* f) {
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::size_t half = n / 2;
  const std::size_t nv = n - n % 4;
  std::vector<double> b(n, 0.0);
  std::vector<double> w2(2 * n);
  for (std::size_t i = 0; i < n; ++i) w2[i] = w2[i + n] = w[i];

  const __m256d vr = _mm256_set1_pd(r);
  const __m256d vinv = _mm256_set1_pd(inv_n);
  double total = 0.0;
  for (std::size_t k = 0; k <= half; ++k) {
    const bool single = k == 0 || (n % 2 == 0 && k == half);
    const double* wp = w2.data() + k;
    const double* wm = w2.data() + n - k;
    __m256d vring = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i < nv; i += 4) {
      __m256d lo = _mm256_loadu_pd(b.data() + i);
      __m256d inc = _mm256_loadu_pd(wp + i);
      if (!single) inc = _mm256_add_pd(inc, _mm256_loadu_pd(wm + i));
      __m256d hi = _mm256_fmadd_pd(inc, vinv, lo);
      _mm256_storeu_pd(b.data() + i, hi);
      __m256d den = _mm256_mul_pd(_mm256_add_pd(vr, lo), _mm256_add_pd(vr, hi));
      __m256d num = _mm256_mul_pd(_mm256_loadu_pd(ell + i), inc);
      vring = _mm256_add_pd(vring, _mm256_div_pd(num, den));
    }
    double ring = hsum(vring);
    for (; i < n; ++i) {
      double lo = b[i];
      double inc = single ? wp[i] : wp[i] + wm[i];
      double hi = lo + inc * inv_n;
      b[i] = hi;
      ring += ell[i] * inc / ((r + lo) * (r + hi));
    }
    total += f[k] * ring;
  }
  return total * inv_n * inv_n;
}

void circular_convolve(const double* x, const double* kernel, std::size_t n, double* out) {
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::size_t nv = n - n % 4;
  // kfull[m] is the weight of x[j - m]; x2 holds two periods so j - m + n is in range
  std::vector<double> kfull(n), x2(2 * n), acc(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) kfull[m] = kernel[m <= n - m ? m : n - m];
  for (std::size_t i = 0; i < n; ++i) x2[i] = x2[i + n] = x[i];

  for (std::size_t m = 0; m < n; ++m) {
    const __m256d km = _mm256_set1_pd(kfull[m]);
    const double* src = x2.data() + n - m;
    std::size_t j = 0;
    for (; j < nv; j += 4) {
      __m256d a = _mm256_loadu_pd(acc.data() + j);
      _mm256_storeu_pd(acc.data() + j, _mm256_fmadd_pd(km, _mm256_loadu_pd(src + j), a));
    }
    for (; j < n; ++j) acc[j] += kfull[m] * src[j];
  }
  for (std::size_t j = 0; j < n; ++j) out[j] = acc[j] * inv_n;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{share_sweep, surplus_sweep, circular_convolve};
  return table;
}

}  // namespace fricmatch::kernels
