#include <vector>

#include "fricmatch/kernels/kernels.hpp"

namespace fricmatch::kernels {
namespace {

void share_sweep(const double* ell, const double* w, std::size_t n, double r, double* q) {
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::size_t half = n / 2;
  std::vector<double> b(n, 0.0);
  std::vector<double> acc(2 * n, 0.0);
  std::vector<double> w2(2 * n);
  for (std::size_t i = 0; i < n; ++i) w2[i] = w2[i + n] = w[i];

  for (std::size_t k = 0; k <= half; ++k) {
    const bool single = k == 0 || (n % 2 == 0 && k == half);
    const double* wp = w2.data() + k;
    const double* wm = w2.data() + n - k;
    double* ap = acc.data() + k;
    double* am = acc.data() + n - k;
    for (std::size_t i = 0; i < n; ++i) {
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
  std::vector<double> b(n, 0.0);
  std::vector<double> w2(2 * n);
  for (std::size_t i = 0; i < n; ++i) w2[i] = w2[i + n] = w[i];

  double total = 0.0;
  for (std::size_t k = 0; k <= half; ++k) {
    const bool single = k == 0 || (n % 2 == 0 && k == half);
    const double* wp = w2.data() + k;
    const double* wm = w2.data() + n - k;
    double ring = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
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
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t d = i > j ? i - j : j - i;
      if (d > n - d) d = n - d;
      sum += x[i] * kernel[d];
    }
    out[j] = sum * inv_n;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{share_sweep, surplus_sweep, circular_convolve};
  return table;
}

}  // namespace fricmatch::kernels
