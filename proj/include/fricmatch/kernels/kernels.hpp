#pragma once

#include <cstddef>
#include <string_view>

namespace fricmatch::kernels {

// All sweeps work on n cells of a periodic grid. Weights `w` are meeting-rate
// weights relative to lambda_tot (mean 1), `ell` is the agent-type density and
// `r` is mu / lambda_tot.
//
// For every agent cell i the firms are visited in rings of increasing distance:
// ring 0 is cell i itself, ring k >= 1 is the pair {i+k, i-k} (a single cell
// when k = n/2). Along the way B accumulates the weight of strictly better
// firms, so ring k spans B in [B_lo, B_hi] with B_hi - B_lo = ring weight / n.

/// q[j] = (1/n) sum_i ell[i] / ((r + B_lo) (r + B_hi)) over the ring of i that holds j.
using ShareSweepFn = void (*)(const double* ell, const double* w, std::size_t n, double r,
                              double* q);

/// (1/n^2) sum_i sum_k f[k] ell[i] (ring weight) / ((r + B_lo) (r + B_hi)),
/// with f[k] the surplus on ring k (n/2 + 1 entries).
using SurplusSweepFn = double (*)(const double* ell, const double* w, std::size_t n, double r,
                                  const double* f);

/// out[j] = (1/n) sum_i x[i] kernel[offset(i, j)], kernel indexed by circular
/// cell offset 0..n/2.
using ConvolveFn = void (*)(const double* x, const double* kernel, std::size_t n, double* out);

struct KernelTable {
  ShareSweepFn share_sweep;
  SurplusSweepFn surplus_sweep;
  ConvolveFn circular_convolve;
};

enum class Backend { scalar, avx2 };

const KernelTable& scalar_table();
/// Only valid when avx2_available().
const KernelTable& avx2_table();

bool avx2_available() noexcept;

/// Table for the active backend. The initial choice is avx2 when the CPU has
/// AVX2 and FMA, overridable with FRICMATCH_KERNEL=scalar|avx2.
const KernelTable& active();
Backend active_backend() noexcept;
/// Throws InvalidInput when the backend is not available on this machine.
void set_backend(Backend b);
std::string_view backend_name(Backend b) noexcept;

}  // namespace fricmatch::kernels
