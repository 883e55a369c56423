#include <atomic>
#include <cstdlib>
#include <string>

#include "fricmatch/error.hpp"
#include "fricmatch/kernels/kernels.hpp"

namespace fricmatch::kernels {

#ifndef FRICMATCH_HAVE_AVX2
const KernelTable& avx2_table() { return scalar_table(); }
#endif

bool avx2_available() noexcept {
#if defined(FRICMATCH_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("FRICMATCH_KERNEL")) {
    std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && avx2_available()) return Backend::avx2;
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

const KernelTable& active() {
  return current().load(std::memory_order_relaxed) == Backend::avx2 ? avx2_table()
                                                                     : scalar_table();
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available()) {
    throw InvalidInput("avx2 kernels are not available on this machine");
  }
  current().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

}  // namespace fricmatch::kernels
