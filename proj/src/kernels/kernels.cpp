#include "msdg/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace msdg::kernels {

namespace scalar {

void complex_dot(const double* a_re, const double* a_im,
                 const double* b_re, const double* b_im,
                 std::size_t n, double& out_re, double& out_im) {
  double acc_re = 0.0;
  double acc_im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc_re += a_re[k] * b_re[k] - a_im[k] * b_im[k];
    acc_im += a_re[k] * b_im[k] + a_im[k] * b_re[k];
  }
  out_re = acc_re;
  out_im = acc_im;
}

void scaled_add(double w, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += w * x[k];
}

void conj_scaled_add(double w, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    y[2 * k] += w * x[2 * k];
    y[2 * k + 1] -= w * x[2 * k + 1];
  }
}

}  // namespace scalar

namespace {

bool cpu_has_avx2() {
#if defined(MSDG_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<int> g_active{-1};  // -1 = not yet selected

Impl resolve_auto() { return cpu_has_avx2() ? Impl::avx2 : Impl::scalar; }

Impl current() {
  int v = g_active.load(std::memory_order_acquire);
  if (v < 0) {
    Impl impl = resolve_auto();
    g_active.store(static_cast<int>(impl), std::memory_order_release);
    return impl;
  }
  return static_cast<Impl>(v);
}

}  // namespace

const char* name(Impl impl) {
  switch (impl) {
    case Impl::scalar: return "scalar";
    case Impl::avx2: return "avx2";
  }
  return "?";
}

bool available(Impl impl) {
  if (impl == Impl::scalar) return true;
  return cpu_has_avx2();
}

Impl active() { return current(); }

void select(Impl impl) {
  if (!available(impl))
    throw std::runtime_error(std::string("kernel implementation '") + name(impl) +
                             "' is not available on this CPU");
  g_active.store(static_cast<int>(impl), std::memory_order_release);
}

void select_auto() { g_active.store(static_cast<int>(resolve_auto()), std::memory_order_release); }

void select_by_name(const std::string& spec) {
  if (spec == "auto") {
    select_auto();
  } else if (spec == "scalar") {
    select(Impl::scalar);
  } else if (spec == "avx2") {
    select(Impl::avx2);
  } else {
    throw std::runtime_error("unknown kernel implementation '" + spec +
                             "' (expected auto, scalar or avx2)");
  }
}

void complex_dot(const double* a_re, const double* a_im,
                 const double* b_re, const double* b_im,
                 std::size_t n, double& out_re, double& out_im) {
#ifdef MSDG_HAVE_AVX2
  if (current() == Impl::avx2) {
    avx2::complex_dot(a_re, a_im, b_re, b_im, n, out_re, out_im);
    return;
  }
#endif
  scalar::complex_dot(a_re, a_im, b_re, b_im, n, out_re, out_im);
}

void scaled_add(double w, const double* x, double* y, std::size_t n) {
#ifdef MSDG_HAVE_AVX2
  if (current() == Impl::avx2) {
    avx2::scaled_add(w, x, y, n);
    return;
  }
#endif
  scalar::scaled_add(w, x, y, n);
}

void conj_scaled_add(double w, const double* x, double* y, std::size_t n) {
#ifdef MSDG_HAVE_AVX2
  if (current() == Impl::avx2) {
    avx2::conj_scaled_add(w, x, y, n);
    return;
  }
#endif
  scalar::conj_scaled_add(w, x, y, n);
}

}  // namespace msdg::kernels
