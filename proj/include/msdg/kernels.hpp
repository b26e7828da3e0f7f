#pragma once

#include <cstddef>
#include <string>

namespace msdg::kernels {

/// Inner-loop kernel implementations. `scalar` is the reference; wider
/// variants are selected at runtime when the CPU supports them and must
/// agree with the reference (see tests/test_kernels.cpp).
enum class Impl { scalar, avx2 };

const char* name(Impl impl);
bool available(Impl impl);

/// Currently active implementation.
Impl active();

/// Force a specific implementation (throws if unavailable on this CPU).
void select(Impl impl);

/// Pick the widest available implementation. Called lazily on first use.
void select_auto();

/// Parse "auto" / "scalar" / "avx2" (CLI --simd flag).
void select_by_name(const std::string& spec);

/// out = sum_k a_k * b_k over complex arrays in split re/im layout.
void complex_dot(const double* a_re, const double* a_im,
                 const double* b_re, const double* b_im,
                 std::size_t n, double& out_re, double& out_im);

/// y_k += w * x_k over n doubles.
void scaled_add(double w, const double* x, double* y, std::size_t n);

/// y_k += w * conj(x_k) over n interleaved complex values (2n doubles).
void conj_scaled_add(double w, const double* x, double* y, std::size_t n);

namespace scalar {
void complex_dot(const double* a_re, const double* a_im,
                 const double* b_re, const double* b_im,
                 std::size_t n, double& out_re, double& out_im);
void scaled_add(double w, const double* x, double* y, std::size_t n);
void conj_scaled_add(double w, const double* x, double* y, std::size_t n);
}  // namespace scalar

#ifdef MSDG_HAVE_AVX2
namespace avx2 {
void complex_dot(const double* a_re, const double* a_im,
                 const double* b_re, const double* b_im,
                 std::size_t n, double& out_re, double& out_im);
void scaled_add(double w, const double* x, double* y, std::size_t n);
void conj_scaled_add(double w, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

}  // namespace msdg::kernels
