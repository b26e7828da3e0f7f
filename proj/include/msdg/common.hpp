#pragma once

#include <complex>

namespace msdg {

using cdouble = std::complex<double>;

/// u * conj(v), written out so the diagonal of a periodogram comes out with
/// an exactly zero imaginary part.
inline cdouble mul_conj(cdouble u, cdouble v) {
  const double re = u.real() * v.real() + u.imag() * v.imag();
  const double im = u.imag() * v.real() - u.real() * v.imag();
  return {re, im};
}

}  // namespace msdg
