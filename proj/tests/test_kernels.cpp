#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include "msdg/kernels.hpp"

namespace kn = msdg::kernels;

namespace {

struct Arrays {
  std::vector<double> a_re, a_im, b_re, b_im;
};

Arrays random_arrays(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Arrays arr;
  for (std::size_t k = 0; k < n; ++k) {
    arr.a_re.push_back(gauss(rng));
    arr.a_im.push_back(gauss(rng));
    arr.b_re.push_back(gauss(rng));
    arr.b_im.push_back(gauss(rng));
  }
  return arr;
}

}  // namespace

TEST_SUITE_BEGIN("kernels");

TEST_CASE("scalar complex_dot matches std::complex accumulation") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {0u, 1u, 5u, 64u, 257u}) {
    const Arrays arr = random_arrays(rng, n);
    std::complex<double> expected = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      expected += std::complex<double>(arr.a_re[k], arr.a_im[k]) *
                  std::complex<double>(arr.b_re[k], arr.b_im[k]);
    double re = -1.0, im = -1.0;
    kn::scalar::complex_dot(arr.a_re.data(), arr.a_im.data(), arr.b_re.data(), arr.b_im.data(),
                            n, re, im);
    CHECK(std::abs(re - expected.real()) <= 1e-12 * (1.0 + std::abs(expected.real())));
    CHECK(std::abs(im - expected.imag()) <= 1e-12 * (1.0 + std::abs(expected.imag())));
  }
}

TEST_CASE("scalar conj_scaled_add matches std::complex arithmetic") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = 33;
  std::vector<std::complex<double>> x(n), y(n), expected(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = {gauss(rng), gauss(rng)};
    y[k] = {gauss(rng), gauss(rng)};
    expected[k] = y[k] + 0.75 * std::conj(x[k]);
  }
  kn::scalar::conj_scaled_add(0.75, reinterpret_cast<const double*>(x.data()),
                              reinterpret_cast<double*>(y.data()), n);
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(y[k] - expected[k]) <= 1e-15);
}

TEST_CASE("avx2 variants agree with the scalar reference") {
  if (!kn::available(kn::Impl::avx2)) return;  // nothing to compare on this CPU
#ifdef MSDG_HAVE_AVX2
  std::mt19937_64 rng(3);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 12u, 31u, 100u, 1001u}) {
    const Arrays arr = random_arrays(rng, n);

    double s_re = 0.0, s_im = 0.0, v_re = 0.0, v_im = 0.0;
    kn::scalar::complex_dot(arr.a_re.data(), arr.a_im.data(), arr.b_re.data(), arr.b_im.data(),
                            n, s_re, s_im);
    kn::avx2::complex_dot(arr.a_re.data(), arr.a_im.data(), arr.b_re.data(), arr.b_im.data(), n,
                          v_re, v_im);
    double scale = 1.0;
    for (std::size_t k = 0; k < n; ++k)
      scale += std::abs(std::complex<double>(arr.a_re[k], arr.a_im[k])) *
               std::abs(std::complex<double>(arr.b_re[k], arr.b_im[k]));
    CHECK(std::abs(s_re - v_re) <= 1e-13 * scale);
    CHECK(std::abs(s_im - v_im) <= 1e-13 * scale);

    std::vector<double> y_s(2 * n, 0.25), y_v(2 * n, 0.25);
    std::vector<double> x(arr.a_re);
    x.insert(x.end(), arr.a_im.begin(), arr.a_im.end());
    kn::scalar::scaled_add(1.5, x.data(), y_s.data(), 2 * n);
    kn::avx2::scaled_add(1.5, x.data(), y_v.data(), 2 * n);
    for (std::size_t k = 0; k < 2 * n; ++k) CHECK(std::abs(y_s[k] - y_v[k]) <= 1e-14);

    std::vector<double> c_s(2 * n, -0.5), c_v(2 * n, -0.5);
    kn::scalar::conj_scaled_add(0.8, x.data(), c_s.data(), n);
    kn::avx2::conj_scaled_add(0.8, x.data(), c_v.data(), n);
    for (std::size_t k = 0; k < 2 * n; ++k) CHECK(std::abs(c_s[k] - c_v[k]) <= 1e-14);
  }
#endif
}

TEST_CASE("runtime selection") {
  const kn::Impl before = kn::active();

  kn::select(kn::Impl::scalar);
  CHECK(kn::active() == kn::Impl::scalar);
  CHECK(std::string(kn::name(kn::active())) == "scalar");

  if (kn::available(kn::Impl::avx2)) {
    kn::select_by_name("avx2");
    CHECK(kn::active() == kn::Impl::avx2);
  } else {
    CHECK_THROWS(kn::select(kn::Impl::avx2));
  }

  CHECK_THROWS(kn::select_by_name("sse9"));
  kn::select_auto();
  CHECK(kn::available(kn::active()));
  kn::select(before);
}

TEST_SUITE_END();
