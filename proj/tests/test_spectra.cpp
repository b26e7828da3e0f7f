#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "msdg/spectra.hpp"
#include "oracles.hpp"

using namespace msdg;

namespace {

MarkedPointPattern prepared(const MarkedPointPattern& p) {
  return demean_marks(rescale_to_unit_square(p));
}

}  // namespace

TEST_SUITE_BEGIN("spectra");

TEST_CASE("frequency grid layout") {
  const FrequencyGrid grid(16, 16);
  CHECK(grid.size() == 544);
  CHECK(grid.at(grid.dc_index()).p == 0);
  CHECK(grid.at(grid.dc_index()).q == 0);

  std::size_t dc_hits = 0;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto pq = grid.at(f);
    CHECK(grid.index_of(pq.p, pq.q) == f);
    if (pq.p == 0 && pq.q == 0) ++dc_hits;
  }
  CHECK(dc_hits == 1);

  CHECK(grid.contains(16, 15));
  CHECK(!grid.contains(17, 0));
  CHECK(!grid.contains(0, 16));
  CHECK(!grid.contains(-1, 0));
  CHECK(grid.contains(0, -16));

  const auto w = grid.omega(grid.index_of(2, -3));
  CHECK(w[0] == doctest::Approx(2.0 * oracles::kTwoPi));
  CHECK(w[1] == doctest::Approx(-3.0 * oracles::kTwoPi));

  CHECK_THROWS_AS(FrequencyGrid(-1, 16), std::runtime_error);
  CHECK_THROWS_AS(FrequencyGrid(16, 0), std::runtime_error);
  CHECK_THROWS_AS(grid.index_of(0, 16), std::runtime_error);
}

TEST_CASE("compute_dft rejects unprepared patterns") {
  std::mt19937_64 rng(2);
  const auto p = oracles::random_pattern(rng, 2, 20);
  const FrequencyGrid grid(4, 4);
  CHECK_THROWS_WITH_AS(compute_dft(p, grid), doctest::Contains("rescale"), std::runtime_error);
  const auto r = rescale_to_unit_square(p);
  CHECK_THROWS_WITH_AS(compute_dft(r, grid), doctest::Contains("demean"), std::runtime_error);
  CHECK_NOTHROW(compute_dft(demean_marks(r), grid));
}

TEST_CASE("dft of a single point is identically zero") {
  auto p = prepared(oracles::build_pattern({{0.3, 0.7, 0, 5.0}}, Window::unit_square(), 1));
  const FrequencyGrid grid(8, 8);
  const DftTable table = compute_dft(p, grid);
  for (std::size_t f = 0; f < grid.size(); ++f) CHECK(std::abs(table.value(0, f)) == 0.0);
}

TEST_CASE("two-point dft, hand evaluated") {
  // marks +1 at (0,0) and -1 at (0.5,0): F(1,0) = 1 - exp(-pi i) = 2
  auto p = prepared(oracles::build_pattern({{0.0, 0.0, 0, 1.0}, {0.5, 0.0, 0, -1.0}},
                                           Window::unit_square(), 1));
  const FrequencyGrid grid(4, 4);
  const DftTable table = compute_dft(p, grid);
  const cdouble f10 = table.value(0, grid.index_of(1, 0));
  CHECK(std::abs(f10 - cdouble(2.0, 0.0)) <= 1e-12);
}

TEST_CASE("dc term vanishes after demeaning") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 5; ++rep) {
    const auto p = prepared(oracles::random_pattern(rng, 3, 45));
    const FrequencyGrid grid(6, 6);
    const DftTable table = compute_dft(p, grid);
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const double scale = oracles::mark_abs_sum(p, static_cast<int>(i));
      CHECK(std::abs(table.value(i, grid.dc_index())) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("dft equals the direct sum oracle") {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 4; ++rep) {
    const auto p = prepared(oracles::random_pattern(rng, 1 + rep % 3, 10 + 13 * rep));
    const FrequencyGrid grid(5, 5);
    const DftTable table = compute_dft(p, grid, 2);
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const double scale = oracles::mark_abs_sum(p, static_cast<int>(i)) + 1e-300;
      for (std::size_t f = 0; f < grid.size(); ++f) {
        const auto pq = grid.at(f);
        const cdouble expected = oracles::direct_dft(p, static_cast<int>(i), pq.p, pq.q);
        CHECK(std::abs(table.value(i, f) - expected) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("auto periodogram") {
  const FrequencyGrid grid(2, 2);
  DftTable table(grid, 1);
  SUBCASE("squared modulus") {
    table.value(0, grid.index_of(1, 1)) = {3.0, 4.0};
    const auto f = auto_periodogram(table, 0);
    CHECK(f[grid.index_of(1, 1)] == 25.0);
  }
  SUBCASE("zero table") {
    const auto f = auto_periodogram(table, 0);
    for (double v : f) CHECK(v == 0.0);
  }
  SUBCASE("unknown type") { CHECK_THROWS_AS(auto_periodogram(table, 1), std::runtime_error); }
}

TEST_CASE("periodogram is symmetric under (p,q) -> (-p,-q)") {
  // checked against the direct sum on an extended frequency set
  std::mt19937_64 rng(8);
  const auto p = prepared(oracles::random_pattern(rng, 1, 25));
  for (int pp = 0; pp <= 3; ++pp) {
    for (int q = -3; q <= 3; ++q) {
      const cdouble fwd = oracles::direct_dft(p, 0, pp, q);
      const cdouble rev = oracles::direct_dft(p, 0, -pp, -q);
      CHECK(std::abs(std::norm(fwd) - std::norm(rev)) <=
            1e-10 * (1.0 + std::norm(fwd)));
    }
  }
}

TEST_CASE("cross periodogram") {
  const FrequencyGrid grid(2, 2);
  DftTable table(grid, 2);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t f = 0; f < grid.size(); ++f) table.value(i, f) = {gauss(rng), gauss(rng)};

  SUBCASE("matches auto periodogram exactly on the diagonal") {
    const auto cross = cross_periodogram(table, 0, 0);
    const auto autop = auto_periodogram(table, 0);
    for (std::size_t f = 0; f < grid.size(); ++f) {
      CHECK(cross[f].real() == autop[f]);
      CHECK(cross[f].imag() == 0.0);
    }
  }
  SUBCASE("conjugation identity, exact") {
    const auto ij = cross_periodogram(table, 0, 1);
    const auto ji = cross_periodogram(table, 1, 0);
    for (std::size_t f = 0; f < grid.size(); ++f) {
      CHECK(ij[f].real() == ji[f].real());
      CHECK(ij[f].imag() == -ji[f].imag());
    }
  }
  SUBCASE("hand multiplication") {
    table.value(0, 0) = {1.0, 1.0};
    table.value(1, 0) = {2.0, 0.0};
    const auto ij = cross_periodogram(table, 0, 1);
    CHECK(ij[0] == cdouble(2.0, 2.0));
  }
  SUBCASE("unknown type") { CHECK_THROWS_AS(cross_periodogram(table, 0, 2), std::runtime_error); }
}

TEST_CASE("assembled field is the rank-1 outer product") {
  const FrequencyGrid grid(2, 2);
  DftTable table(grid, 2);
  for (std::size_t f = 0; f < grid.size(); ++f) {
    table.value(0, f) = {1.0, 0.0};
    table.value(1, f) = {0.0, 1.0};
  }
  const SpectralMatrixField field = assemble_periodogram_field(table);
  CHECK(!field.smoothed());
  const std::size_t f0 = grid.index_of(1, 1);
  CHECK(field.at(f0, 0, 0) == cdouble(1.0, 0.0));
  CHECK(field.at(f0, 0, 1) == cdouble(0.0, -1.0));
  CHECK(field.at(f0, 1, 0) == cdouble(0.0, 1.0));
  CHECK(field.at(f0, 1, 1) == cdouble(1.0, 0.0));
}

TEST_CASE("assembled field invariants on random patterns") {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t d = 2 + rep % 2;
    const auto p = prepared(oracles::random_pattern(rng, d, 30 + 10 * rep));
    const FrequencyGrid grid(4, 4);
    const SpectralMatrixField field = assemble_periodogram_field(compute_dft(p, grid));
    for (std::size_t f = 0; f < grid.size(); ++f) {
      for (std::size_t i = 0; i < d; ++i) {
        CHECK(field.at(f, i, i).imag() == 0.0);
        CHECK(field.at(f, i, i).real() >= 0.0);
        for (std::size_t j = 0; j < d; ++j) {
          CHECK(field.at(f, i, j).real() == field.at(f, j, i).real());
          CHECK(field.at(f, i, j).imag() == -field.at(f, j, i).imag());
        }
      }
      if (d == 2) {
        // rank 1: determinant vanishes against the Hadamard scale
        const cdouble det =
            field.at(f, 0, 0) * field.at(f, 1, 1) - field.at(f, 0, 1) * field.at(f, 1, 0);
        const double scale =
            field.at(f, 0, 0).real() * field.at(f, 1, 1).real() + 1e-300;
        CHECK(std::abs(det) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("translation multiplies the dft by a unit factor only") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> coord(0.0, 5.0);
  std::normal_distribution<double> mark(0.0, 1.0);
  std::vector<MarkedPoint> pts;
  for (int k = 0; k < 40; ++k) pts.push_back({coord(rng), coord(rng), k % 2, mark(rng)});
  const Window window{0.0, 10.0, 0.0, 10.0};  // fixed, user supplied
  const auto base = prepared(oracles::build_pattern(pts, window, 2));

  std::vector<MarkedPoint> shifted = pts;
  for (auto& pt : shifted) {
    pt.x += 2.0;
    pt.y += 3.5;
  }
  const auto moved = prepared(oracles::build_pattern(shifted, window, 2));

  const FrequencyGrid grid(6, 6);
  const DftTable ta = compute_dft(base, grid);
  const DftTable tb = compute_dft(moved, grid);
  for (std::size_t i = 0; i < 2; ++i) {
    const double scale = oracles::mark_abs_sum(base, static_cast<int>(i)) + 1e-300;
    for (std::size_t f = 0; f < grid.size(); ++f) {
      CHECK(std::abs(std::abs(ta.value(i, f)) - std::abs(tb.value(i, f))) <= 1e-10 * scale);
    }
  }
  // the common phase factor cancels entirely in the periodogram matrices
  const auto fa = assemble_periodogram_field(ta);
  const auto fb = assemble_periodogram_field(tb);
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const double scale = fa.at(f, 0, 0).real() + fa.at(f, 1, 1).real() + 1e-300;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(std::abs(fa.at(f, i, j) - fb.at(f, i, j)) <= 1e-10 * scale);
  }
}

TEST_SUITE_END();
