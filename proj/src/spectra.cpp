#include "msdg/spectra.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "msdg/kernels.hpp"
#include "msdg/parallel.hpp"

namespace msdg {

FrequencyGrid::FrequencyGrid(int p_max, int q_max) : p_max_(p_max), q_max_(q_max) {
  if (p_max < 0) throw std::runtime_error("frequency grid needs p_max >= 0");
  if (q_max < 1) throw std::runtime_error("frequency grid needs q_max >= 1");
}

FrequencyGrid::Point FrequencyGrid::at(std::size_t index) const {
  const int row = static_cast<int>(index / (2 * q_max_));
  const int col = static_cast<int>(index % (2 * q_max_));
  return {row, col - q_max_};
}

std::size_t FrequencyGrid::index_of(int p, int q) const {
  if (!contains(p, q)) throw std::runtime_error("frequency (p,q) outside the lattice");
  return static_cast<std::size_t>(p) * (2 * q_max_) + static_cast<std::size_t>(q + q_max_);
}

bool FrequencyGrid::contains(int p, int q) const {
  return p >= 0 && p <= p_max_ && q >= -q_max_ && q <= q_max_ - 1;
}

std::array<double, 2> FrequencyGrid::omega(std::size_t index) const {
  const Point f = at(index);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return {two_pi * f.p, two_pi * f.q};
}

DftTable::DftTable(const FrequencyGrid& grid, std::size_t dim)
    : grid_(grid), dim_(dim), values_(grid.size() * dim) {}

SpectralMatrixField::SpectralMatrixField(const FrequencyGrid& grid, std::size_t dim, bool smoothed)
    : grid_(grid), dim_(dim), smoothed_(smoothed), data_(grid.size() * dim * dim) {}

namespace {

// Split re/im phase tables exp(-2*pi*i*f*coord) for every point and every
// frequency index value f. The marks are folded into the p-tables so the
// per-frequency reduction is a plain complex dot product.
struct PhaseTables {
  std::size_t n = 0;
  std::vector<double> p_re, p_im;  // (p_max+1) rows of n
  std::vector<double> q_re, q_im;  // 2*q_max rows of n
};

PhaseTables build_phase_tables(const std::vector<const MarkedPoint*>& pts,
                               const FrequencyGrid& grid) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  PhaseTables t;
  t.n = pts.size();
  const std::size_t p_rows = static_cast<std::size_t>(grid.p_max()) + 1;
  const std::size_t q_rows = static_cast<std::size_t>(2 * grid.q_max());
  t.p_re.resize(p_rows * t.n);
  t.p_im.resize(p_rows * t.n);
  t.q_re.resize(q_rows * t.n);
  t.q_im.resize(q_rows * t.n);
  for (std::size_t k = 0; k < t.n; ++k) {
    const double x = pts[k]->x;
    const double y = pts[k]->y;
    const double m = pts[k]->mark;
    for (int p = 0; p <= grid.p_max(); ++p) {
      const double angle = -two_pi * p * x;
      const std::size_t off = static_cast<std::size_t>(p) * t.n + k;
      t.p_re[off] = m * std::cos(angle);
      t.p_im[off] = m * std::sin(angle);
    }
    for (int q = -grid.q_max(); q < grid.q_max(); ++q) {
      const double angle = -two_pi * q * y;
      const std::size_t off = static_cast<std::size_t>(q + grid.q_max()) * t.n + k;
      t.q_re[off] = std::cos(angle);
      t.q_im[off] = std::sin(angle);
    }
  }
  return t;
}

}  // namespace

DftTable compute_dft(const MarkedPointPattern& pattern, const FrequencyGrid& grid, int threads) {
  if (!pattern.on_unit_square)
    throw std::runtime_error("pattern is not on the unit square; run rescale_to_unit_square first");
  if (!pattern.marks_demeaned)
    throw std::runtime_error("marks are not demeaned; run demean_marks first");

  const std::size_t d = pattern.dim();
  DftTable table(grid, d);

  std::vector<std::vector<const MarkedPoint*>> by_type(d);
  for (std::size_t i = 0; i < d; ++i) by_type[i].reserve(pattern.types[i].count);
  for (const auto& pt : pattern.points) by_type[pt.type_id].push_back(&pt);

  parallel_for(d, threads, [&](std::size_t i) {
    const PhaseTables t = build_phase_tables(by_type[i], grid);
    for (int p = 0; p <= grid.p_max(); ++p) {
      const double* pr = t.p_re.data() + static_cast<std::size_t>(p) * t.n;
      const double* pi = t.p_im.data() + static_cast<std::size_t>(p) * t.n;
      for (int q = -grid.q_max(); q < grid.q_max(); ++q) {
        const std::size_t qrow = static_cast<std::size_t>(q + grid.q_max());
        const double* qr = t.q_re.data() + qrow * t.n;
        const double* qi = t.q_im.data() + qrow * t.n;
        double re = 0.0, im = 0.0;
        kernels::complex_dot(pr, pi, qr, qi, t.n, re, im);
        table.value(i, grid.index_of(p, q)) = {re, im};
      }
    }
  });
  return table;
}

std::vector<double> auto_periodogram(const DftTable& table, std::size_t i) {
  if (i >= table.dim()) throw std::runtime_error("auto_periodogram: unknown type id");
  std::vector<double> out(table.grid().size());
  for (std::size_t f = 0; f < out.size(); ++f) out[f] = mul_conj(table.value(i, f), table.value(i, f)).real();
  return out;
}

std::vector<cdouble> cross_periodogram(const DftTable& table, std::size_t i, std::size_t j) {
  if (i >= table.dim() || j >= table.dim())
    throw std::runtime_error("cross_periodogram: unknown type id");
  std::vector<cdouble> out(table.grid().size());
  for (std::size_t f = 0; f < out.size(); ++f) out[f] = mul_conj(table.value(i, f), table.value(j, f));
  return out;
}

SpectralMatrixField assemble_periodogram_field(const DftTable& table) {
  const std::size_t d = table.dim();
  SpectralMatrixField field(table.grid(), d, /*smoothed=*/false);
  for (std::size_t f = 0; f < table.grid().size(); ++f) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i <= j; ++i) {
        const cdouble v = mul_conj(table.value(i, f), table.value(j, f));
        field.at(f, i, j) = v;
        if (i != j) field.at(f, j, i) = std::conj(v);
      }
    }
  }
  return field;
}

}  // namespace msdg
