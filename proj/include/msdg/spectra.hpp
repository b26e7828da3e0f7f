#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "msdg/common.hpp"
#include "msdg/pattern.hpp"

namespace msdg {

/// Integer frequency lattice p in {0..p_max}, q in {-q_max..q_max-1}, raster
/// order (p outer, q inner). Angular frequencies are (2*pi*p, 2*pi*q) for
/// unit-square data. The reflected half plane is redundant because the
/// periodogram is symmetric under (p,q) -> (-p,-q).
class FrequencyGrid {
 public:
  explicit FrequencyGrid(int p_max = 16, int q_max = 16);

  int p_max() const { return p_max_; }
  int q_max() const { return q_max_; }
  std::size_t size() const { return static_cast<std::size_t>(p_max_ + 1) * (2 * q_max_); }

  struct Point {
    int p;
    int q;
  };

  Point at(std::size_t index) const;
  std::size_t index_of(int p, int q) const;
  bool contains(int p, int q) const;

  /// Index of the (0,0) lattice point (the DC term).
  std::size_t dc_index() const { return static_cast<std::size_t>(q_max_); }

  std::array<double, 2> omega(std::size_t index) const;

 private:
  int p_max_;
  int q_max_;
};

/// Per-type complex DFT values over a frequency grid.
class DftTable {
 public:
  DftTable(const FrequencyGrid& grid, std::size_t dim);

  const FrequencyGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }

  cdouble value(std::size_t type, std::size_t freq) const {
    return values_[type * grid_.size() + freq];
  }
  cdouble& value(std::size_t type, std::size_t freq) {
    return values_[type * grid_.size() + freq];
  }
  std::span<const cdouble> row(std::size_t type) const {
    return {values_.data() + type * grid_.size(), grid_.size()};
  }

 private:
  FrequencyGrid grid_;
  std::size_t dim_;
  std::vector<cdouble> values_;
};

/// One d x d complex Hermitian matrix per lattice frequency, stored as
/// contiguous column-major blocks. Raw periodograms are exactly Hermitian
/// with real non-negative diagonals; smoothing preserves both.
class SpectralMatrixField {
 public:
  SpectralMatrixField(const FrequencyGrid& grid, std::size_t dim, bool smoothed = false);

  const FrequencyGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  bool smoothed() const { return smoothed_; }
  void set_smoothed(bool s) { smoothed_ = s; }

  cdouble at(std::size_t freq, std::size_t i, std::size_t j) const {
    return data_[freq * dim_ * dim_ + j * dim_ + i];
  }
  cdouble& at(std::size_t freq, std::size_t i, std::size_t j) {
    return data_[freq * dim_ * dim_ + j * dim_ + i];
  }
  std::span<const cdouble> block(std::size_t freq) const {
    return {data_.data() + freq * dim_ * dim_, dim_ * dim_};
  }
  std::span<cdouble> block(std::size_t freq) {
    return {data_.data() + freq * dim_ * dim_, dim_ * dim_};
  }

 private:
  FrequencyGrid grid_;
  std::size_t dim_;
  bool smoothed_;
  std::vector<cdouble> data_;
};

/// DFT of the marked locations of every type at every lattice frequency:
/// F_i(p,q) = sum_k mark_k * exp(-2*pi*i*(p*x_k + q*y_k)) over points of
/// type i. Requires a pattern that has been rescaled to the unit square and
/// demeaned. The evaluation is accelerated with per-point phase tables and
/// the SIMD dot-product kernel but matches the direct sum to 1e-10.
DftTable compute_dft(const MarkedPointPattern& pattern, const FrequencyGrid& grid,
                     int threads = 1);

/// f_ii over the grid: |F_i|^2, real and non-negative.
std::vector<double> auto_periodogram(const DftTable& table, std::size_t i);

/// f_ij over the grid: F_i * conj(F_j).
std::vector<cdouble> cross_periodogram(const DftTable& table, std::size_t i, std::size_t j);

/// Stack auto-/cross-periodograms into the matrix field. The block at each
/// frequency is the rank-1 outer product F * F^H.
SpectralMatrixField assemble_periodogram_field(const DftTable& table);

}  // namespace msdg
