#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "msdg/common.hpp"
#include "msdg/spectra.hpp"

namespace msdg {

/// Per-frequency inversion policy. Matrices whose condition number exceeds
/// the threshold (or that are not positive definite) get one ridge retry;
/// frequencies that still fail are flagged and excluded from the statistics.
struct InversionPolicy {
  double condition_threshold = 1e12;
  double ridge = 1e-8;
  /// Max-entry tolerance for ||g*f - I||; violations flag the frequency.
  double residual_tolerance = 1e-8;
};

enum class FrequencyFlag : std::uint8_t {
  ok = 0,
  dc,                    ///< the (0,0) lattice point, excluded by construction
  singular,              ///< not invertible even after the ridge retry
  residual,              ///< inverse failed the g*f ~ I check
  nonpositive_diagonal,  ///< g_ii <= 0, rescaling undefined
};

/// Inverse spectral matrices g(w) = f(w)^-1 over the lattice, one flag per
/// frequency. The (0,0) point is always flagged dc and holds no matrix.
class InverseField {
 public:
  InverseField(const FrequencyGrid& grid, std::size_t dim);

  const FrequencyGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }

  cdouble at(std::size_t freq, std::size_t i, std::size_t j) const {
    return data_[freq * dim_ * dim_ + j * dim_ + i];
  }
  cdouble& at(std::size_t freq, std::size_t i, std::size_t j) {
    return data_[freq * dim_ * dim_ + j * dim_ + i];
  }

  FrequencyFlag flag(std::size_t freq) const { return flags_[freq]; }
  void set_flag(std::size_t freq, FrequencyFlag fl) { flags_[freq] = fl; }
  bool usable(std::size_t freq) const { return flags_[freq] == FrequencyFlag::ok; }

  std::size_t flagged_count() const;  ///< flagged for a reason other than dc
  std::size_t ridged_count() const { return ridged_; }
  void set_ridged_count(std::size_t n) { ridged_ = n; }

 private:
  FrequencyGrid grid_;
  std::size_t dim_;
  std::vector<cdouble> data_;
  std::vector<FrequencyFlag> flags_;
  std::size_t ridged_ = 0;
};

/// Invert one Hermitian spectral matrix. Uses the closed form for d=2 and a
/// self-adjoint eigendecomposition otherwise; applies the ridge-and-retry
/// policy. On failure returns a zero matrix and reports the reason in *flag.
Eigen::MatrixXcd invert_spectral_matrix(const Eigen::MatrixXcd& f, const InversionPolicy& policy,
                                        FrequencyFlag* flag = nullptr, bool* ridged = nullptr);

/// Invert the whole smoothed field (parallel over frequencies).
InverseField invert_field(const SpectralMatrixField& smoothed, const InversionPolicy& policy,
                          int threads = 1);

/// d_ij(w) = g_ij / sqrt(g_ii * g_jj); its modulus measures the strength of
/// the linear partial interrelation and lies in [0,1] for Hermitian positive
/// definite g.
cdouble rescaled_inverse(const Eigen::MatrixXcd& g, std::size_t i, std::size_t j);

/// Partial spectral coherence from the inverse matrix: -d_ij(w).
cdouble partial_coherence(const Eigen::MatrixXcd& g, std::size_t i, std::size_t j);

/// |f_ij|^2 / (f_ii * f_jj), the ordinary (unconditional) coherence.
double ordinary_coherence(const Eigen::MatrixXcd& f, std::size_t i, std::size_t j);

/// Partial cross-spectrum by explicit regression on the remaining d-2
/// components: f_ij - f_{i,rest} * f_{rest,rest}^-1 * f_{rest,j}. Requires
/// d >= 3. Solves with a pivoted LU, a code path independent of the
/// inverse-matrix route, so the two can check each other.
cdouble brillinger_partial_spectrum(const Eigen::MatrixXcd& f, std::size_t i, std::size_t j);

/// Partial coherence via the partialised 2x2 Schur complement:
/// f_ij|rest / sqrt(f_ii|rest * f_jj|rest). Equals the inverse route exactly
/// for Hermitian positive definite f.
cdouble brillinger_partial_coherence(const Eigen::MatrixXcd& f, std::size_t i, std::size_t j);

/// Rescaled-inverse values for every unordered pair at every usable
/// frequency. R_ij|rest is exposed as the negation of the stored d_ij.
class PartialDependenceField {
 public:
  PartialDependenceField(const FrequencyGrid& grid, std::size_t dim);

  const FrequencyGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t pair_count() const { return dim_ * (dim_ - 1) / 2; }
  std::size_t pair_index(std::size_t i, std::size_t j) const;

  /// d_ij at a frequency; conjugated for i > j.
  cdouble rescaled_inverse(std::size_t freq, std::size_t i, std::size_t j) const;
  cdouble partial_coherence(std::size_t freq, std::size_t i, std::size_t j) const {
    return -rescaled_inverse(freq, i, j);
  }
  double strength(std::size_t freq, std::size_t i, std::size_t j) const {
    return std::abs(rescaled_inverse(freq, i, j));
  }

  void set(std::size_t freq, std::size_t i, std::size_t j, cdouble value);

  FrequencyFlag flag(std::size_t freq) const { return flags_[freq]; }
  void set_flag(std::size_t freq, FrequencyFlag fl) { flags_[freq] = fl; }
  bool usable(std::size_t freq) const { return flags_[freq] == FrequencyFlag::ok; }
  std::size_t flagged_count() const;

 private:
  FrequencyGrid grid_;
  std::size_t dim_;
  std::vector<cdouble> values_;  // grid.size() x pair_count, pairs i<j row-major
  std::vector<FrequencyFlag> flags_;
};

/// Derive the pairwise field from the inverse field; frequencies where a
/// diagonal of g is non-positive get flagged.
PartialDependenceField partial_dependence(const InverseField& inverse);

/// Symmetric d x d matrix of sup_w |d_ij(w)| over usable frequencies;
/// diagonal fixed at 1.
struct EdgeStatisticMatrix {
  std::size_t dim = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t i, std::size_t j) const { return values[i * dim + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * dim + j]; }
};

EdgeStatisticMatrix edge_statistics(const PartialDependenceField& field);

/// Map a field block (column-major d x d) onto an Eigen matrix.
Eigen::Map<const Eigen::MatrixXcd> as_matrix(const SpectralMatrixField& field, std::size_t freq);

}  // namespace msdg
