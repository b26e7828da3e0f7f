#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "msdg/common.hpp"
#include "msdg/spectra.hpp"

namespace msdg {

enum class SmoothingKernel { uniform, triangular };

SmoothingKernel smoothing_kernel_from_name(const std::string& name);
const char* smoothing_kernel_name(SmoothingKernel kernel);

/// Kernel smoother configuration. The raw periodogram matrices are rank one,
/// so the inverse-based statistics need a neighbourhood average with at least
/// d contributing frequencies: (2h+1)^2 >= d for interior lattice points.
struct SmootherSpec {
  SmoothingKernel kernel = SmoothingKernel::uniform;
  int half_width = 2;
  /// Diagonal ridge, as a fraction of the mean diagonal, applied to every
  /// smoothed matrix as a numerical floor.
  double ridge = 1e-8;
};

/// Smallest half width h with (2h+1)^2 >= dim.
int minimal_admissible_half_width(std::size_t dim);

/// Validate a spec against the pattern dimension. Appends a warning when the
/// half width is below the admissible minimum and no ridge is configured.
void validate_smoother(const SmootherSpec& spec, std::size_t dim,
                       std::vector<std::string>* warnings = nullptr);

/// matrix += eps * mean(diagonal) * identity, in place. Returns false (and
/// changes nothing) when the diagonal is all zero and eps > 0.
bool regularize(std::span<cdouble> block, std::size_t dim, double eps);

struct SmoothingReport {
  std::size_t ridge_skipped = 0;  ///< zero-diagonal blocks the ridge left alone
};

/// Kernel-weighted average of the raw field over the (2h+1)x(2h+1) index
/// neighbourhood of every lattice point, truncated and renormalised at the
/// lattice boundary. Neighbourhood cells with p < 0 are filled through the
/// periodogram symmetry f(-p,-q) = conj(f(p,q)) instead of being truncated;
/// the outer boundaries (p_max, +-q_max) have no such identity and truncate.
/// The (0,0) lattice point never contributes to any average; where the
/// admissible neighbourhood is empty the raw block is copied through.
/// Neighbour blocks accumulate in raster order, so the result is bitwise
/// independent of the worker count.
SpectralMatrixField smooth_field(const SpectralMatrixField& raw, const SmootherSpec& spec,
                                 int threads = 1, SmoothingReport* report = nullptr);

}  // namespace msdg
