#include "msdg/smoothing.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "msdg/kernels.hpp"
#include "msdg/parallel.hpp"

namespace msdg {

SmoothingKernel smoothing_kernel_from_name(const std::string& name) {
  if (name == "uniform") return SmoothingKernel::uniform;
  if (name == "triangular") return SmoothingKernel::triangular;
  throw std::runtime_error("unknown smoothing kernel '" + name +
                           "' (expected uniform or triangular)");
}

const char* smoothing_kernel_name(SmoothingKernel kernel) {
  return kernel == SmoothingKernel::uniform ? "uniform" : "triangular";
}

int minimal_admissible_half_width(std::size_t dim) {
  int h = 0;
  while (static_cast<std::size_t>(2 * h + 1) * (2 * h + 1) < dim) ++h;
  return h;
}

void validate_smoother(const SmootherSpec& spec, std::size_t dim,
                       std::vector<std::string>* warnings) {
  if (spec.half_width < 0) throw std::runtime_error("smoother half width must be >= 0");
  if (spec.ridge < 0.0) throw std::runtime_error("smoother ridge must be >= 0");
  const int minimal = minimal_admissible_half_width(dim);
  if (spec.half_width < minimal && spec.ridge == 0.0 && warnings)
    warnings->push_back("bandwidth " + std::to_string(spec.half_width) +
                        " gives fewer than " + std::to_string(dim) +
                        " neighbourhood frequencies and no ridge is set; smoothed matrices "
                        "will be singular (minimal admissible bandwidth is " +
                        std::to_string(minimal) + ")");
}

bool regularize(std::span<cdouble> block, std::size_t dim, double eps) {
  if (eps < 0.0) throw std::runtime_error("ridge must be >= 0");
  if (eps == 0.0) return true;
  double trace = 0.0;
  for (std::size_t i = 0; i < dim; ++i) trace += block[i * dim + i].real();
  if (trace <= 0.0) return false;
  const double shift = eps * (trace / static_cast<double>(dim));
  for (std::size_t i = 0; i < dim; ++i) block[i * dim + i] += shift;
  return true;
}

namespace {

double kernel_weight(SmoothingKernel kernel, int dp, int dq, int h) {
  if (kernel == SmoothingKernel::uniform) return 1.0;
  const double span = static_cast<double>(h + 1);
  return (1.0 - std::abs(dp) / span) * (1.0 - std::abs(dq) / span);
}

}  // namespace

SpectralMatrixField smooth_field(const SpectralMatrixField& raw, const SmootherSpec& spec,
                                 int threads, SmoothingReport* report) {
  const FrequencyGrid& grid = raw.grid();
  const std::size_t d = raw.dim();
  const std::size_t block_len = d * d;
  const int h = spec.half_width;
  SpectralMatrixField out(grid, d, /*smoothed=*/true);
  std::atomic<std::size_t> ridge_skipped{0};

  parallel_for(grid.size(), threads, [&](std::size_t f) {
    const auto centre = grid.at(f);
    auto dest = out.block(f);
    double weight_sum = 0.0;
    for (int dp = -h; dp <= h; ++dp) {
      for (int dq = -h; dq <= h; ++dq) {
        const int p = centre.p + dp;
        const int q = centre.q + dq;
        if (p == 0 && q == 0) continue;  // DC is structurally zero after demeaning
        const double w = kernel_weight(spec.kernel, dp, dq, h);
        if (grid.contains(p, q)) {
          const auto src = raw.block(grid.index_of(p, q));
          kernels::scaled_add(w, reinterpret_cast<const double*>(src.data()),
                              reinterpret_cast<double*>(dest.data()), 2 * block_len);
          weight_sum += w;
        } else if (p < 0 && grid.contains(-p, -q)) {
          // p=0 is only a storage boundary: the periodogram satisfies
          // f(-p,-q) = conj(f(p,q)), so the neighbourhood continues across it.
          const auto src = raw.block(grid.index_of(-p, -q));
          kernels::conj_scaled_add(w, reinterpret_cast<const double*>(src.data()),
                                   reinterpret_cast<double*>(dest.data()), block_len);
          weight_sum += w;
        }
      }
    }
    if (weight_sum > 0.0) {
      const double inv = 1.0 / weight_sum;
      for (auto& v : dest) v *= inv;
    } else {
      const auto src = raw.block(f);
      std::copy(src.begin(), src.end(), dest.begin());
    }
    if (!regularize(dest, d, spec.ridge)) ridge_skipped.fetch_add(1, std::memory_order_relaxed);
  });

  if (report) report->ridge_skipped = ridge_skipped.load();
  return out;
}

}  // namespace msdg
