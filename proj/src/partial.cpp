#include "msdg/partial.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "msdg/parallel.hpp"
#include "msdg/smoothing.hpp"

namespace msdg {

namespace {

void require_hermitian(const Eigen::MatrixXcd& f) {
  const double scale = f.cwiseAbs().maxCoeff();
  const double dev = (f - f.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-8 * std::max(scale, 1e-300))
    throw std::runtime_error("spectral matrix is not Hermitian to tolerance");
}

struct EigenDecomp {
  double min_eig = 0.0;
  double max_eig = 0.0;
  bool ok = false;
  Eigen::MatrixXcd inverse;
};

// Inverse through the spectral decomposition; for d=2 the closed form keeps
// the rescaled entries accurate even when the matrix is barely conditioned.
EigenDecomp hermitian_inverse(const Eigen::MatrixXcd& f) {
  EigenDecomp result;
  const auto d = f.rows();
  if (d == 1) {
    const double v = f(0, 0).real();
    result.min_eig = result.max_eig = v;
    if (v > 0.0) {
      result.inverse = Eigen::MatrixXcd::Constant(1, 1, cdouble(1.0 / v, 0.0));
      result.ok = true;
    }
    return result;
  }
  if (d == 2) {
    const double a = f(0, 0).real();
    const double c = f(1, 1).real();
    const cdouble b = f(0, 1);
    const double det = a * c - std::norm(b);
    const double mean = 0.5 * (a + c);
    const double disc = std::sqrt(std::max(0.0, mean * mean - det));
    result.min_eig = mean - disc;
    result.max_eig = mean + disc;
    if (det > 0.0 && result.min_eig > 0.0) {
      result.inverse.resize(2, 2);
      result.inverse(0, 0) = cdouble(c / det, 0.0);
      result.inverse(1, 1) = cdouble(a / det, 0.0);
      result.inverse(0, 1) = -b / det;
      result.inverse(1, 0) = std::conj(result.inverse(0, 1));
      result.ok = true;
    }
    return result;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(f);
  if (solver.info() != Eigen::Success) return result;
  const auto& eigs = solver.eigenvalues();
  result.min_eig = eigs.minCoeff();
  result.max_eig = eigs.maxCoeff();
  if (result.min_eig > 0.0) {
    result.inverse = solver.eigenvectors() * eigs.cwiseInverse().asDiagonal() *
                     solver.eigenvectors().adjoint();
    // exact Hermitian symmetry for the stored field
    result.inverse = 0.5 * (result.inverse + result.inverse.adjoint()).eval();
    result.ok = true;
  }
  return result;
}

bool well_conditioned(const EigenDecomp& d, double threshold) {
  return d.ok && d.min_eig > 0.0 && d.max_eig <= threshold * d.min_eig;
}

}  // namespace

Eigen::MatrixXcd invert_spectral_matrix(const Eigen::MatrixXcd& f, const InversionPolicy& policy,
                                        FrequencyFlag* flag, bool* ridged) {
  require_hermitian(f);
  if (flag) *flag = FrequencyFlag::ok;
  if (ridged) *ridged = false;

  Eigen::MatrixXcd work = 0.5 * (f + f.adjoint());
  EigenDecomp decomp = hermitian_inverse(work);
  if (!well_conditioned(decomp, policy.condition_threshold)) {
    // one ridge retry, then give up on this frequency
    bool rescued = false;
    if (policy.ridge > 0.0) {
      std::span<cdouble> block(work.data(), static_cast<std::size_t>(work.size()));
      if (regularize(block, static_cast<std::size_t>(work.rows()), policy.ridge)) {
        decomp = hermitian_inverse(work);
        rescued = well_conditioned(decomp, policy.condition_threshold);
        if (ridged) *ridged = true;
      }
    }
    if (!rescued) {
      if (flag) *flag = FrequencyFlag::singular;
      return Eigen::MatrixXcd::Zero(f.rows(), f.cols());
    }
  }

  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(f.rows(), f.cols());
  Eigen::MatrixXcd inverse = std::move(decomp.inverse);
  double residual = (inverse * work - identity).cwiseAbs().maxCoeff();
  // Newton-Schulz refinement: the factorisation residual is ~eps*cond, which
  // can exceed the tolerance for legal condition numbers; each step squares
  // the residual, so a couple of steps reach it whenever cond < 1/eps.
  for (int step = 0; step < 3 && residual > policy.residual_tolerance; ++step) {
    inverse = inverse * (2.0 * identity - work * inverse);
    inverse = 0.5 * (inverse + inverse.adjoint()).eval();
    residual = (inverse * work - identity).cwiseAbs().maxCoeff();
  }
  if (residual > policy.residual_tolerance) {
    if (flag) *flag = FrequencyFlag::residual;
    return Eigen::MatrixXcd::Zero(f.rows(), f.cols());
  }
  return inverse;
}

InverseField::InverseField(const FrequencyGrid& grid, std::size_t dim)
    : grid_(grid),
      dim_(dim),
      data_(grid.size() * dim * dim),
      flags_(grid.size(), FrequencyFlag::ok) {
  flags_[grid.dc_index()] = FrequencyFlag::dc;
}

std::size_t InverseField::flagged_count() const {
  std::size_t n = 0;
  for (auto fl : flags_)
    if (fl != FrequencyFlag::ok && fl != FrequencyFlag::dc) ++n;
  return n;
}

Eigen::Map<const Eigen::MatrixXcd> as_matrix(const SpectralMatrixField& field, std::size_t freq) {
  const auto block = field.block(freq);
  return {block.data(), static_cast<Eigen::Index>(field.dim()),
          static_cast<Eigen::Index>(field.dim())};
}

InverseField invert_field(const SpectralMatrixField& smoothed, const InversionPolicy& policy,
                          int threads) {
  const FrequencyGrid& grid = smoothed.grid();
  const std::size_t d = smoothed.dim();
  InverseField out(grid, d);
  std::atomic<std::size_t> ridged_total{0};

  parallel_for(grid.size(), threads, [&](std::size_t f) {
    if (f == grid.dc_index()) return;
    FrequencyFlag flag = FrequencyFlag::ok;
    bool ridged = false;
    const Eigen::MatrixXcd g = invert_spectral_matrix(as_matrix(smoothed, f), policy, &flag, &ridged);
    if (ridged) ridged_total.fetch_add(1, std::memory_order_relaxed);
    out.set_flag(f, flag);
    if (flag == FrequencyFlag::ok)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) out.at(f, i, j) = g(static_cast<Eigen::Index>(i),
                                                                static_cast<Eigen::Index>(j));
  });
  out.set_ridged_count(ridged_total.load());
  return out;
}

namespace {

void check_pair(std::size_t dim, std::size_t i, std::size_t j) {
  if (i >= dim || j >= dim) throw std::runtime_error("type index out of range");
  if (i == j) throw std::runtime_error("expected two distinct type indices");
}

double positive_diagonal(const Eigen::MatrixXcd& g, std::size_t i) {
  const cdouble v = g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
  const double scale = g.cwiseAbs().maxCoeff();
  if (std::abs(v.imag()) > 1e-10 * std::max(scale, 1e-300))
    throw std::runtime_error("inverse diagonal has a non-real entry");
  if (!(v.real() > 0.0)) throw std::runtime_error("inverse diagonal entry is not positive");
  return v.real();
}

}  // namespace

cdouble rescaled_inverse(const Eigen::MatrixXcd& g, std::size_t i, std::size_t j) {
  check_pair(static_cast<std::size_t>(g.rows()), i, j);
  const double gii = positive_diagonal(g, i);
  const double gjj = positive_diagonal(g, j);
  return g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / std::sqrt(gii * gjj);
}

cdouble partial_coherence(const Eigen::MatrixXcd& g, std::size_t i, std::size_t j) {
  return -rescaled_inverse(g, i, j);
}

double ordinary_coherence(const Eigen::MatrixXcd& f, std::size_t i, std::size_t j) {
  check_pair(static_cast<std::size_t>(f.rows()), i, j);
  const double fii = f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  const double fjj = f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real();
  if (!(fii > 0.0) || !(fjj > 0.0))
    throw std::runtime_error("coherence undefined: zero auto-spectrum");
  return std::norm(f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) / (fii * fjj);
}

namespace {

// 2x2 Schur complement of {i,j} against the remaining components, the
// regression form of partialisation. Solved with a full-pivot LU so the
// numerical path shares nothing with the eigendecomposition route.
Eigen::Matrix2cd partialised_block(const Eigen::MatrixXcd& f, std::size_t i, std::size_t j) {
  const std::size_t d = static_cast<std::size_t>(f.rows());
  check_pair(d, i, j);
  if (d < 3) throw std::runtime_error("partialisation needs at least 3 components");

  std::vector<Eigen::Index> rest;
  rest.reserve(d - 2);
  for (std::size_t k = 0; k < d; ++k)
    if (k != i && k != j) rest.push_back(static_cast<Eigen::Index>(k));
  const Eigen::Index r = static_cast<Eigen::Index>(rest.size());

  Eigen::MatrixXcd f_rr(r, r);
  Eigen::MatrixXcd f_r_ij(r, 2);
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = 0; b < r; ++b) f_rr(a, b) = f(rest[a], rest[b]);
    f_r_ij(a, 0) = f(rest[a], static_cast<Eigen::Index>(i));
    f_r_ij(a, 1) = f(rest[a], static_cast<Eigen::Index>(j));
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(f_rr);
  if (!lu.isInvertible())
    throw std::runtime_error("conditioning block is singular; cannot partialise");
  const Eigen::MatrixXcd solved = lu.solve(f_r_ij);  // f_rr^-1 * f_{rest,{i,j}}

  Eigen::Matrix2cd top;
  top(0, 0) = f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
  top(0, 1) = f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  top(1, 0) = f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  top(1, 1) = f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));

  Eigen::MatrixXcd f_ij_r(2, r);
  for (Eigen::Index a = 0; a < r; ++a) {
    f_ij_r(0, a) = f(static_cast<Eigen::Index>(i), rest[a]);
    f_ij_r(1, a) = f(static_cast<Eigen::Index>(j), rest[a]);
  }
  return top - f_ij_r * solved;
}

}  // namespace

cdouble brillinger_partial_spectrum(const Eigen::MatrixXcd& f, std::size_t i, std::size_t j) {
  return partialised_block(f, i, j)(0, 1);
}

cdouble brillinger_partial_coherence(const Eigen::MatrixXcd& f, std::size_t i, std::size_t j) {
  const Eigen::Matrix2cd block = partialised_block(f, i, j);
  const double aii = block(0, 0).real();
  const double ajj = block(1, 1).real();
  if (!(aii > 0.0) || !(ajj > 0.0))
    throw std::runtime_error("partialised auto-spectrum is not positive");
  return block(0, 1) / std::sqrt(aii * ajj);
}

PartialDependenceField::PartialDependenceField(const FrequencyGrid& grid, std::size_t dim)
    : grid_(grid),
      dim_(dim),
      values_(grid.size() * (dim * (dim - 1) / 2)),
      flags_(grid.size(), FrequencyFlag::ok) {
  flags_[grid.dc_index()] = FrequencyFlag::dc;
}

std::size_t PartialDependenceField::pair_index(std::size_t i, std::size_t j) const {
  check_pair(dim_, i, j);
  if (i > j) std::swap(i, j);
  return i * dim_ - i * (i + 1) / 2 + (j - i - 1);
}

cdouble PartialDependenceField::rescaled_inverse(std::size_t freq, std::size_t i,
                                                 std::size_t j) const {
  const cdouble v = values_[freq * pair_count() + pair_index(i, j)];
  return i <= j ? v : std::conj(v);
}

void PartialDependenceField::set(std::size_t freq, std::size_t i, std::size_t j, cdouble value) {
  values_[freq * pair_count() + pair_index(i, j)] = i <= j ? value : std::conj(value);
}

std::size_t PartialDependenceField::flagged_count() const {
  std::size_t n = 0;
  for (auto fl : flags_)
    if (fl != FrequencyFlag::ok && fl != FrequencyFlag::dc) ++n;
  return n;
}

PartialDependenceField partial_dependence(const InverseField& inverse) {
  const FrequencyGrid& grid = inverse.grid();
  const std::size_t d = inverse.dim();
  PartialDependenceField out(grid, d);
  for (std::size_t f = 0; f < grid.size(); ++f) {
    out.set_flag(f, inverse.flag(f));
    if (!inverse.usable(f)) continue;

    bool diag_ok = true;
    for (std::size_t i = 0; i < d && diag_ok; ++i)
      if (!(inverse.at(f, i, i).real() > 0.0)) diag_ok = false;
    if (!diag_ok) {
      out.set_flag(f, FrequencyFlag::nonpositive_diagonal);
      continue;
    }
    for (std::size_t i = 0; i + 1 < d; ++i) {
      const double gii = inverse.at(f, i, i).real();
      for (std::size_t j = i + 1; j < d; ++j) {
        const double gjj = inverse.at(f, j, j).real();
        out.set(f, i, j, inverse.at(f, i, j) / std::sqrt(gii * gjj));
      }
    }
  }
  return out;
}

EdgeStatisticMatrix edge_statistics(const PartialDependenceField& field) {
  const std::size_t d = field.dim();
  EdgeStatisticMatrix stats;
  stats.dim = d;
  stats.values.assign(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) stats.at(i, i) = 1.0;

  std::size_t usable = 0;
  for (std::size_t f = 0; f < field.grid().size(); ++f) {
    if (!field.usable(f)) continue;
    ++usable;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        const double s = field.strength(f, i, j);
        if (s > stats.at(i, j)) {
          stats.at(i, j) = s;
          stats.at(j, i) = s;
        }
      }
    }
  }
  if (usable == 0) {
    std::size_t flagged = field.flagged_count();
    throw std::runtime_error(
        "no usable frequency: all " + std::to_string(flagged) +
        " non-DC lattice points were flagged during inversion; the spectral estimate is "
        "degenerate (increase the bandwidth or the ridge)");
  }
  return stats;
}

}  // namespace msdg
