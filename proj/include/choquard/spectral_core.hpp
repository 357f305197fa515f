#pragma once

#include <memory>

#include "choquard/field.hpp"
#include "choquard/grid.hpp"

namespace choquard {

/// Tabulated Riesz-potential kernel I_α on a grid, plus the machinery for
/// fast free-space convolution against it.
///
/// The entry at integer offset o is A_α |o h|^{α-N} away from the origin and
/// the analytic average of A_α |x|^{α-N} over the ball of volume h^N at the
/// origin, which preserves the integral of the kernel across its integrable
/// singularity. The table is held in wrap-around order on the zero-padding
/// grid (2n per axis) through its precomputed Fourier transform; analytic
/// entries are available through value_at_offset for oracles and tests.
class KernelTable {
 public:
  KernelTable(const Grid& grid, double alpha);
  ~KernelTable();

  KernelTable(KernelTable&&) noexcept;
  KernelTable& operator=(KernelTable&&) noexcept;
  KernelTable(const KernelTable&) = delete;
  KernelTable& operator=(const KernelTable&) = delete;

  const Grid& grid() const noexcept;
  double alpha() const noexcept;

  /// Normalization A_α = Γ((N-α)/2) / (π^{N/2} 2^α Γ(α/2)).
  double normalization() const noexcept;

  /// Singular-cell entry: A_α N ω_N r^α / (α h^N) with ω_N the unit-ball
  /// volume and r = h / ω_N^{1/N} the radius of the ball of volume h^N.
  double origin_value() const noexcept;

  /// Analytic table entry at an integer offset (components in (-n, n]).
  double value_at_offset(const IndexArray& offset) const;

  Field convolve(const Field& f) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

KernelTable build_riesz_kernel(const Grid& grid, double alpha);

/// Free-space discrete convolution g(x_i) = h^N Σ_j kernel(x_i - x_j) f(x_j),
/// computed by zero-padded fast convolution. Pure; safe to call concurrently
/// on a shared kernel.
Field riesz_convolve(const Field& f, const KernelTable& kernel);

/// The O(M²) double sum over the same table entries; ground truth for
/// riesz_convolve. Refuses grids above 10^5 points.
Field direct_convolve_oracle(const Field& f, const KernelTable& kernel);

}  // namespace choquard
