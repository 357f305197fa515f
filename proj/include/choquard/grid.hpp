#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "choquard/errors.hpp"

namespace choquard {

/// Highest spatial dimension the index machinery supports.
inline constexpr int kMaxDim = 8;

/// Largest total point count a grid may carry (guards n^dim blowups).
inline constexpr std::size_t kMaxGridPoints = std::size_t{1} << 24;

using IndexArray = std::array<int, kMaxDim>;

/// Uniform cell-centered discretization of the box [-L/2, L/2)^dim.
///
/// Axis coordinate of index i is -L/2 + (i + 1/2) h with h = L/n, evaluated
/// in the symmetric form (i + 1/2 - n/2) h so that index reversal negates the
/// coordinate exactly. Flat indices are row-major with axis 0 slowest.
class Grid {
 public:
  Grid() = default;
  Grid(int dim, int n, double L);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double L() const noexcept { return L_; }
  double h() const noexcept { return h_; }

  std::size_t total_points() const noexcept { return total_; }

  /// Quadrature weight of one cell, h^dim.
  double cell_volume() const noexcept { return volume_; }

  double axis_coord(int i) const noexcept {
    return (static_cast<double>(i) + 0.5 - 0.5 * n_) * h_;
  }

  /// Stride of `axis` in the flat row-major layout.
  std::size_t stride(int axis) const noexcept { return strides_[axis]; }

  std::size_t flatten(const IndexArray& idx) const noexcept {
    std::size_t flat = 0;
    for (int a = 0; a < dim_; ++a) flat += static_cast<std::size_t>(idx[a]) * strides_[a];
    return flat;
  }

  IndexArray unflatten(std::size_t flat) const noexcept {
    IndexArray idx{};
    for (int a = dim_ - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % static_cast<std::size_t>(n_));
      flat /= static_cast<std::size_t>(n_);
    }
    return idx;
  }

  void coords(const IndexArray& idx, std::array<double, kMaxDim>& x) const noexcept {
    for (int a = 0; a < dim_; ++a) x[a] = axis_coord(idx[a]);
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.L_ == b.L_;
  }
  friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

 private:
  int dim_ = 0;
  int n_ = 0;
  double L_ = 0.0;
  double h_ = 0.0;
  double volume_ = 0.0;
  std::size_t total_ = 0;
  std::array<std::size_t, kMaxDim> strides_{};
};

/// Builds the cell-centered grid. Throws unsupported_dimension for dim < 3
/// and invalid_grid for n < 2, non-positive L, or an oversized point count.
Grid build_grid(int dim, int n, double L);

/// Problem parameters of the doubly-nonlinear Choquard equation
/// -Δu + u = q (I_α∗|u|^p) |u|^{q-2} u + p (I_α∗|u|^q) |u|^{p-2} u.
struct Params {
  int N = 3;
  double alpha = 2.0;
  double p = 2.0;
  double q = 2.0;

  /// Throws unless N >= 3, 0 < alpha < N, and p, q > 0 (all finite).
  void validate() const;

  /// The gradient factors |u|^{s-2}u are Lipschitz-manageable only for
  /// exponents above one; the solver insists on this unless regularized.
  bool solver_admissible() const noexcept { return p > 1.0 && q > 1.0; }

  friend bool operator==(const Params& a, const Params& b) {
    return a.N == b.N && a.alpha == b.alpha && a.p == b.p && a.q == b.q;
  }
};

}  // namespace choquard
