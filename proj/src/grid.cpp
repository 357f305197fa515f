#include "choquard/grid.hpp"

#include <cmath>
#include <string>

namespace choquard {

Grid::Grid(int dim, int n, double L) : dim_(dim), n_(n), L_(L) {
  h_ = L / static_cast<double>(n);
  total_ = 1;
  volume_ = 1.0;
  for (int a = 0; a < dim_; ++a) {
    total_ *= static_cast<std::size_t>(n_);
    volume_ *= h_;
  }
  // Row-major, axis 0 slowest.
  std::size_t s = total_;
  for (int a = 0; a < dim_; ++a) {
    s /= static_cast<std::size_t>(n_);
    strides_[a] = s;
  }
}

Grid build_grid(int dim, int n, double L) {
  if (dim < 3)
    throw Error(ErrorCode::unsupported_dimension,
                "dimension must be at least 3, got " + std::to_string(dim));
  if (dim > kMaxDim)
    throw Error(ErrorCode::invalid_grid,
                "dimension exceeds supported maximum " + std::to_string(kMaxDim));
  if (n < 2)
    throw Error(ErrorCode::invalid_grid, "need at least 2 points per axis");
  if (!(L > 0.0) || !std::isfinite(L))
    throw Error(ErrorCode::invalid_grid, "box length must be positive");

  double points = std::pow(static_cast<double>(n), dim);
  if (points > static_cast<double>(kMaxGridPoints))
    throw Error(ErrorCode::invalid_grid, "grid exceeds the point-count guard");

  return Grid(dim, n, L);
}

void Params::validate() const {
  if (N < 3)
    throw Error(ErrorCode::unsupported_dimension,
                "N must be at least 3, got " + std::to_string(N));
  if (!(alpha > 0.0) || !(alpha < static_cast<double>(N)) || !std::isfinite(alpha))
    throw Error(ErrorCode::invalid_exponent, "alpha must lie in (0, N)");
  if (!(p > 0.0) || !std::isfinite(p) || !(q > 0.0) || !std::isfinite(q))
    throw Error(ErrorCode::invalid_exponent, "p and q must be positive");
}

}  // namespace choquard
