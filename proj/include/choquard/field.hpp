#pragma once

#include <cstdint>
#include <vector>

#include "choquard/grid.hpp"

namespace choquard {

/// Real-valued function sampled on a Grid. Plain value semantics: copying a
/// Field copies its data; the grid descriptor is small and stored inline.
struct Field {
  Grid grid;
  std::vector<double> data;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), data(g.total_points(), 0.0) {}

  std::size_t size() const noexcept { return data.size(); }
  double& operator[](std::size_t i) noexcept { return data[i]; }
  double operator[](std::size_t i) const noexcept { return data[i]; }
};

/// h^dim-weighted inner product of two fields on the same grid.
double dot_h(const Field& a, const Field& b);

/// sqrt(dot_h(f, f)).
double norm_h(const Field& f);

Field abs_field(const Field& f);

Field scaled(const Field& f, double s);

/// a*x + b*y, elementwise.
Field lin_comb(double a, const Field& x, double b, const Field& y);

/// Whole-cell translation: out(i) = f(i - shift), zero where the source index
/// falls outside the box. With strict = true a nonzero value leaving the box
/// raises shift_out_of_range instead of being dropped.
Field shift_field(const Field& f, const IndexArray& shift, bool strict = false);

/// amplitude * exp(-|x - c|^2 / (2 width^2)) with c the box center displaced
/// by shift_cells whole cells.
Field make_gaussian(const Grid& grid, double width = 1.0,
                    const IndexArray& shift_cells = IndexArray{},
                    double amplitude = 1.0);

/// Compactly supported smooth bump amplitude * exp(1 - R^2/(R^2 - r^2)) for
/// r < R (value `amplitude` at the center, identically zero outside), centered
/// like make_gaussian.
Field make_bump(const Grid& grid, double radius, double amplitude = 1.0,
                const IndexArray& shift_cells = IndexArray{});

/// Uniform samples in (lo, hi), deterministic in the seed.
Field make_random(const Grid& grid, std::uint64_t seed, double lo = -1.0,
                  double hi = 1.0);

}  // namespace choquard
