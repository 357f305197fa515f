#include "choquard/field.hpp"

#include <cmath>
#include <random>

#include "choquard/errors.hpp"

namespace choquard {

namespace {

void require_same_grid(const Field& a, const Field& b) {
  if (a.grid != b.grid)
    throw Error(ErrorCode::shape_mismatch, "fields live on different grids");
}

// Box-center coordinates displaced by whole cells.
std::array<double, kMaxDim> shifted_center(const Grid& g,
                                           const IndexArray& shift_cells) {
  std::array<double, kMaxDim> c{};
  for (int a = 0; a < g.dim(); ++a) c[a] = shift_cells[a] * g.h();
  return c;
}

template <typename F>
Field fill_radial(const Grid& g, const IndexArray& shift_cells, F&& value_at) {
  Field out(g);
  const auto center = shifted_center(g, shift_cells);
  IndexArray idx{};
  std::array<double, kMaxDim> x{};
  for (std::size_t i = 0; i < g.total_points(); ++i) {
    g.coords(idx, x);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double d = x[a] - center[a];
      r2 += d * d;
    }
    out[i] = value_at(r2);
    for (int a = g.dim() - 1; a >= 0; --a) {
      if (++idx[a] < g.n()) break;
      idx[a] = 0;
    }
  }
  return out;
}

}  // namespace

double dot_h(const Field& a, const Field& b) {
  require_same_grid(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc * a.grid.cell_volume();
}

double norm_h(const Field& f) { return std::sqrt(dot_h(f, f)); }

Field abs_field(const Field& f) {
  Field out = f;
  for (double& v : out.data) v = std::abs(v);
  return out;
}

Field scaled(const Field& f, double s) {
  Field out = f;
  for (double& v : out.data) v *= s;
  return out;
}

Field lin_comb(double a, const Field& x, double b, const Field& y) {
  require_same_grid(x, y);
  Field out(x.grid);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

Field shift_field(const Field& f, const IndexArray& shift, bool strict) {
  const Grid& g = f.grid;
  Field out(g);
  IndexArray src{};
  for (std::size_t i = 0; i < g.total_points(); ++i) {
    bool inside = true;
    IndexArray tgt = src;
    for (int a = 0; a < g.dim(); ++a) {
      tgt[a] = src[a] + shift[a];
      if (tgt[a] < 0 || tgt[a] >= g.n()) inside = false;
    }
    if (inside) {
      out[g.flatten(tgt)] = f[i];
    } else if (strict && f[i] != 0.0) {
      throw Error(ErrorCode::shift_out_of_range,
                  "a nonzero value would leave the box");
    }
    for (int a = g.dim() - 1; a >= 0; --a) {
      if (++src[a] < g.n()) break;
      src[a] = 0;
    }
  }
  return out;
}

Field make_gaussian(const Grid& grid, double width, const IndexArray& shift_cells,
                    double amplitude) {
  const double inv2w2 = 1.0 / (2.0 * width * width);
  return fill_radial(grid, shift_cells, [&](double r2) {
    return amplitude * std::exp(-r2 * inv2w2);
  });
}

Field make_bump(const Grid& grid, double radius, double amplitude,
                const IndexArray& shift_cells) {
  const double R2 = radius * radius;
  return fill_radial(grid, shift_cells, [&](double r2) {
    if (r2 >= R2) return 0.0;
    return amplitude * std::exp(1.0 - R2 / (R2 - r2));
  });
}

Field make_random(const Grid& grid, std::uint64_t seed, double lo, double hi) {
  Field out(grid);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : out.data) v = dist(rng);
  return out;
}

}  // namespace choquard
