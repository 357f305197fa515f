#include "choquard/spectral_core.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <vector>

namespace choquard {

namespace {

// FFTW planning and plan destruction are not thread-safe; executing a plan on
// caller-owned arrays is. All plans are created with FFTW_UNALIGNED so they
// accept plain std::vector storage.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

double riesz_normalization(int N, double alpha) {
  return std::tgamma(0.5 * (N - alpha)) /
         (std::pow(M_PI, 0.5 * N) * std::pow(2.0, alpha) * std::tgamma(0.5 * alpha));
}

}  // namespace

struct KernelTable::Impl {
  Grid grid;
  double alpha = 0.0;
  double a_norm = 0.0;
  double origin = 0.0;
  int m = 0;  // padded points per axis, 2n
  std::size_t padded_total = 0;
  std::size_t complex_total = 0;
  std::array<std::size_t, kMaxDim> pstrides{};
  std::vector<std::complex<double>> khat;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }

  double entry(const IndexArray& offset) const {
    double r2 = 0.0;
    bool at_origin = true;
    for (int a = 0; a < grid.dim(); ++a) {
      const double d = offset[a] * grid.h();
      r2 += d * d;
      at_origin = at_origin && offset[a] == 0;
    }
    if (at_origin) return origin;
    return a_norm * std::pow(std::sqrt(r2), alpha - grid.dim());
  }
};

KernelTable::KernelTable(const Grid& grid, double alpha)
    : impl_(std::make_unique<Impl>()) {
  if (grid.total_points() == 0)
    throw Error(ErrorCode::invalid_grid, "kernel requires a non-empty grid");
  if (!(alpha > 0.0) || !(alpha < static_cast<double>(grid.dim())) ||
      !std::isfinite(alpha))
    throw Error(ErrorCode::invalid_exponent, "alpha must lie in (0, N)");

  const int N = grid.dim();
  Impl& im = *impl_;
  im.grid = grid;
  im.alpha = alpha;
  im.a_norm = riesz_normalization(N, alpha);

  // Average of A_α |x|^{α-N} over the ball of volume h^N: the radial integral
  // is exact, so the integrable singularity contributes its true mass.
  const double omega = std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
  const double r_ball = grid.h() / std::pow(omega, 1.0 / N);
  im.origin = im.a_norm * N * omega * std::pow(r_ball, alpha) /
              (alpha * grid.cell_volume());

  im.m = 2 * grid.n();
  im.padded_total = 1;
  for (int a = 0; a < N; ++a) im.padded_total *= static_cast<std::size_t>(im.m);
  im.complex_total = (im.padded_total / static_cast<std::size_t>(im.m)) *
                     static_cast<std::size_t>(im.m / 2 + 1);
  std::size_t s = im.padded_total;
  for (int a = 0; a < N; ++a) {
    s /= static_cast<std::size_t>(im.m);
    im.pstrides[a] = s;
  }

  // Wrap-around table on the padding grid: padded index k maps to the signed
  // offset k <= n ? k : k - 2n, so outputs on [0,n)^N see exactly the
  // free-space sum.
  std::vector<double> kreal(im.padded_total);
  IndexArray k{};
  IndexArray offset{};
  for (std::size_t i = 0; i < im.padded_total; ++i) {
    for (int a = 0; a < N; ++a)
      offset[a] = k[a] <= grid.n() ? k[a] : k[a] - im.m;
    kreal[i] = im.entry(offset);
    for (int a = N - 1; a >= 0; --a) {
      if (++k[a] < im.m) break;
      k[a] = 0;
    }
  }

  im.khat.resize(im.complex_total);
  int dims[kMaxDim];
  for (int a = 0; a < N; ++a) dims[a] = im.m;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    im.fwd = fftw_plan_dft_r2c(N, dims, kreal.data(),
                               reinterpret_cast<fftw_complex*>(im.khat.data()),
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    std::vector<double> scratch_r(im.padded_total);
    std::vector<std::complex<double>> scratch_c(im.complex_total);
    im.bwd = fftw_plan_dft_c2r(N, dims,
                               reinterpret_cast<fftw_complex*>(scratch_c.data()),
                               scratch_r.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_execute(im.fwd);  // kreal -> khat
}

KernelTable::~KernelTable() = default;
KernelTable::KernelTable(KernelTable&&) noexcept = default;
KernelTable& KernelTable::operator=(KernelTable&&) noexcept = default;

const Grid& KernelTable::grid() const noexcept { return impl_->grid; }
double KernelTable::alpha() const noexcept { return impl_->alpha; }
double KernelTable::normalization() const noexcept { return impl_->a_norm; }
double KernelTable::origin_value() const noexcept { return impl_->origin; }

double KernelTable::value_at_offset(const IndexArray& offset) const {
  const Grid& g = impl_->grid;
  for (int a = 0; a < g.dim(); ++a) {
    if (offset[a] <= -g.n() || offset[a] > g.n())
      throw Error(ErrorCode::shape_mismatch, "offset outside the table range");
  }
  return impl_->entry(offset);
}

Field KernelTable::convolve(const Field& f) const {
  const Impl& im = *impl_;
  if (f.grid != im.grid)
    throw Error(ErrorCode::shape_mismatch,
                "field and kernel were built on different grids");

  const Grid& g = im.grid;
  std::vector<double> real(im.padded_total, 0.0);
  std::vector<std::complex<double>> spec(im.complex_total);

  IndexArray idx{};
  for (std::size_t i = 0; i < g.total_points(); ++i) {
    std::size_t pflat = 0;
    for (int a = 0; a < g.dim(); ++a)
      pflat += static_cast<std::size_t>(idx[a]) * im.pstrides[a];
    real[pflat] = f[i];
    for (int a = g.dim() - 1; a >= 0; --a) {
      if (++idx[a] < g.n()) break;
      idx[a] = 0;
    }
  }

  fftw_execute_dft_r2c(im.fwd, real.data(),
                       reinterpret_cast<fftw_complex*>(spec.data()));

  // h^N from the quadrature weight, 1/m^N from FFTW's unnormalized pair.
  const double scale =
      g.cell_volume() / static_cast<double>(im.padded_total);
  for (std::size_t i = 0; i < im.complex_total; ++i)
    spec[i] *= im.khat[i] * scale;

  fftw_execute_dft_c2r(im.bwd, reinterpret_cast<fftw_complex*>(spec.data()),
                       real.data());

  Field out(g);
  idx = IndexArray{};
  for (std::size_t i = 0; i < g.total_points(); ++i) {
    std::size_t pflat = 0;
    for (int a = 0; a < g.dim(); ++a)
      pflat += static_cast<std::size_t>(idx[a]) * im.pstrides[a];
    out[i] = real[pflat];
    for (int a = g.dim() - 1; a >= 0; --a) {
      if (++idx[a] < g.n()) break;
      idx[a] = 0;
    }
  }
  return out;
}

KernelTable build_riesz_kernel(const Grid& grid, double alpha) {
  return KernelTable(grid, alpha);
}

Field riesz_convolve(const Field& f, const KernelTable& kernel) {
  return kernel.convolve(f);
}

Field direct_convolve_oracle(const Field& f, const KernelTable& kernel) {
  constexpr std::size_t kOracleLimit = 100000;
  const Grid& g = kernel.grid();
  if (f.grid != g)
    throw Error(ErrorCode::shape_mismatch,
                "field and kernel were built on different grids");
  if (g.total_points() > kOracleLimit)
    throw Error(ErrorCode::oracle_refused,
                "grid too large for the O(M^2) oracle");

  // Dense table over all offsets [-(n-1), n-1]^N, read through the same
  // analytic entry function as the fast path.
  const int n = g.n();
  const int ext = 2 * n - 1;
  std::size_t table_total = 1;
  std::array<std::size_t, kMaxDim> tstrides{};
  for (int a = 0; a < g.dim(); ++a) table_total *= static_cast<std::size_t>(ext);
  std::size_t s = table_total;
  for (int a = 0; a < g.dim(); ++a) {
    s /= static_cast<std::size_t>(ext);
    tstrides[a] = s;
  }
  std::vector<double> table(table_total);
  IndexArray t{};
  for (std::size_t i = 0; i < table_total; ++i) {
    IndexArray offset{};
    for (int a = 0; a < g.dim(); ++a) offset[a] = t[a] - (n - 1);
    table[i] = kernel.value_at_offset(offset);
    for (int a = g.dim() - 1; a >= 0; --a) {
      if (++t[a] < ext) break;
      t[a] = 0;
    }
  }

  Field out(g);
  IndexArray ii{};
  for (std::size_t i = 0; i < g.total_points(); ++i) {
    double acc = 0.0;
    IndexArray jj{};
    for (std::size_t j = 0; j < g.total_points(); ++j) {
      std::size_t tflat = 0;
      for (int a = 0; a < g.dim(); ++a)
        tflat += static_cast<std::size_t>(ii[a] - jj[a] + n - 1) * tstrides[a];
      acc += table[tflat] * f[j];
      for (int a = g.dim() - 1; a >= 0; --a) {
        if (++jj[a] < n) break;
        jj[a] = 0;
      }
    }
    out[i] = acc * g.cell_volume();
    for (int a = g.dim() - 1; a >= 0; --a) {
      if (++ii[a] < n) break;
      ii[a] = 0;
    }
  }
  return out;
}

}  // namespace choquard
