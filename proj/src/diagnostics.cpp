#include "choquard/diagnostics.hpp"

#include <cmath>
#include <sstream>

namespace choquard {

const char* to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::Exists: return "Exists";
    case PhaseLabel::NonexistSubcritical: return "NonexistSubcritical";
    case PhaseLabel::NonexistSupercritical: return "NonexistSupercritical";
    case PhaseLabel::CriticalLower: return "CriticalLower";
    case PhaseLabel::CriticalUpper: return "CriticalUpper";
  }
  return "unknown";
}

ClassifyResult classify_exponents(const Params& params) {
  params.validate();
  const double s = params.p + params.q;
  const double na = static_cast<double>(params.N) + params.alpha;

  ClassifyResult r;
  r.lower = 2.0 * na / static_cast<double>(params.N);
  r.upper = 2.0 * na / static_cast<double>(params.N - 2);
  r.a1 = 0.5 * (params.N - 2) - na / s;
  r.a2 = 0.5 * params.N - na / s;

  if (s < r.lower)
    r.label = PhaseLabel::NonexistSubcritical;
  else if (s == r.lower)
    r.label = PhaseLabel::CriticalLower;
  else if (s > r.upper)
    r.label = PhaseLabel::NonexistSupercritical;
  else if (s == r.upper)
    r.label = PhaseLabel::CriticalUpper;
  else
    r.label = PhaseLabel::Exists;
  return r;
}

IdentityReport pohozaev_residual(const Field& u, const Params& params,
                                 const KernelTable& kernel) {
  params.validate();
  const H1Norm h1 = h1_normsq(u);

  IdentityReport r;
  r.kinetic = h1.kinetic;
  r.mass = h1.mass;
  r.nonlocal = d_functional(u, params, kernel);
  r.pohozaev = 0.5 * (params.N - 2) * r.kinetic + 0.5 * params.N * r.mass -
               (params.N + params.alpha) * r.nonlocal;
  r.nehari = r.kinetic + r.mass - (params.p + params.q) * r.nonlocal;

  const double denom = r.kinetic + r.mass;
  if (denom > 0.0) {
    r.pohozaev_normalized = r.pohozaev / denom;
    r.nehari_normalized = r.nehari / denom;
  }
  return r;
}

double nehari_residual(const Field& u, const Params& params,
                       const KernelTable& kernel) {
  return pohozaev_residual(u, params, kernel).nehari_normalized;
}

std::vector<double> brezis_lieb_defect(const Field& w, const Field& v,
                                       const std::vector<IndexArray>& shifts,
                                       const Params& params,
                                       const KernelTable& kernel) {
  if (w.grid != v.grid)
    throw Error(ErrorCode::shape_mismatch, "bumps live on different grids");

  const double d_w = d_functional(w, params, kernel);
  std::vector<double> defects;
  defects.reserve(shifts.size());
  for (const IndexArray& z : shifts) {
    const Field v_z = shift_field(v, z, /*strict=*/true);
    const Field sum = lin_comb(1.0, w, 1.0, v_z);
    const double d_sum = d_functional(sum, params, kernel);
    const double d_vz = d_functional(v_z, params, kernel);
    defects.push_back(std::abs(d_sum - d_vz - d_w));
  }
  return defects;
}

std::vector<VanishPoint> vanishing_decay_test(
    const std::function<double(double)>& profile, double support_radius,
    const std::vector<double>& lambdas, const Params& params,
    const KernelTable& kernel) {
  params.validate();
  if (!(support_radius > 0.0))
    throw Error(ErrorCode::grid_too_small, "profile support radius must be positive");
  double lambda_min = 1.0;
  for (double l : lambdas) {
    if (!(l > 0.0) || l > 1.0)
      throw Error(ErrorCode::invalid_exponent, "lambdas must lie in (0, 1]");
    lambda_min = std::min(lambda_min, l);
  }

  const Grid& g = kernel.grid();
  if (support_radius / lambda_min > 0.5 * g.L()) {
    std::ostringstream msg;
    msg << "support radius " << support_radius << " dilated by 1/"
        << lambda_min << " exceeds the box half-width " << 0.5 * g.L();
    throw Error(ErrorCode::grid_too_small, msg.str());
  }

  const double half_n = 0.5 * g.dim();
  std::vector<VanishPoint> out;
  out.reserve(lambdas.size());
  IndexArray idx{};
  std::array<double, kMaxDim> x{};
  for (double lambda : lambdas) {
    const double amp = std::pow(lambda, half_n);
    Field v(g);
    idx = IndexArray{};
    for (std::size_t i = 0; i < g.total_points(); ++i) {
      g.coords(idx, x);
      double r2 = 0.0;
      for (int a = 0; a < g.dim(); ++a) r2 += x[a] * x[a];
      const double r = lambda * std::sqrt(r2);
      v[i] = r <= support_radius ? amp * profile(r) : 0.0;
      for (int a = g.dim() - 1; a >= 0; --a) {
        if (++idx[a] < g.n()) break;
        idx[a] = 0;
      }
    }
    out.push_back({lambda, d_functional(v, params, kernel)});
  }
  return out;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::invalid_config, "slope fit needs matching samples");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw Error(ErrorCode::invalid_config, "slope fit needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

}  // namespace choquard
