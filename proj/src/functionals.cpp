#include "choquard/functionals.hpp"

#include <cmath>

namespace choquard {

namespace {

// |v|^s with 0^s = 0.
inline double abs_pow(double v, double s) {
  if (v == 0.0) return 0.0;
  if (s == 1.0) return std::abs(v);
  if (s == 2.0) return v * v;
  return std::pow(std::abs(v), s);
}

// |v|^{s-2} v = sign(v) |v|^{s-1}; with eps > 0 the regularized
// (v² + ε²)^{(s-2)/2} v, defined for any s > 0.
inline double grad_factor(double v, double s, double eps) {
  if (eps > 0.0) return std::pow(v * v + eps * eps, 0.5 * (s - 2.0)) * v;
  if (v == 0.0) return 0.0;
  if (s == 2.0) return v;
  return std::copysign(std::pow(std::abs(v), s - 1.0), v);
}

Field pow_field(const Field& u, double s) {
  Field out(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = abs_pow(u[i], s);
  return out;
}

void require_rhs_admissible(const Params& params, double epsilon) {
  params.validate();
  if (epsilon <= 0.0 && !params.solver_admissible())
    throw Error(ErrorCode::nonsmooth_exponent,
                "|u|^{s-2}u needs p, q > 1; enable the epsilon regularization "
                "to explore smaller exponents");
}

}  // namespace

H1Norm h1_normsq(const Field& u) {
  const Grid& g = u.grid;
  const double inv2h = 1.0 / (2.0 * g.h());
  const std::size_t total = g.total_points();
  const std::size_t n = static_cast<std::size_t>(g.n());

  double kinetic = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const std::size_t s = g.stride(a);
    for (std::size_t i = 0; i < total; ++i) {
      const std::size_t ia = (i / s) % n;
      const double up = ia + 1 < n ? u[i + s] : 0.0;
      const double dn = ia >= 1 ? u[i - s] : 0.0;
      const double d = (up - dn) * inv2h;
      kinetic += d * d;
      // The gradient of the zero-extended field is also nonzero at the two
      // half-outside points per axis; dropping those samples would let mass
      // hug the wall at half the kinetic cost.
      if (ia == 0 || ia + 1 == n) {
        const double ghost = u[i] * inv2h;
        kinetic += ghost * ghost;
      }
    }
  }

  double mass = 0.0;
  for (std::size_t i = 0; i < total; ++i) mass += u[i] * u[i];

  const double vol = g.cell_volume();
  return H1Norm{kinetic * vol, mass * vol};
}

Field apply_laplacian(const Field& u) {
  const Grid& g = u.grid;
  Field out(g);
  const double inv4h2 = 1.0 / (4.0 * g.h() * g.h());
  const std::size_t total = g.total_points();
  const std::size_t n = static_cast<std::size_t>(g.n());
  for (int a = 0; a < g.dim(); ++a) {
    const std::size_t s = g.stride(a);
    for (std::size_t i = 0; i < total; ++i) {
      const std::size_t ia = (i / s) % n;
      double acc = -2.0 * u[i];
      if (ia + 2 < n) acc += u[i + 2 * s];
      if (ia >= 2) acc += u[i - 2 * s];
      out[i] += acc * inv4h2;
    }
  }
  return out;
}

Field apply_h1_operator(const Field& u) {
  Field out = apply_laplacian(u);
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - out[i];
  return out;
}

double d_functional(const Field& u, const Params& params,
                    const KernelTable& kernel) {
  params.validate();
  const Field conv = riesz_convolve(pow_field(u, params.p), kernel);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    acc += conv[i] * abs_pow(u[i], params.q);
  return acc * u.grid.cell_volume();
}

RhsEval nonlinear_rhs_and_d(const Field& u, const Params& params,
                            const KernelTable& kernel, double epsilon) {
  require_rhs_admissible(params, epsilon);
  const Field conv_p = riesz_convolve(pow_field(u, params.p), kernel);
  Field conv_q_storage;
  if (params.p != params.q)
    conv_q_storage = riesz_convolve(pow_field(u, params.q), kernel);
  // For p == q the two terms coincide, collapsing to 2p (I∗|u|^p)|u|^{p-2}u.
  const Field& conv_q = params.p == params.q ? conv_p : conv_q_storage;

  RhsEval ev;
  ev.rhs = Field(u.grid);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += conv_p[i] * abs_pow(u[i], params.q);
    ev.rhs[i] = params.q * conv_p[i] * grad_factor(u[i], params.q, epsilon) +
                params.p * conv_q[i] * grad_factor(u[i], params.p, epsilon);
  }
  ev.d_value = acc * u.grid.cell_volume();
  return ev;
}

Field nonlinear_rhs(const Field& u, const Params& params,
                    const KernelTable& kernel, double epsilon) {
  return nonlinear_rhs_and_d(u, params, kernel, epsilon).rhs;
}

std::pair<EnergyBreakdown, Field> energy_and_grad(const Field& u,
                                                  const Params& params,
                                                  const KernelTable& kernel,
                                                  double epsilon) {
  RhsEval ev = nonlinear_rhs_and_d(u, params, kernel, epsilon);
  const H1Norm h1 = h1_normsq(u);

  EnergyBreakdown eb;
  eb.kinetic = h1.kinetic;
  eb.mass = h1.mass;
  eb.nonlocal = ev.d_value;
  eb.energy = 0.5 * (eb.kinetic + eb.mass) - eb.nonlocal;

  Field grad = apply_h1_operator(u);
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] -= ev.rhs[i];
  return {eb, std::move(grad)};
}

double equation_residual(const Field& u, const Params& params,
                         const KernelTable& kernel, double epsilon) {
  auto [eb, grad] = energy_and_grad(u, params, kernel, epsilon);
  const double denom = std::sqrt(eb.kinetic + eb.mass);
  if (denom == 0.0) return 0.0;
  return norm_h(grad) / denom;
}

}  // namespace choquard
