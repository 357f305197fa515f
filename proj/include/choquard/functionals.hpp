#pragma once

#include <utility>

#include "choquard/field.hpp"
#include "choquard/spectral_core.hpp"

namespace choquard {

struct H1Norm {
  double kinetic = 0.0;  ///< Σ |∇_h u|² h^N, centered differences
  double mass = 0.0;     ///< Σ u² h^N
  double total() const noexcept { return kinetic + mass; }
};

/// K, M, D and the energy E = (K + M)/2 - D of one field.
struct EnergyBreakdown {
  double kinetic = 0.0;
  double mass = 0.0;
  double nonlocal = 0.0;
  double energy = 0.0;
};

/// Discrete H¹ seminorm pieces. The gradient is the second-order centered
/// difference of the zero-extended field, summed over every point where it
/// is nonzero (grid points plus the half-outside ghost points per axis).
H1Norm h1_normsq(const Field& u);

/// Δ_h u with the stencil (u_{i+2} - 2 u_i + u_{i-2}) / (4h²) per axis and
/// zero values outside the box. This is exactly the operator whose quadratic
/// form is h1_normsq's kinetic term: <-Δ_h u, u>_h = kinetic (summation by
/// parts), and its homogeneous Dirichlet closure keeps states away from the
/// artificial boundary.
Field apply_laplacian(const Field& u);

/// (-Δ_h + 1) u.
Field apply_h1_operator(const Field& u);

/// D(u) = h^N Σ (I_α∗|u|^p)(x_i) |u(x_i)|^q, nonnegative, homogeneous of
/// degree p+q.
double d_functional(const Field& u, const Params& params,
                    const KernelTable& kernel);

/// q (I_α∗|u|^p) |u|^{q-2}u + p (I_α∗|u|^q) |u|^{p-2}u, the Gâteaux
/// derivative of d_functional. |u|^{s-2}u means sign(u)|u|^{s-1}, zero where
/// u vanishes; with epsilon > 0 the factor becomes (u²+ε²)^{(s-2)/2} u and
/// exponents at or below one are admitted.
Field nonlinear_rhs(const Field& u, const Params& params,
                    const KernelTable& kernel, double epsilon = 0.0);

struct RhsEval {
  Field rhs;
  double d_value = 0.0;
};

/// nonlinear_rhs and d_functional sharing one convolution pass.
RhsEval nonlinear_rhs_and_d(const Field& u, const Params& params,
                            const KernelTable& kernel, double epsilon = 0.0);

/// Energy E(u) = (K + M)/2 - D(u) together with its L²_h gradient
/// grad = (-Δ_h + 1) u - nonlinear_rhs(u).
std::pair<EnergyBreakdown, Field> energy_and_grad(const Field& u,
                                                  const Params& params,
                                                  const KernelTable& kernel,
                                                  double epsilon = 0.0);

/// ||(-Δ_h + 1) u - nonlinear_rhs(u)||_h / ||u||_{H¹}.
double equation_residual(const Field& u, const Params& params,
                         const KernelTable& kernel, double epsilon = 0.0);

}  // namespace choquard
