#pragma once

#include <functional>
#include <span>
#include <vector>

#include "choquard/functionals.hpp"

namespace choquard {

/// Existence/nonexistence regime of (N, α, p, q). The open window
/// 2(N+α)/N < p+q < 2(N+α)/(N-2) admits a ground state; outside the closed
/// complement only the trivial solution exists, with the two equalities kept
/// as distinct critical labels so the solver can refuse them explicitly.
enum class PhaseLabel {
  Exists,
  NonexistSubcritical,
  NonexistSupercritical,
  CriticalLower,
  CriticalUpper,
};

const char* to_string(PhaseLabel label);

struct ClassifyResult {
  PhaseLabel label;
  double a1;     ///< (N-2)/2 - (N+α)/(p+q)
  double a2;     ///< N/2 - (N+α)/(p+q)
  double lower;  ///< 2(N+α)/N
  double upper;  ///< 2(N+α)/(N-2)
};

ClassifyResult classify_exponents(const Params& params);

/// Integral identity residuals of a field. For a true solution both the
/// scaling identity (N-2)/2·K + N/2·M - (N+α)·D and the Nehari identity
/// K + M - (p+q)·D vanish. Residuals are normalized by K + M so they are
/// scale-free; a zero field reports zero residuals.
struct IdentityReport {
  double kinetic = 0.0;
  double mass = 0.0;
  double nonlocal = 0.0;
  double pohozaev = 0.0;
  double nehari = 0.0;
  double pohozaev_normalized = 0.0;
  double nehari_normalized = 0.0;
};

IdentityReport pohozaev_residual(const Field& u, const Params& params,
                                 const KernelTable& kernel);

/// Normalized Nehari residual (K + M - (p+q)D) / (K + M).
double nehari_residual(const Field& u, const Params& params,
                       const KernelTable& kernel);

/// Splitting defect |D(w + v(·-z)) - D(v(·-z)) - D(w)| for each shift z.
/// For separated bumps the defect is the cross-interaction, decaying like
/// |z|^{α-N}. Shifting a nonzero value out of the box raises
/// shift_out_of_range.
std::vector<double> brezis_lieb_defect(const Field& w, const Field& v,
                                       const std::vector<IndexArray>& shifts,
                                       const Params& params,
                                       const KernelTable& kernel);

struct VanishPoint {
  double lambda;
  double d_value;
};

/// Mass-spreading experiment: builds v_λ(x) = λ^{N/2} g(λ|x|) from a radial
/// profile g supported in [0, support_radius] and returns D(v_λ) for each λ
/// in (0, 1]. The exact scaling gives D(v_λ) = λ^{N(p+q)/2-(N+α)} D(v_1), so
/// the log-log slope flips sign at p+q = 2(N+α)/N. Raises grid_too_small
/// when support_radius/min(λ) exceeds the box half-width.
std::vector<VanishPoint> vanishing_decay_test(
    const std::function<double(double)>& profile, double support_radius,
    const std::vector<double>& lambdas, const Params& params,
    const KernelTable& kernel);

/// Least-squares slope of log(y) against log(x); x and y must be positive.
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace choquard
