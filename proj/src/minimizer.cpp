#include "choquard/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "choquard/diagnostics.hpp"

namespace choquard {

namespace {

constexpr double kStepFloor = 1e-14;
constexpr double kStepCeil = 1e6;

double objective(const Field& u) { return h1_normsq(u).total(); }

// Gradient of kinetic + mass in the h-weighted inner product.
Field objective_grad(const Field& u) {
  Field g = apply_h1_operator(u);
  for (double& v : g.data) v *= 2.0;
  return g;
}

}  // namespace

void SolveConfig::validate() const {
  if (!(tol > 0.0))
    throw Error(ErrorCode::invalid_config, "solver tol must be positive");
  if (max_iters < 1)
    throw Error(ErrorCode::invalid_config, "max_iters must be at least 1");
  if (!(step0 > 0.0))
    throw Error(ErrorCode::invalid_config, "step0 must be positive");
  if (epsilon < 0.0)
    throw Error(ErrorCode::invalid_config, "epsilon must be nonnegative");
}

Field project_to_constraint(const Field& u, const Params& params,
                            const KernelTable& kernel) {
  const double d = d_functional(u, params, kernel);
  if (!(d > 0.0) || !std::isfinite(d))
    throw Error(ErrorCode::degenerate_field,
                "cannot project a field with D(u) = 0 onto D = 1");
  const double s = std::pow(d, -1.0 / (params.p + params.q));
  return scaled(u, s);
}

SolveResult minimize_mp(const Field& init, const Params& params,
                        const KernelTable& kernel, const SolveConfig& cfg) {
  params.validate();
  cfg.validate();
  if (init.grid != kernel.grid())
    throw Error(ErrorCode::shape_mismatch,
                "initializer and kernel were built on different grids");

  const ClassifyResult cls = classify_exponents(params);
  if (cls.label != PhaseLabel::Exists) {
    std::ostringstream msg;
    msg << "exponents p+q = " << params.p + params.q
        << " fall outside the existence window (" << cls.lower << ", "
        << cls.upper << "); regime " << to_string(cls.label);
    throw Error(ErrorCode::refused_regime, msg.str());
  }
  if (cfg.epsilon <= 0.0 && !params.solver_admissible())
    throw Error(ErrorCode::nonsmooth_exponent,
                "solver requires p, q > 1 unless epsilon regularization is on");

  const double pq = params.p + params.q;

  // Nonnegativity and the constraint are established up front and maintained
  // every iteration: |u| never increases the centered-difference kinetic term
  // and leaves D untouched, and the multiplicative retraction is exact by the
  // degree-(p+q) homogeneity of D.
  Field u = project_to_constraint(abs_field(init), params, kernel);
  double J = objective(u);

  SolveResult result;
  result.params = params;
  result.trace.reserve(128);

  double tau = cfg.step0;
  double accepted_step = 0.0;
  bool have_prev = false;
  Field step_vec;  // u_{k+1} - u_k of the last accepted step

  for (long k = 0; k < cfg.max_iters; ++k) {
    RhsEval con = nonlinear_rhs_and_d(u, params, kernel, cfg.epsilon);
    result.trace.push_back({J, accepted_step, std::abs(con.d_value - 1.0)});

    const Field g = objective_grad(u);
    const double dd = dot_h(con.rhs, con.rhs);
    const double lambda_hat = dd > 0.0 ? dot_h(g, con.rhs) / dd : 0.0;
    const Field g_tan = lin_comb(1.0, g, -lambda_hat, con.rhs);
    const double res = norm_h(g_tan);
    if (res <= cfg.tol * std::sqrt(J)) {
      result.converged = true;
      break;
    }

    if (cfg.bb_steps && have_prev) {
      // Barzilai-Borwein: the objective Hessian is the fixed operator
      // 2(-Δ_h + 1), so y = 2 H s and <s,y> > 0 whenever s != 0.
      Field y = apply_h1_operator(step_vec);
      for (double& v : y.data) v *= 2.0;
      const double sy = dot_h(step_vec, y);
      if (sy > 0.0) tau = dot_h(step_vec, step_vec) / sy;
    }
    tau = std::clamp(tau, kStepFloor, kStepCeil);

    bool accepted = false;
    for (double t = tau; t >= kStepFloor; t *= 0.5) {
      Field trial = lin_comb(1.0, u, -t, g_tan);
      for (double& v : trial.data) v = std::abs(v);
      const double d_trial = d_functional(trial, params, kernel);
      if (!(d_trial > 0.0) || !std::isfinite(d_trial)) continue;
      Field candidate = scaled(trial, std::pow(d_trial, -1.0 / pq));
      const double J_new = objective(candidate);
      if (J_new < J) {
        step_vec = lin_comb(1.0, candidate, -1.0, u);
        have_prev = true;
        u = std::move(candidate);
        J = J_new;
        accepted_step = t;
        tau = t;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "no descent step accepted above " << kStepFloor
          << "; tangential residual " << res / std::sqrt(J)
          << " vs tol " << cfg.tol;
      throw Error(ErrorCode::stalled, msg.str());
    }
    ++result.iterations;
  }

  result.w = std::move(u);
  result.mp = J;
  result.constraint_drift =
      std::abs(d_functional(result.w, params, kernel) - 1.0);
  result.u = rescale_to_solution(result.w, result.mp, params, kernel);
  result.equation_residual =
      equation_residual(result.u, params, kernel, cfg.epsilon);
  return result;
}

Field rescale_to_solution(const Field& w, double mp, const Params& params,
                          const KernelTable& kernel) {
  params.validate();
  if (!(mp > 0.0) || !std::isfinite(mp))
    throw Error(ErrorCode::degenerate_field, "mp must be positive");
  const double d = d_functional(w, params, kernel);
  if (!(std::abs(d - 1.0) <= 1e-8)) {
    std::ostringstream msg;
    msg << "field is not on the constraint manifold: |D(w) - 1| = "
        << std::abs(d - 1.0);
    throw Error(ErrorCode::not_on_manifold, msg.str());
  }
  const double pq = params.p + params.q;
  const double c = std::pow(mp / pq, 1.0 / (pq - 2.0));
  return scaled(w, c);
}

std::pair<Field, IndexArray> recenter(const Field& u) {
  const Grid& g = u.grid;
  double best = 0.0;
  std::size_t best_flat = 0;
  bool found = false;
  // Flat ascending order is lexicographic in the multi-index, so the first
  // strict maximum realizes the tie-break rule.
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = std::abs(u[i]);
    if (v > best) {
      best = v;
      best_flat = i;
      found = true;
    }
  }
  if (!found)
    throw Error(ErrorCode::degenerate_field, "cannot recenter the zero field");

  const IndexArray peak = g.unflatten(best_flat);
  IndexArray shift{};
  const int center = (g.n() - 1) / 2;
  for (int a = 0; a < g.dim(); ++a) shift[a] = center - peak[a];
  return {shift_field(u, shift, false), shift};
}

}  // namespace choquard
