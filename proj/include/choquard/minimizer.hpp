#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "choquard/functionals.hpp"

namespace choquard {

struct SolveConfig {
  double tol = 1e-8;        ///< relative tangential-gradient stopping threshold
  long max_iters = 50000;
  double step0 = 0.25;
  bool bb_steps = true;     ///< Barzilai-Borwein trial steps
  std::uint64_t seed = 0;   ///< consumed by randomized initializers
  double epsilon = 0.0;     ///< optional regularization of |u|^{s-2}u

  void validate() const;
};

struct IterRecord {
  double objective;         ///< kinetic + mass at the iterate
  double step;              ///< accepted step length that produced it
  double constraint_drift;  ///< |D(u) - 1|
};

struct SolveResult {
  Field w;                  ///< constrained minimizer, D(w) = 1
  double mp = 0.0;          ///< kinetic + mass of w
  Field u;                  ///< rescaled solution of the equation
  std::vector<IterRecord> trace;
  bool converged = false;
  long iterations = 0;      ///< accepted descent steps
  double constraint_drift = 0.0;    ///< |D(w) - 1| recomputed at exit
  double equation_residual = 0.0;   ///< relative residual of u
  Params params;
};

/// Scales u onto the constraint manifold D = 1: returns s·u with
/// s = D(u)^{-1/(p+q)}. Throws degenerate_field when D(u) is not positive.
Field project_to_constraint(const Field& u, const Params& params,
                            const KernelTable& kernel);

/// Minimizes kinetic + mass over the manifold D(u) = 1 by projected gradient
/// descent with backtracking (and optional Barzilai-Borwein trial steps).
/// Each iteration takes the absolute value of the iterate, which never
/// increases the objective and keeps the iterate nonnegative. Refuses
/// exponents outside the existence window.
SolveResult minimize_mp(const Field& init, const Params& params,
                        const KernelTable& kernel, const SolveConfig& cfg);

/// Euler-Lagrange rescaling w -> c·w with c = (mp/(p+q))^{1/(p+q-2)}, taking
/// the constrained minimizer to a solution of the equation. Requires
/// |D(w) - 1| <= 1e-8.
Field rescale_to_solution(const Field& w, double mp, const Params& params,
                          const KernelTable& kernel);

/// Whole-cell translation placing the point of maximal |u| at the cell
/// nearest the origin (the lower of the two central cells when n is even).
/// Ties in the maximum break toward the lexicographically smallest index;
/// values shifted out of the box are dropped. Returns the field and the
/// applied per-axis shift (new index = old index + shift).
std::pair<Field, IndexArray> recenter(const Field& u);

}  // namespace choquard
