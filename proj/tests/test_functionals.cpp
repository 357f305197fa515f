#include <cmath>

#include "doctest.h"

#include "choquard/functionals.hpp"
#include "test_support.hpp"

using namespace choquard;
using test_support::error_code_of;
using test_support::rel_err;

namespace {

const Params kP322{3, 2.0, 2.0, 2.0};

double fd_d_directional(const Field& u, const Field& phi, const Params& P,
                        const KernelTable& k, double eps) {
  const double dp = d_functional(lin_comb(1.0, u, eps, phi), P, k);
  const double dm = d_functional(lin_comb(1.0, u, -eps, phi), P, k);
  return (dp - dm) / (2.0 * eps);
}

double energy_of(const Field& u, const Params& P, const KernelTable& k) {
  return energy_and_grad(u, P, k).first.energy;
}

}  // namespace

TEST_CASE("h1_normsq of zero and of an interior spike") {
  const Grid g = build_grid(3, 8, 8.0);  // h = 1

  const Field zero(g);
  const H1Norm hz = h1_normsq(zero);
  CHECK(hz.kinetic == 0.0);
  CHECK(hz.mass == 0.0);

  Field spike(g);
  spike[g.flatten(IndexArray{4, 3, 4})] = 1.0;
  const H1Norm hs = h1_normsq(spike);
  CHECK(hs.mass == 1.0);
  // centered difference is 1/2 at each of the 6 neighbors
  CHECK(hs.kinetic == 1.5);
}

TEST_CASE("h1_normsq converges at second order for a gaussian") {
  const double k_exact = test_support::gaussian_kinetic_exact();
  const double m_exact = test_support::gaussian_mass_exact();

  double kin_err[2], mass_err[2];
  int i = 0;
  for (int n : {32, 64}) {
    const Grid g = build_grid(3, n, 16.0);
    const H1Norm h = h1_normsq(make_gaussian(g));
    kin_err[i] = rel_err(h.kinetic, k_exact);
    mass_err[i] = rel_err(h.mass, m_exact);
    ++i;
  }
  CHECK(mass_err[1] < 1e-10);  // midpoint rule is spectral on a gaussian
  CHECK(kin_err[1] < 0.05);
  const double ratio = kin_err[1] / kin_err[0];
  CHECK(ratio > 0.15);
  CHECK(ratio < 0.35);
}

TEST_CASE("summation by parts ties the laplacian to the kinetic term") {
  const Grid g = build_grid(3, 8, 5.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Field u = make_random(g, 40 + seed);
    const double quad = -dot_h(apply_laplacian(u), u);
    CHECK(rel_err(quad, h1_normsq(u).kinetic) < 1e-12);
  }
}

TEST_CASE("d_functional: zero field, homogeneity, two-spike hand sum") {
  const Grid g = build_grid(3, 8, 8.0);  // h = 1
  const KernelTable k(g, 2.0);

  CHECK(d_functional(Field(g), kP322, k) == 0.0);

  const Field u = make_random(g, 7);
  const double d1 = d_functional(u, kP322, k);
  const double d2 = d_functional(scaled(u, 2.0), kP322, k);
  CHECK(rel_err(d2, 16.0 * d1) < 1e-12);  // degree p+q = 4

  Field spikes(g);
  const IndexArray a{3, 3, 3};
  const IndexArray b{5, 3, 3};
  spikes[g.flatten(a)] = 1.0;
  spikes[g.flatten(b)] = 1.0;
  const double k0 = k.origin_value();
  IndexArray off{};
  off[0] = 2;
  const double k2 = k.value_at_offset(off);
  // four-term double sum: pairs (a,a), (a,b), (b,a), (b,b)
  CHECK(rel_err(d_functional(spikes, kP322, k), 2.0 * (k0 + k2)) < 1e-12);
}

TEST_CASE("d_functional exchange symmetry for p != q") {
  const Grid g = build_grid(3, 6, 4.0);
  const KernelTable k(g, 1.2);
  Params P = kP322;
  P.p = 2.6;
  P.q = 1.4;
  Params Pswap = P;
  std::swap(Pswap.p, Pswap.q);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Field u = make_random(g, 900 + seed);
    CHECK(rel_err(d_functional(u, P, k), d_functional(u, Pswap, k)) < 1e-12);
  }
}

TEST_CASE("translation equivariance of the functionals") {
  const Grid g = build_grid(3, 16, 8.0);
  const KernelTable k(g, 2.0);
  const Field bump = make_bump(g, 1.5, 1.0, IndexArray{-2, 0, 1});
  const Field moved = shift_field(bump, IndexArray{3, -1, 0}, true);

  const H1Norm h0 = h1_normsq(bump);
  const H1Norm h1 = h1_normsq(moved);
  CHECK(rel_err(h1.kinetic, h0.kinetic) < 1e-12);
  CHECK(rel_err(h1.mass, h0.mass) < 1e-12);
  CHECK(rel_err(d_functional(moved, kP322, k), d_functional(bump, kP322, k)) <
        1e-12);
}

TEST_CASE("nonlinear_rhs basics") {
  const Grid g = build_grid(3, 6, 4.0);
  const KernelTable k(g, 2.0);

  SUBCASE("zero field maps to zero") {
    const Field rhs = nonlinear_rhs(Field(g), kP322, k);
    for (std::size_t i = 0; i < rhs.size(); ++i) CHECK(rhs[i] == 0.0);
  }

  SUBCASE("p = q collapses to 2p (I*|u|^p)|u|^{p-2}u exactly") {
    const Field u = make_random(g, 11);
    const Field rhs = nonlinear_rhs(u, kP322, k);
    const Field conv = riesz_convolve(
        [&] {
          Field up(g);
          for (std::size_t i = 0; i < u.size(); ++i) up[i] = u[i] * u[i];
          return up;
        }(),
        k);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double manual = 2.0 * (kP322.p * conv[i] * u[i]);
      CHECK(rhs[i] == manual);
    }
  }

  SUBCASE("nonsmooth exponents are refused without regularization") {
    Params P = kP322;
    P.q = 1.0;
    const Field u = make_random(g, 3);
    CHECK(error_code_of([&] { nonlinear_rhs(u, P, k); }) ==
          ErrorCode::nonsmooth_exponent);
    CHECK_NOTHROW(nonlinear_rhs(u, P, k, 1e-3));
  }
}

TEST_CASE("nonlinear_rhs is the directional derivative of d_functional") {
  const Grid g = build_grid(3, 8, 6.0);
  const KernelTable k(g, 2.0);
  const double eps = 1e-5;

  Params cases[] = {kP322, Params{3, 2.0, 2.5, 1.5}};
  for (const Params& P : cases) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Field u = make_random(g, 60 + seed);
      const Field phi = make_random(g, 80 + seed);
      const double fd = fd_d_directional(u, phi, P, k, eps);
      const double an = dot_h(nonlinear_rhs(u, P, k), phi);
      CHECK(rel_err(an, fd) < 1e-5);
    }
  }
}

TEST_CASE("energy_and_grad identities") {
  const Grid g = build_grid(3, 8, 6.0);
  const KernelTable k(g, 2.0);

  SUBCASE("zero field") {
    auto [eb, grad] = energy_and_grad(Field(g), kP322, k);
    CHECK(eb.energy == 0.0);
    for (std::size_t i = 0; i < grad.size(); ++i) CHECK(grad[i] == 0.0);
  }

  SUBCASE("<grad, u> = K + M - (p+q) D") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Field u = make_random(g, 500 + seed);
      auto [eb, grad] = energy_and_grad(u, kP322, k);
      const double lhs = dot_h(grad, u);
      const double rhs =
          eb.kinetic + eb.mass - (kP322.p + kP322.q) * eb.nonlocal;
      const double scale = eb.kinetic + eb.mass +
                           (kP322.p + kP322.q) * eb.nonlocal;
      CHECK(std::abs(lhs - rhs) / scale < 1e-10);
    }
  }

  SUBCASE("energy field is stored exactly as (K+M)/2 - D") {
    const Field u = make_random(g, 77);
    auto [eb, grad] = energy_and_grad(u, kP322, k);
    CHECK(eb.energy == 0.5 * (eb.kinetic + eb.mass) - eb.nonlocal);
  }

  SUBCASE("gradient against central finite differences of E") {
    const Field u = make_random(g, 123);
    auto [eb, grad] = energy_and_grad(u, kP322, k);
    const double eps = 1e-5;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Field phi = make_random(g, 300 + seed);
      const double fd = (energy_of(lin_comb(1.0, u, eps, phi), kP322, k) -
                         energy_of(lin_comb(1.0, u, -eps, phi), kP322, k)) /
                        (2.0 * eps);
      CHECK(rel_err(dot_h(grad, phi), fd) < 1e-5);
    }
  }
}

TEST_CASE("homogeneity of D for varied exponents") {
  const Grid g = build_grid(3, 6, 4.0);
  const KernelTable k(g, 1.6);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Params P = kP322;
    P.p = 1.2 + 0.3 * static_cast<double>(seed);
    P.q = 2.7 - 0.2 * static_cast<double>(seed);
    const Field u = make_random(g, 42 + seed);
    const double s = 0.4 + 0.5 * static_cast<double>(seed);
    const double lhs = d_functional(scaled(u, s), P, k);
    const double rhs = std::pow(s, P.p + P.q) * d_functional(u, P, k);
    CHECK(rel_err(lhs, rhs) < 1e-12);
  }
}
