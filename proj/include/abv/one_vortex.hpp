#pragma once

#include "abv/geometry.hpp"
#include "abv/special.hpp"

namespace abv {

// int K_{i tau}(kappa r) K_{-i tau}(kappa r0) e^{phi tau} sin(pi sigma) / (pi sin(pi(sigma + i tau))) dtau
// for |phi| < pi, by trapezoid refinement on the real tau-line.
cplx flux_kernel_integral(cplx kappa, double r, double r0, double phi, double sigma, double tol = 1e-12);

// Single vortex of flux alpha at the origin with cut along the negative x1-axis.
cplx green_one(const Energy& e, double alpha, const PlanePoint& x, const PlanePoint& x0, double tol = 1e-12);

struct PartialWaveResult {
  cplx value;
  double tail_bound;
  int terms;
};

// Angular-momentum sum truncated at |n| <= n_max, or earlier once three consecutive
// terms fall below 1e-14 of the running sum.
PartialWaveResult green_one_oracle(const Energy& e, double alpha, const PlanePoint& x, const PlanePoint& x0,
                                   int n_max);

// Form with the integral of K_0(kappa R(s)), R(s)^2 = r^2 + r0^2 + 2 r r0 cosh s.
cplx green_one_rs_oracle(const Energy& e, double alpha, const PlanePoint& x, const PlanePoint& x0,
                         double tol = 1e-11);

// which = -1: K_{1-alpha}(kappa r) e^{i(alpha-1)theta}; which = 0: K_alpha(kappa r) e^{i alpha theta}.
cplx deficiency_one(int which, const Energy& e, double alpha, const PlanePoint& x);

struct ResolventCheck {
  double residual;
  double tail_estimate;
};

// |psi_w(x) + (z - w) int_{|y|<R} G_z(x, y) psi_w(y) d^2y - (kappa_z/kappa_w)^{|nu|} psi_z(x)|.
ResolventCheck resolvent_map_check(int which, const Energy& z, const Energy& w, double alpha, const PlanePoint& x,
                                   double R, double tail_tol = 1e-5);

} // namespace abv
