#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace abv {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

// Spectral parameter z off [0, inf) with kappa = sqrt(-z), Re kappa > 0.
struct Energy {
  cplx z;
  cplx kappa;

  static Energy from(cplx z);
  Energy conj() const;
  // Principal power kappa^p; unambiguous since Re kappa > 0.
  cplx kappa_pow(double p) const;
};

cplx kappa(cplx z);

struct BesselKOptions {
  double tol = 1e-12;
  int max_halvings = 10;
};

// K_mu(x) for complex order |Re mu| < 2 and Re x > 0.
cplx bessel_k(cplx mu, cplx x, const BesselKOptions& opt = {});

// K_{omega + i(t0 + j dt)}(x) for j = 0..n-1 on one shared trapezoid rule.
// Accuracy is absolute, measured against the largest value of the batch.
std::vector<cplx> bessel_k_batch(cplx omega, double t0, double dt, std::size_t n, cplx x);

// K_{i j dt}(x), j = 0..n-1, using evenness of the integrand.
std::vector<cplx> bessel_k_imag_batch(double dt, std::size_t n, cplx x);

cplx bessel_i(double nu, cplx x);
double bessel_j(double nu, double x);

// Power-series I_nu(x) split as (x/2)^nu / Gamma(nu+1) * series; returns
// {log of the prefactor, series value}. Used where I_nu underflows.
std::pair<cplx, cplx> bessel_i_scaled(double nu, cplx x);

// Coefficients of (x/2)^{-nu} and (x/2)^{nu} in the small-x expansion of K_nu.
std::pair<double, double> k_small_x_coefficients(double nu);

} // namespace abv
