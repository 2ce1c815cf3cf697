#include "abv/special.hpp"

#include "abv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abv {

cplx kappa(cplx z) {
  if (z.imag() == 0.0 && z.real() >= 0.0)
    fail(ErrorCode::SpectralParameterOnCut, "z must avoid [0, inf)");
  cplx k = std::sqrt(-z);
  if (k.real() < 0.0) k = -k;
  return k;
}

Energy Energy::from(cplx z) { return Energy{z, abv::kappa(z)}; }

Energy Energy::conj() const { return Energy{std::conj(z), std::conj(kappa)}; }

cplx Energy::kappa_pow(double p) const { return std::exp(p * std::log(kappa)); }

namespace {

void check_k_domain(cplx mu, cplx x) {
  if (!(x.real() > 0.0)) fail(ErrorCode::ArgumentLeftHalfPlane, "K_mu needs Re x > 0");
  if (x.real() < 1e-8 * std::abs(x)) fail(ErrorCode::ArgumentNearImaginaryAxis, "arg x within 1e-8 of +-pi/2");
  if (!(std::abs(mu.real()) < 2.0)) fail(ErrorCode::OrderOutOfStrip, "|Re mu| must stay below 2");
}

// Range [lo, hi] outside which |exp(-x cosh(t + i g) + w t)| drops 45 e-folds below its peak.
std::pair<double, double> integrand_support(cplx x, double g, double w) {
  auto logf = [&](double t) { return -(x * std::cosh(cplx(t, g))).real() + w * t; };
  double peak = logf(0.0);
  const double step = 0.1;
  double hi = 0.0;
  for (;;) {
    hi += step;
    double v = logf(hi);
    peak = std::max(peak, v);
    if (v < peak - 45.0 && logf(hi - step) > v) break;
    if (hi > 800.0) break;
  }
  double lo = 0.0;
  for (;;) {
    lo -= step;
    double v = logf(lo);
    peak = std::max(peak, v);
    if (v < peak - 45.0 && logf(lo + step) > v) break;
    if (lo < -800.0) break;
  }
  return {lo, hi};
}

} // namespace

cplx bessel_k(cplx mu, cplx x, const BesselKOptions& opt) {
  check_k_domain(mu, x);
  if (mu.imag() < 0.0) mu = -mu;
  const double tau = mu.imag();
  const double om = mu.real();
  const double Phi = pi / 2 - std::abs(std::arg(x));
  // Contour shift t -> t + i g trades the e^{-tau g} factor against cancellation.
  const double g = tau > 0.0 ? std::max(0.0, Phi - 4.6 / tau) : 0.0;
  const double d = 0.9 * (Phi - g);
  const double logtol = -std::log(opt.tol);
  double h = 2 * pi * d / (tau * (d + Phi - g) + logtol + 5.0 + std::abs(x) * (1.0 - std::cos(d)));
  h = std::min(h, 0.5);

  auto [lo, hi] = integrand_support(x, g, om);
  auto F = [&](double t) { return std::exp(-x * std::cosh(cplx(t, g)) + mu * t); };

  long k_lo = static_cast<long>(std::floor(lo / h));
  long k_hi = static_cast<long>(std::ceil(hi / h));
  cplx sum = 0.0;
  double mag = 0.0;
  for (long k = k_lo; k <= k_hi; ++k) {
    cplx f = F(k * h);
    sum += f;
    mag += std::abs(f);
  }
  cplx est = h * sum;
  for (int level = 0; level < opt.max_halvings; ++level) {
    cplx mid = 0.0;
    for (long k = k_lo; k < k_hi; ++k) {
      cplx f = F((k + 0.5) * h);
      mid += f;
      mag += std::abs(f);
    }
    sum += mid;
    h *= 0.5;
    k_lo *= 2;
    k_hi *= 2;
    cplx next = h * sum;
    double diff = std::abs(next - est);
    est = next;
    double floor_err = 64.0 * std::numeric_limits<double>::epsilon() * mag * h;
    if (diff <= std::max(opt.tol * std::abs(next), floor_err)) {
      return 0.5 * std::exp(I * mu * g) * est;
    }
  }
  fail(ErrorCode::NonConvergent, "bessel_k trapezoid refinement exhausted");
}

namespace {

// acc_j = sum_k F_k p_k^j where p_k = e^{i a_k}. Real-part mode keeps Re(p^j) only.
void rotate_accumulate(const std::vector<double>& Fr, const std::vector<double>& Fi,
                       const std::vector<double>& rr, const std::vector<double>& ri, std::size_t n,
                       bool real_part_only, std::vector<cplx>& out) {
  const std::size_t m = Fr.size();
  std::vector<double> pr(m, 1.0), pi_(m, 0.0);
  out.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double ar[4] = {0, 0, 0, 0}, ai[4] = {0, 0, 0, 0};
    std::size_t k = 0;
    if (real_part_only) {
      for (; k + 4 <= m; k += 4)
        for (int l = 0; l < 4; ++l) {
          ar[l] += Fr[k + l] * pr[k + l];
          ai[l] += Fi[k + l] * pr[k + l];
        }
      for (; k < m; ++k) {
        ar[0] += Fr[k] * pr[k];
        ai[0] += Fi[k] * pr[k];
      }
    } else {
      for (; k + 4 <= m; k += 4)
        for (int l = 0; l < 4; ++l) {
          ar[l] += Fr[k + l] * pr[k + l] - Fi[k + l] * pi_[k + l];
          ai[l] += Fr[k + l] * pi_[k + l] + Fi[k + l] * pr[k + l];
        }
      for (; k < m; ++k) {
        ar[0] += Fr[k] * pr[k] - Fi[k] * pi_[k];
        ai[0] += Fr[k] * pi_[k] + Fi[k] * pr[k];
      }
    }
    out[j] = cplx((ar[0] + ar[1]) + (ar[2] + ar[3]), (ai[0] + ai[1]) + (ai[2] + ai[3]));
    for (std::size_t q = 0; q < m; ++q) {
      double nr = pr[q] * rr[q] - pi_[q] * ri[q];
      double ni = pr[q] * ri[q] + pi_[q] * rr[q];
      pr[q] = nr;
      pi_[q] = ni;
    }
  }
}

double batch_step(cplx x, double taumax) {
  const double Phi = pi / 2 - std::abs(std::arg(x));
  const double d = 0.9 * Phi;
  double h = 2 * pi * d / (taumax * d + 40.0 + std::abs(x) * (1.0 - std::cos(d)));
  return std::min(h, 0.5);
}

} // namespace

std::vector<cplx> bessel_k_batch(cplx omega, double t0, double dt, std::size_t n, cplx x) {
  if (n == 0) return {};
  check_k_domain(omega + I * t0, x);
  const double taumax = std::max(std::abs(t0), std::abs(t0 + (n - 1) * dt));
  const double h = batch_step(x, taumax);
  auto [lo, hi] = integrand_support(x, 0.0, omega.real());
  long k_lo = static_cast<long>(std::floor(lo / h));
  long k_hi = static_cast<long>(std::ceil(hi / h));
  std::vector<double> Fr, Fi, rr, ri;
  const cplx start = omega + I * t0;
  for (long k = k_lo; k <= k_hi; ++k) {
    double t = k * h;
    cplx f = std::exp(-x * std::cosh(t) + start * t);
    Fr.push_back(f.real());
    Fi.push_back(f.imag());
    rr.push_back(std::cos(dt * t));
    ri.push_back(std::sin(dt * t));
  }
  std::vector<cplx> out;
  rotate_accumulate(Fr, Fi, rr, ri, n, false, out);
  for (auto& v : out) v *= 0.5 * h;
  return out;
}

std::vector<cplx> bessel_k_imag_batch(double dt, std::size_t n, cplx x) {
  if (n == 0) return {};
  check_k_domain(cplx(0.0, dt * (n - 1)), x);
  const double h = batch_step(x, dt * (n - 1));
  auto [lo, hi] = integrand_support(x, 0.0, 0.0);
  (void)lo;
  long k_hi = static_cast<long>(std::ceil(hi / h));
  std::vector<double> Fr, Fi, rr, ri;
  for (long k = 0; k <= k_hi; ++k) {
    double t = k * h;
    cplx f = std::exp(-x * std::cosh(t)) * (k == 0 ? 0.5 : 1.0);
    Fr.push_back(f.real());
    Fi.push_back(f.imag());
    rr.push_back(std::cos(dt * t));
    ri.push_back(std::sin(dt * t));
  }
  std::vector<cplx> out;
  rotate_accumulate(Fr, Fi, rr, ri, n, true, out);
  for (auto& v : out) v *= h;
  return out;
}

std::pair<cplx, cplx> bessel_i_scaled(double nu, cplx x) {
  const cplx q = 0.25 * x * x;
  cplx term = 1.0, sum = 1.0;
  for (int k = 1; k < 100000; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > 2) break;
  }
  cplx logpre = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0);
  return {logpre, sum};
}

cplx bessel_i(double nu, cplx x) {
  if (nu < 0.0) fail(ErrorCode::InvalidArgument, "bessel_i needs nu >= 0");
  if (x.real() < 0.0) fail(ErrorCode::ArgumentLeftHalfPlane, "bessel_i needs Re x >= 0");
  if (x == cplx(0.0)) return nu == 0.0 ? 1.0 : 0.0;
  const double ax = std::abs(x);
  if (ax > 30.0 + nu * nu && x.real() > 0.5 * ax) {
    // Large-argument expansion; the e^{-x} companion is below double precision here.
    const double mu4 = 4.0 * nu * nu;
    cplx term = 1.0, sum = 1.0;
    double last = 1.0;
    for (int k = 1; k < 200; ++k) {
      double odd = 2.0 * k - 1.0;
      term *= -(mu4 - odd * odd) / (8.0 * k * x);
      double a = std::abs(term);
      if (a > last) break;
      sum += term;
      last = a;
      if (a < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(x) / std::sqrt(2.0 * pi * x) * sum;
  }
  auto [logpre, series] = bessel_i_scaled(nu, x);
  return std::exp(logpre) * series;
}

double bessel_j(double nu, double x) {
  if (nu < 0.0 || x < 0.0) fail(ErrorCode::InvalidArgument, "bessel_j needs nu >= 0 and x >= 0");
  return std::cyl_bessel_j(nu, x);
}

std::pair<double, double> k_small_x_coefficients(double nu) {
  if (!(nu > 0.0 && nu < 1.0)) fail(ErrorCode::OrderOutOfStrip, "small-x coefficients need 0 < nu < 1");
  return {0.5 * std::tgamma(nu), -std::tgamma(1.0 - nu) / (2.0 * nu)};
}

} // namespace abv
