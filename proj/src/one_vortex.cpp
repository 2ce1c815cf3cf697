#include "abv/one_vortex.hpp"

#include "abv/errors.hpp"
#include "abv/plane_quadrature.hpp"
#include "abv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abv {

namespace {

const VortexPair single_cfg{0.0, 0.0, std::numeric_limits<double>::infinity()};

double magnitude_decay(cplx kappa, double phi) {
  return (pi - 2.0 * std::abs(std::arg(kappa))) + (pi - std::abs(phi));
}

} // namespace

cplx flux_kernel_integral(cplx kappa, double r, double r0, double phi, double sigma, double tol) {
  if (sigma <= 0.0 || sigma >= 1.0) return 0.0;
  // |phi| = pi (up to rounding) is the ray from x0 through the vortex; the decay check below covers it.
  if (!(std::abs(phi) < pi + 1e-9)) fail(ErrorCode::InvalidArgument, "flux kernel integral needs |phi| <= pi");
  phi = std::clamp(phi, -pi, pi);
  const cplx x = kappa * r, x0 = kappa * r0;
  const double d = std::min(sigma, 1.0 - sigma);
  const double grow = std::log(std::max(1.0, 2.0 / std::abs(x))) + std::log(std::max(1.0, 2.0 / std::abs(x0)));
  const double logtol = std::log(1.0 / tol);
  double h = std::min(0.25, 2 * pi * d / (logtol + 3.0 + d * grow));
  const double rate = magnitude_decay(kappa, phi);
  if (!(rate > 0.05)) fail(ErrorCode::NonConvergent, "integrand decays too slowly in tau");
  double T = (logtol + 8.0) / rate + 2.0;

  for (int attempt = 0; attempt < 6; ++attempt) {
    const double hf = 0.5 * h;
    const std::size_t m = static_cast<std::size_t>(std::ceil(T / hf));
    if (m > 40000) break;
    auto kx = bessel_k_imag_batch(hf, m + 1, x);
    auto k0 = bessel_k_imag_batch(hf, m + 1, x0);
    cplx fine = 0.0, coarse = 0.0;
    double l1 = 0.0, edge = 0.0;
    for (std::size_t j = 0; j <= m; ++j) {
      for (int sgn : {1, -1}) {
        if (j == 0 && sgn < 0) continue;
        const double tau = sgn * static_cast<double>(j) * hf;
        const cplx v = kx[j] * k0[j] * std::exp(phi * tau) * flux_weight(sigma, tau);
        fine += v;
        if (j % 2 == 0) coarse += v;
        l1 += std::abs(v);
        if (j == m) edge = std::max(edge, std::abs(v));
      }
    }
    fine *= hf;
    coarse *= h;
    l1 *= hf;
    if (edge / rate > tol * std::max(l1, 1e-300)) {
      T *= 1.5;
      continue;
    }
    if (std::abs(fine - coarse) <= std::sqrt(tol) * std::max(l1, 1e-300)) return fine;
    h *= 0.5;
  }
  fail(ErrorCode::NonConvergent, "flux kernel integral did not converge");
}

cplx green_one(const Energy& e, double alpha, const PlanePoint& x, const PlanePoint& x0, double tol) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
  const Polar p = polar_about(x, Center::A, single_cfg);
  const Polar p0 = polar_about(x0, Center::A, single_cfg);
  const double dist = std::hypot(x.x1 - x0.x1, x.x2 - x0.x2);
  if (dist < 1e-14 && x.side == x0.side) fail(ErrorCode::CoincidentPoints, "x equals x0");
  const double eta = eta_single(x, x0, true);
  const cplx pref = std::exp(I * (alpha * eta));
  const double phi = p.theta - p0.theta - eta;
  cplx v = bessel_k(0.0, e.kappa * dist) / (2 * pi);
  v -= flux_kernel_integral(e.kappa, p.r, p0.r, phi, alpha, tol) / (2 * pi);
  return pref * v;
}

namespace {

// Log-scaled K_{nu0 + k}(x), k = 0..n, by upward recurrence (stable for K).
struct ScaledK {
  std::vector<cplx> mant;
  std::vector<double> logscale;
};

ScaledK k_ladder(double nu0, std::size_t n, cplx x) {
  ScaledK out;
  out.mant.resize(n + 1);
  out.logscale.assign(n + 1, 0.0);
  cplx km1 = bessel_k(nu0, x);
  out.mant[0] = km1;
  if (n == 0) return out;
  cplx k = bessel_k(nu0 + 1.0, x);
  out.mant[1] = k;
  double scale = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    const double nu = nu0 + static_cast<double>(j);
    cplx next = km1 + (2.0 * nu / x) * k;
    km1 = k;
    k = next;
    const double a = std::abs(k);
    if (a > 1e100) {
      k /= a;
      km1 /= a;
      scale += std::log(a);
    }
    out.mant[j + 1] = k;
    out.logscale[j + 1] = scale;
  }
  return out;
}

} // namespace

PartialWaveResult green_one_oracle(const Energy& e, double alpha, const PlanePoint& x, const PlanePoint& x0,
                                   int n_max) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::InvalidArgument, "oracle needs 0 < alpha < 1");
  if (n_max < 1) fail(ErrorCode::InvalidArgument, "n_max must be at least 1");
  const Polar p = polar_about(x, Center::A, single_cfg);
  const Polar p0 = polar_about(x0, Center::A, single_cfg);
  if (std::hypot(x.x1 - x0.x1, x.x2 - x0.x2) < 1e-14 && x.side == x0.side)
    fail(ErrorCode::CoincidentPoints, "x equals x0");
  const double dth = p.theta - p0.theta;
  const double rl = std::min(p.r, p0.r), rg = std::max(p.r, p0.r);
  const cplx xl = e.kappa * rl, xg = e.kappa * rg;
  const std::size_t n = static_cast<std::size_t>(n_max);
  // n >= 0 uses orders alpha + n; n <= -1 uses orders (1 - alpha) + (-n - 1).
  const ScaledK kp = k_ladder(alpha, n, xg), km = k_ladder(1.0 - alpha, n, xg);
  auto term = [&](int m) {
    const double nu = std::abs(m + alpha);
    const ScaledK& ks = m >= 0 ? kp : km;
    const std::size_t idx = static_cast<std::size_t>(m >= 0 ? m : -m - 1);
    auto [logpre, series] = bessel_i_scaled(nu, xl);
    return std::exp(I * ((m + alpha) * dth)) * std::exp(logpre + ks.logscale[idx]) * series * ks.mant[idx];
  };
  cplx sum = term(0);
  int quiet = 0, k = 1;
  double last = std::abs(sum);
  for (; k <= n_max; ++k) {
    const cplx t = term(k) + term(-k);
    sum += t;
    last = std::abs(t);
    quiet = last < 1e-14 * std::abs(sum) ? quiet + 1 : 0;
    if (quiet >= 3) break;
  }
  const double q = rl / rg;
  const double tail = q < 1.0 ? last * q / (1.0 - q) / (2 * pi) : std::numeric_limits<double>::infinity();
  return {sum / (2 * pi), tail, std::min(k, n_max)};
}

cplx green_one_rs_oracle(const Energy& e, double alpha, const PlanePoint& x, const PlanePoint& x0, double tol) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
  const Polar p = polar_about(x, Center::A, single_cfg);
  const Polar p0 = polar_about(x0, Center::A, single_cfg);
  const double dist = std::hypot(x.x1 - x0.x1, x.x2 - x0.x2);
  if (dist < 1e-14 && x.side == x0.side) fail(ErrorCode::CoincidentPoints, "x equals x0");
  const double dth = p.theta - p0.theta;
  // Branch prefactor from the raw angle difference.
  double eta = 0.0;
  if (dth > pi) eta = 2 * pi;
  else if (dth < -pi) eta = -2 * pi;
  const cplx pref = std::exp(I * (alpha * eta));
  const double r = p.r, r0 = p0.r;
  auto f = [&](double s) -> cplx {
    const double R = std::sqrt(r * r + r0 * r0 + 2 * r * r0 * std::cosh(s));
    if (!std::isfinite(R)) return 0.0;
    const cplx k0 = bessel_k(0.0, e.kappa * R);
    if (k0 == cplx(0.0)) return 0.0;
    return k0 * std::exp(-alpha * s + I * (alpha * dth)) / (1.0 + std::exp(-s + I * dth));
  };
  const LineIntegral li = integrate_line(f, LineDomain::Real, tol);
  return pref * bessel_k(0.0, e.kappa * dist) / (2 * pi) - std::sin(pi * alpha) / pi * li.value / (2 * pi);
}

cplx deficiency_one(int which, const Energy& e, double alpha, const PlanePoint& x) {
  if (which != -1 && which != 0) fail(ErrorCode::InvalidArgument, "deficiency index must be -1 or 0");
  const Polar p = polar_about(x, Center::A, single_cfg);
  const double nu = which == 0 ? alpha : alpha - 1.0;
  return bessel_k(std::abs(nu), e.kappa * p.r) * std::exp(I * (nu * p.theta));
}

ResolventCheck resolvent_map_check(int which, const Energy& z, const Energy& w, double alpha, const PlanePoint& x,
                                   double R, double tail_tol) {
  const double nu = which == 0 ? alpha : alpha - 1.0;
  const cplx scale = std::exp(std::abs(nu) * (std::log(z.kappa) - std::log(w.kappa)));
  const cplx target = scale * deficiency_one(which, z, alpha, x);
  const cplx psi_w = deficiency_one(which, w, alpha, x);
  if (z.z == w.z) return {std::abs(psi_w - target), 0.0};
  // Tail beyond R: |G| |psi_w| decays like e^{-(Re kappa_z + Re kappa_w) |y|}.
  const double decay = z.kappa.real() + w.kappa.real();
  const double tail = 2 * pi * (R + 1.0) / decay * std::exp(-decay * (R - std::hypot(x.x1, x.x2)));
  if (tail > tail_tol) fail(ErrorCode::TailNotNegligible, "disk radius too small for the requested tolerance");
  PlaneQuadOptions opt;
  opt.radius = R;
  auto f = [&](const PlanePoint& y) { return green_one(z, alpha, x, y, 1e-11) * deficiency_one(which, w, alpha, y); };
  const cplx integral = integrate_plane(f, {PlanePoint{0, 0}, x}, opt);
  return {std::abs(psi_w + (z.z - w.z) * integral - target), tail};
}

} // namespace abv
