#include "abv/quadrature.hpp"

#include "abv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abv {

namespace {

// Contribution of node t to the exp-sinh sum for int_0^inf f(s) ds.
cplx exp_sinh_term(const std::function<cplx(double)>& f, double t) {
  const double u = 0.5 * pi * std::sinh(t);
  const double s = std::exp(u);
  if (s == 0.0 || !std::isfinite(s)) return 0.0;
  const double jac = 0.5 * pi * std::cosh(t) * s;
  cplx v = f(s);
  if (v == cplx(0.0)) return 0.0;
  return v * jac;
}

LineIntegral exp_sinh(const std::function<cplx(double)>& f, double tol, int max_levels) {
  const double eps = std::numeric_limits<double>::epsilon();
  // Fix the t-window by scanning outward from t = 0 until terms stay far below the peak.
  const double scan = 0.125;
  double peak = std::abs(exp_sinh_term(f, 0.0));
  auto edge = [&](double dir) {
    double t = 0.0;
    int quiet = 0;
    while (std::abs(t) < 6.0) {
      t += dir * scan;
      double m = std::abs(exp_sinh_term(f, t));
      peak = std::max(peak, m);
      quiet = (m <= 1e-20 * peak) ? quiet + 1 : 0;
      if (quiet >= 3) break;
    }
    return t;
  };
  const double t_hi = edge(1.0);
  const double t_lo = edge(-1.0);
  if (peak == 0.0) return {0.0, 0.0};

  double h = 0.5;
  long k_lo = static_cast<long>(std::floor(t_lo / h));
  long k_hi = static_cast<long>(std::ceil(t_hi / h));
  cplx sum = 0.0;
  double l1 = 0.0;
  for (long k = k_lo; k <= k_hi; ++k) {
    cplx v = exp_sinh_term(f, k * h);
    sum += v;
    l1 += std::abs(v);
  }
  cplx est = h * sum;
  double err = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= max_levels; ++level) {
    cplx mid = 0.0;
    for (long k = k_lo; k < k_hi; ++k) {
      cplx v = exp_sinh_term(f, (k + 0.5) * h);
      mid += v;
      l1 += std::abs(v);
    }
    sum += mid;
    h *= 0.5;
    k_lo *= 2;
    k_hi *= 2;
    cplx next = h * sum;
    err = std::abs(next - est);
    est = next;
    const double noise = 64.0 * eps * l1 * h;
    if (level >= 3 && err <= std::max(tol * std::abs(est), noise)) return {est, std::max(err, noise)};
  }
  fail(ErrorCode::NonConvergent, "integrate_line did not reach tolerance, last error " + std::to_string(err));
}

} // namespace

LineIntegral integrate_line(const std::function<cplx(double)>& f, LineDomain domain, double tol, int max_levels) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "integrate_line needs tol > 0");
  if (domain == LineDomain::HalfLine) return exp_sinh(f, tol, max_levels);
  auto both = [&](double s) { return f(s) + f(-s); };
  return exp_sinh(both, tol, max_levels);
}

double spectral_norm(const Eigen::MatrixXcd& a, int iterations) {
  if (a.size() == 0) return 0.0;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(a.cols()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXcd w = a.adjoint() * (a * v);
    double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
    lambda = n;
  }
  return std::sqrt(lambda);
}

} // namespace abv
