#include "abv/cache.hpp"
#include "abv/errors.hpp"
#include "abv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace abv {

Eigen::VectorXd TauGrid::sqrt_weights() const {
  Eigen::VectorXd w(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) w[j] = std::sqrt(weights[j]);
  return w;
}

cplx flux_weight(double sigma, double mu) {
  const double s = std::sin(pi * sigma);
  if (sigma == 0.0 || sigma == 1.0) return 0.0;
  return s / (pi * std::sin(pi * cplx(sigma, mu)));
}

TauGrid build_tau_grid(const Energy& e, double rho, double tol, const GridOptions& opt) {
  if (!(rho > 0.0)) fail(ErrorCode::DegenerateSeparation, "rho must be positive");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "grid tolerance must be positive");
  const cplx x = e.kappa * rho;

  // Half-width: last tau where |K_{i tau}(kappa rho)| still exceeds tol/100, plus a margin.
  const double decay = pi / 2 - std::abs(std::arg(x));
  const double t_est = (std::log(100.0 / tol) + 5.0) / decay;
  const double scan = 0.25;
  const std::size_t n_scan = static_cast<std::size_t>(std::ceil(2.0 * t_est / scan)) + 1;
  auto vals = bessel_k_imag_batch(scan, n_scan, x);
  double last = 0.0;
  for (std::size_t j = 0; j < vals.size(); ++j)
    if (std::abs(vals[j]) > 0.01 * tol) last = j * scan;
  const double T = last + 1.0;

  // Step: trapezoid error e^{-2 pi d / h} against the nearest pole of each flux weight,
  // inflated by the growth of K_{i tau}(m) off the real tau axis for small m.
  const double m = opt.min_argument > 0.0 ? opt.min_argument : std::abs(x);
  const double growth = std::log(std::max(1.0, 2.0 / m));
  double h = 0.25;
  for (double sigma : opt.fluxes) {
    if (sigma <= 0.0 || sigma >= 1.0) continue;
    const double d = std::min(sigma, 1.0 - sigma);
    const double s = std::sin(pi * sigma);
    if (10.0 * s <= tol) continue;
    h = std::min(h, 2 * pi * d / (std::log(10.0 * s / tol) + d * growth));
  }
  {
    // The kernel itself is entire in tau; a unit strip is enough for it.
    const double d = 1.0;
    h = std::min(h, 2 * pi * d / (std::log(10.0 / tol) + d * growth));
  }

  h *= opt.step_scale;
  const std::size_t half = static_cast<std::size_t>(std::ceil(T / h));
  const std::size_t n = 2 * half + 1;
  if (n > opt.max_nodes)
    fail(ErrorCode::GridBudgetExceeded,
         "grid needs " + std::to_string(n) + " nodes, cap is " + std::to_string(opt.max_nodes));

  TauGrid g;
  g.h = h;
  g.T = half * h;
  g.kappa = e.kappa;
  g.rho = rho;
  g.tol = tol;
  g.fluxes = opt.fluxes;
  g.nodes.resize(n);
  g.weights.assign(n, h);
  for (std::size_t j = 0; j < n; ++j) g.nodes[j] = (static_cast<double>(j) - static_cast<double>(half)) * h;
  g.weights.front() = g.weights.back() = 0.5 * h;
  return g;
}

bool same_grid(const TauGrid& a, const TauGrid& b) {
  return a.size() == b.size() && a.h == b.h && a.kappa == b.kappa && a.rho == b.rho;
}

std::vector<cplx> toeplitz_values(const TauGrid& grid) {
  const char* dir = std::getenv("ABV_CACHE_DIR");
  KernelCacheKey key{grid.kappa, grid.rho, grid.tol, grid.size(), grid.h};
  std::string path;
  if (dir && *dir) {
    path = std::string(dir) + "/" + kernel_cache_name(key);
    if (auto hit = load_kernel_cache(path, key)) return *hit;
  }
  auto t = bessel_k_imag_batch(grid.h, grid.size(), grid.kappa * grid.rho);
  if (!path.empty()) save_kernel_cache(path, key, t);
  return t;
}

namespace {

void check_compatible(const TauGrid& grid, const KernelParams& p, KernelKind kind) {
  if (kind == KernelKind::Convolution) {
    if (std::abs(p.energy.kappa - grid.kappa) > 1e-15 * std::abs(grid.kappa) || p.rho != grid.rho)
      fail(ErrorCode::IncompatibleGrid, "grid was built for a different (z, rho)");
  } else if (p.sigma > 0.0 && p.sigma < 1.0) {
    bool known = std::any_of(grid.fluxes.begin(), grid.fluxes.end(),
                             [&](double s) { return std::abs(s - p.sigma) < 1e-15; });
    if (!known) fail(ErrorCode::IncompatibleGrid, "flux was not declared when building the grid");
  }
}

} // namespace

DiscreteKernel discretize(KernelKind kind, const KernelParams& params, const TauGrid& grid) {
  check_compatible(grid, params, kind);
  const std::size_t n = grid.size();
  DiscreteKernel k{kind, {}, {}, params};
  if (kind == KernelKind::Diagonal) {
    k.diagonal.resize(n);
    for (std::size_t j = 0; j < n; ++j) k.diagonal[j] = flux_weight(params.sigma, grid.nodes[j]);
    return k;
  }
  auto t = toeplitz_values(grid);
  const Eigen::VectorXd w = grid.sqrt_weights();
  k.matrix.resize(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) k.matrix(i, j) = w[i] * t[i > j ? i - j : j - i] * w[j];
  return k;
}

Eigen::VectorXcd f_vector(double r, double theta, double sigma, const TauGrid& grid) {
  const std::size_t n = grid.size(), c = grid.center();
  auto kv = bessel_k_imag_batch(grid.h, c + 1, grid.kappa * r);
  Eigen::VectorXcd f(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double tau = grid.nodes[j];
    const std::size_t k = j > c ? j - c : c - j;
    f[j] = std::sqrt(grid.weights[j]) * kv[k] * std::exp(theta * tau) * flux_weight(sigma, tau);
  }
  return f;
}

Eigen::VectorXcd order_shifted_vector(double omega, const TauGrid& grid) {
  const std::size_t n = grid.size();
  auto kv = bessel_k_batch(omega, grid.nodes.front(), grid.h, n, grid.kappa * grid.rho);
  Eigen::VectorXcd g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = std::sqrt(grid.weights[j]) * kv[j];
  return g;
}

KernelVectors kernel_vectors(double r, double theta, double sigma, double nu, const Energy& e, double rho,
                             const TauGrid& grid) {
  check_compatible(grid, KernelParams{e, rho, sigma}, KernelKind::Convolution);
  return {f_vector(r, theta, sigma, grid), order_shifted_vector(nu, grid)};
}

double convolution_symbol_norm(const TauGrid& grid) {
  const std::size_t n = grid.size();
  auto t = toeplitz_values(grid);
  auto symbol = [&](double xi) {
    cplx s = t[0];
    for (std::size_t k = 1; k < n; ++k) s += 2.0 * t[k] * std::cos(k * grid.h * xi);
    return std::abs(grid.h * s);
  };
  const double xmax = pi / grid.h;
  const int m = 2000;
  double best = -1.0, arg = 0.0;
  for (int i = 0; i <= m; ++i) {
    double xi = xmax * i / m, v = symbol(xi);
    if (v > best) best = v, arg = xi;
  }
  // Golden-section refinement around the best sample.
  double lo = std::max(0.0, arg - xmax / m), hi = std::min(xmax, arg + xmax / m);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    if (symbol(a) > symbol(b)) hi = b;
    else lo = a;
  }
  return std::max(best, symbol(0.5 * (lo + hi)));
}

} // namespace abv
