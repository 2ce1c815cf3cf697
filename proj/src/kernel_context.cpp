#include "abv/kernel_context.hpp"

#include "abv/errors.hpp"

#include <cmath>

namespace abv {

KernelContext::KernelContext(const Energy& e, const VortexPair& cfg, const ContextOptions& opt)
    : energy_(e), cfg_(cfg), opt_(opt) {
  cfg.validate();
  GridOptions go;
  go.fluxes = {cfg.alpha, cfg.beta};
  go.min_argument = std::abs(e.kappa) * std::min(opt.min_radius, cfg.rho);
  go.step_scale = opt.step_scale;
  go.max_nodes = opt.max_nodes;
  grid_ = build_tau_grid(e, cfg.rho, opt.tol, go);
  k_ = discretize(KernelKind::Convolution, {e, cfg.rho, 0.0}, grid_).matrix;
  da_ = discretize(KernelKind::Diagonal, {e, 0.0, cfg.alpha}, grid_).diagonal;
  db_ = discretize(KernelKind::Diagonal, {e, 0.0, cfg.beta}, grid_).diagonal;
}

const Eigen::PartialPivLU<Eigen::MatrixXcd>& KernelContext::factor(Center u) const {
  auto build = [&](Eigen::PartialPivLU<Eigen::MatrixXcd>& lu) {
    const Eigen::VectorXcd& du = D(u);
    const Eigen::VectorXcd& dv = D(other(u));
    Eigen::MatrixXcd kdu = k_ * du.asDiagonal();
    Eigen::MatrixXcd kdv = k_ * dv.asDiagonal();
    Eigen::MatrixXcd a = -kdu * kdv;
    a.diagonal().array() += 1.0;
    lu.compute(a);
  };
  if (u == Center::A) {
    std::call_once(once_a_, [&] { build(lu_a_); });
    return lu_a_;
  }
  std::call_once(once_b_, [&] { build(lu_b_); });
  return lu_b_;
}

Eigen::VectorXcd KernelContext::f(const PlanePoint& x, Center c, int s) const {
  const Polar p = polar_raw(x, c, cfg_);
  const double sigma = cfg_.flux(c);
  if (p.r < at_vortex_eps) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size());
    if (sigma > 0.0 && sigma < 1.0) v[grid_.center()] = 1.0 / std::sqrt(grid_.weights[grid_.center()]);
    return v;
  }
  return f_vector(p.r, s * p.theta, sigma, grid_);
}

Eigen::VectorXcd KernelContext::g(double nu) const { return order_shifted_vector(nu, grid_); }

Eigen::VectorXcd KernelContext::kd(Center c, const Eigen::VectorXcd& y) const {
  return k_ * D(c).cwiseProduct(y);
}

double KernelContext::contraction() const { return std::exp(-energy_.kappa.real() * cfg_.rho); }

ContextPtr make_context(const Energy& e, const VortexPair& cfg, const ContextOptions& opt) {
  return std::make_shared<const KernelContext>(e, cfg, opt);
}

} // namespace abv

namespace abv {

SeriesValue chain_series(const KernelContext& ctx, Center u, double nu, const PlanePoint& x, int s, int n_max) {
  const Center v = other(u);
  const Eigen::VectorXcd fu = ctx.f(x, u, s), fv = ctx.f(x, v, s), g = ctx.g(nu);
  if (n_max < 0) {
    const Eigen::VectorXcd y = ctx.factor(u).solve(g);
    const cplx val = (fu.transpose() * ctx.kd(v, y))(0) - (fv.transpose() * y)(0);
    return {val, 0.0, -1};
  }
  // S_{2n-1} = -fv^T (K Du K Dv)^{n-1} g, S_{2n} = fu^T K Dv (K Du K Dv)^{n-1} g.
  const double q = ctx.contraction();
  SeriesValue out{0.0, 0.0, n_max};
  Eigen::VectorXcd y = g;
  for (int k = 1; k <= n_max; ++k) {
    if (k % 2 == 1) {
      out.value -= (fv.transpose() * y)(0);
    } else {
      const Eigen::VectorXcd w = ctx.kd(v, y);
      out.value += (fu.transpose() * w)(0);
      y = ctx.kd(u, w);
    }
  }
  out.tail_bound = std::max(fu.norm(), fv.norm()) * g.norm() * std::pow(q, n_max) / (1.0 - q);
  return out;
}

} // namespace abv
