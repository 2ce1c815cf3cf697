#include "abv/deficiency_two.hpp"

#include "abv/errors.hpp"

#include <cmath>

namespace abv {

ChannelIndex ChannelIndex::from_flat(int j) {
  if (j < 1 || j > 4) fail(ErrorCode::InvalidArgument, "channel index must lie in 1..4");
  return all_channels[j - 1];
}

DeficiencyBasis::DeficiencyBasis(ContextPtr ctx) : ctx_(std::move(ctx)) {
  for (ChannelIndex ch : all_channels) {
    const int k = ch.flat() - 1;
    y_[k] = ctx_->factor(ch.u).solve(ctx_->g(ch.nu(ctx_->config())));
    w_[k] = ctx_->kd(other(ch.u), y_[k]);
  }
}

namespace {

cplx lead_term(const KernelContext& ctx, ChannelIndex ch, const PlanePoint& x) {
  const Polar p = polar_about(x, ch.u, ctx.config());
  const double nu = ch.nu(ctx.config());
  return bessel_k(nu, ctx.energy().kappa * p.r) * std::exp(I * (nu * p.theta));
}

} // namespace

cplx DeficiencyBasis::psi(ChannelIndex ch, const PlanePoint& x) const {
  const cplx lead = lead_term(*ctx_, ch, x);
  const int k = ch.flat() - 1;
  const Eigen::VectorXcd fu = ctx_->f(x, ch.u), fv = ctx_->f(x, other(ch.u));
  return lead + (fu.transpose() * w_[k])(0) - (fv.transpose() * y_[k])(0);
}

std::array<cplx, 4> DeficiencyBasis::psi_all(const PlanePoint& x) const {
  const Eigen::VectorXcd fa = ctx_->f(x, Center::A), fb = ctx_->f(x, Center::B);
  std::array<cplx, 4> out;
  for (ChannelIndex ch : all_channels) {
    const int k = ch.flat() - 1;
    const Eigen::VectorXcd& fu = ch.u == Center::A ? fa : fb;
    const Eigen::VectorXcd& fv = ch.u == Center::A ? fb : fa;
    out[k] = lead_term(*ctx_, ch, x) + (fu.transpose() * w_[k])(0) - (fv.transpose() * y_[k])(0);
  }
  return out;
}

SeriesValue DeficiencyBasis::psi_series(ChannelIndex ch, const PlanePoint& x, int n_max) const {
  if (n_max < 0) fail(ErrorCode::InvalidArgument, "n_max must be nonnegative");
  const cplx lead = lead_term(*ctx_, ch, x);
  SeriesValue s{0.0, 0.0, 0};
  if (n_max > 0) s = chain_series(*ctx_, ch.u, ch.nu(ctx_->config()), x, 1, n_max);
  else {
    const double q = ctx_->contraction();
    s.tail_bound = std::max(ctx_->f(x, ch.u).norm(), ctx_->f(x, other(ch.u)).norm()) *
                   ctx_->g(ch.nu(ctx_->config())).norm() / (1.0 - q);
  }
  s.value += lead;
  return s;
}

cplx DeficiencyBasis::psi(ChannelIndex ch, const PlanePoint& x, PsiMethod m, int n_max) const {
  return m == PsiMethod::Resummed ? psi(ch, x) : psi_series(ch, x, n_max).value;
}

cplx DeficiencyBasis::s_term(int n, ChannelIndex ch, const PlanePoint& x) const {
  if (n < 0) fail(ErrorCode::InvalidArgument, "term index must be nonnegative");
  if (n == 0) return lead_term(*ctx_, ch, x);
  polar_about(x, ch.u, ctx_->config());
  const Center u = ch.u, v = other(u);
  Eigen::VectorXcd y = ctx_->g(ch.nu(ctx_->config()));
  for (int k = 1; k < (n + 1) / 2; ++k) y = ctx_->kd(u, ctx_->kd(v, y));
  if (n % 2 == 1) return -(ctx_->f(x, v).transpose() * y)(0);
  return (ctx_->f(x, u).transpose() * ctx_->kd(v, y))(0);
}

cplx DeficiencyBasis::cal_S(Center own, int i, int j) const {
  if (i < 0 || i > 1 || j < 0 || j > 1) fail(ErrorCode::InvalidArgument, "matrix indices must be 0 or 1");
  const VortexPair& cfg = ctx_->config();
  const Center v = other(own);
  const double omega = cfg.flux(v) - 1.0 + i;
  const double nu = cfg.flux(own) - 1.0 + j;
  const int k = ChannelIndex{own, j == 1}.flat() - 1;
  const cplx chains = (ctx_->g(omega).transpose() * ctx_->D(own).cwiseProduct(w_[k]))(0);
  return bessel_k(omega - nu, ctx_->energy().kappa * cfg.rho) + chains;
}

cplx DeficiencyBasis::cal_T(Center own, int i, int j) const {
  if (i < 0 || i > 1 || j < 0 || j > 1) fail(ErrorCode::InvalidArgument, "matrix indices must be 0 or 1");
  const VortexPair& cfg = ctx_->config();
  const double sigma = cfg.flux(own);
  const double mu = sigma - 1.0 + i;
  const int k = ChannelIndex{own, j == 1}.flat() - 1;
  const cplx chains = (ctx_->g(mu).transpose() * ctx_->D(other(own)).cwiseProduct(y_[k]))(0);
  return (i == j ? pi / (2.0 * std::sin(pi * sigma)) : 0.0) + chains;
}

AsymptoticMatrices DeficiencyBasis::matrices(Center own) const {
  AsymptoticMatrices m;
  m.own = own;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      m.S(i, j) = cal_S(own, i, j);
      m.T(i, j) = cal_T(own, i, j);
    }
  return m;
}

namespace {

double radial_derivative_jump(const PlaneFunction& f, double x1, double dir, double r, Side s1, Side s2, cplx p1,
                              cplx p2) {
  // d/dr along x1 = x1 + dir r, Richardson on steps h and h/2.
  auto diff = [&](Side s, double h) {
    return (f({x1 + dir * (r + h), 0.0, s}) - f({x1 + dir * (r - h), 0.0, s})) / (2 * h);
  };
  auto rich = [&](Side s) {
    const double h = 1e-5 * r;
    return (4.0 * diff(s, h / 2) - diff(s, h)) / 3.0;
  };
  return std::abs(p1 * rich(s1) - p2 * rich(s2));
}

// d/dx2 at (x1, 0) from the side s, one Richardson level.
cplx normal_derivative(const PlaneFunction& f, double x1, Side s, double h) {
  const double sg = s == Side::Upper ? 1.0 : -1.0;
  const cplx f0 = f({x1, 0.0, s});
  auto one = [&](double k) { return sg * (-3.0 * f0 + 4.0 * f({x1, sg * k}) - f({x1, 2 * sg * k})) / (2 * k); };
  return (4.0 * one(h / 2) - one(h)) / 3.0;
}

} // namespace

CutResidual cut_residual(const PlaneFunction& f, const VortexPair& cfg, const std::vector<double>& radii) {
  CutResidual out;
  const cplx pa = std::exp(-I * (pi * cfg.alpha)), pb = std::exp(-I * (pi * cfg.beta));
  for (double r : radii) {
    // L_a: theta_a = pi on the upper side.
    const cplx up = f({-r, 0.0, Side::Upper}), lo = f({-r, 0.0, Side::Lower});
    out.value = std::max(out.value, std::abs(pa * up - std::conj(pa) * lo));
    out.derivative =
        std::max(out.derivative, radial_derivative_jump(f, 0.0, -1.0, r, Side::Upper, Side::Lower, pa, std::conj(pa)));
    // L_b: theta_b = pi on the lower side.
    const cplx bu = f({cfg.rho + r, 0.0, Side::Upper}), bl = f({cfg.rho + r, 0.0, Side::Lower});
    out.value = std::max(out.value, std::abs(pb * bl - std::conj(pb) * bu));
    const double h = 1e-4 * r;
    out.normal = std::max(out.normal, std::abs(pa * normal_derivative(f, -r, Side::Upper, h) -
                                               std::conj(pa) * normal_derivative(f, -r, Side::Lower, h)));
    out.normal = std::max(out.normal, std::abs(pb * normal_derivative(f, cfg.rho + r, Side::Lower, h) -
                                               std::conj(pb) * normal_derivative(f, cfg.rho + r, Side::Upper, h)));
    out.derivative = std::max(
        out.derivative, radial_derivative_jump(f, cfg.rho, 1.0, r, Side::Lower, Side::Upper, pb, std::conj(pb)));
  }
  return out;
}

CutResidual verify_cut_conditions(const DeficiencyBasis& basis, ChannelIndex ch, const std::vector<double>& radii) {
  return cut_residual([&](const PlanePoint& x) { return basis.psi(ch, x); }, basis.context().config(), radii);
}

cplx angular_mode(const PlaneFunction& f, const VortexPair& cfg, Center c, double nu, double r, int nodes) {
  cplx sum = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double th = -pi + 2 * pi * (k + 0.5) / nodes;
    const PlanePoint x = c == Center::A ? PlanePoint{r * std::cos(th), r * std::sin(th)}
                                        : PlanePoint{cfg.rho - r * std::cos(th), -r * std::sin(th)};
    sum += f(x) * std::exp(-I * (nu * th));
  }
  return sum / double(nodes);
}

ModeFit fit_mode(const PlaneFunction& f, const KernelContext& ctx, Center c, double nu, double r1, double r2,
                 double r_check, int nodes) {
  const double a = std::abs(nu);
  const cplx kap = ctx.energy().kappa;
  Eigen::Matrix2cd m;
  Eigen::Vector2cd rhs;
  int row = 0;
  for (double r : {r1, r2}) {
    m(row, 0) = bessel_k(a, kap * r);
    m(row, 1) = bessel_i(a, kap * r);
    rhs(row) = angular_mode(f, ctx.config(), c, nu, r, nodes);
    ++row;
  }
  // Columns scaled to unit size; separation is lost when the radii nearly coincide.
  const double s0 = m.col(0).norm(), s1 = m.col(1).norm();
  Eigen::Matrix2cd ms = m;
  ms.col(0) /= s0;
  ms.col(1) /= s1;
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(ms);
  const double cond = svd.singularValues()(0) / svd.singularValues()(1);
  if (!(cond < 1e8)) fail(ErrorCode::FitIllConditioned, "radii do not separate the K and I components");
  const Eigen::Vector2cd sol = ms.partialPivLu().solve(rhs);
  ModeFit out{sol(0) / s0, sol(1) / s1, 0.0};
  const cplx pred = out.A * bessel_k(a, kap * r_check) + out.B * bessel_i(a, kap * r_check);
  const cplx got = angular_mode(f, ctx.config(), c, nu, r_check, nodes);
  out.residual = std::abs(pred - got) / std::max(std::abs(got), 1e-300);
  return out;
}

namespace {

// (sin pi|mu| / pi) Gamma(1 - |mu|) / |mu| (kappa/2)^{|mu|}.
cplx expansion_prefactor(double mu, cplx kappa) {
  const double a = std::abs(mu);
  return std::sin(pi * a) / pi * std::tgamma(1 - a) / a * std::pow(kappa / 2.0, a);
}

} // namespace

AsymptoticReport asymptotic_check(const DeficiencyBasis& basis, ChannelIndex ch, double r1, double r2) {
  const KernelContext& ctx = basis.context();
  const VortexPair& cfg = ctx.config();
  const cplx kap = ctx.energy().kappa;
  const double r_check = std::sqrt(r1 * r2);
  PlaneFunction f = [&](const PlanePoint& x) { return basis.psi(ch, x); };
  AsymptoticReport rep;
  const int j = ch.upper ? 1 : 0;
  const AsymptoticMatrices own = basis.matrices(ch.u);
  // Own-vortex expansion coefficients on r^{-|mu|} and r^{|mu|}, indexed by mode i.
  cplx c_sing[2], c_sub[2];
  for (Center c : {Center::A, Center::B}) {
    const double sigma = cfg.flux(c);
    for (int i = 0; i < 2; ++i) {
      const double mu = sigma - 1.0 + i;
      const double a = std::abs(mu);
      const ModeFit fit = fit_mode(f, ctx, c, mu, r1, r2, r_check);
      rep.max_fit_residual = std::max(rep.max_fit_residual, fit.residual);
      // Leading coefficients of K_a and I_a on r^{-a} and r^{a}.
      const cplx k_sing = std::tgamma(a) / 2.0 * std::pow(kap / 2.0, -a);
      const cplx k_sub = -pi / (2.0 * std::sin(pi * a)) / std::tgamma(1 + a) * std::pow(kap / 2.0, a);
      const cplx i_sub = std::pow(kap / 2.0, a) / std::tgamma(1 + a);
      const cplx sub = fit.A * k_sub + fit.B * i_sub;
      cplx expected;
      if (c == ch.u) {
        if (i == j) {
          const cplx sing = fit.A * k_sing;
          rep.singular = {c, mu, sing, k_sing, std::abs(sing - k_sing) / std::abs(k_sing)};
        }
        expected = -expansion_prefactor(mu, kap) * own.T(i, j);
        c_sing[i] = (i == j ? k_sing : 0.0);
        c_sub[i] = expected;
      } else {
        expected = expansion_prefactor(mu, kap) * own.S(i, j);
      }
      rep.subleading.push_back({c, mu, sub, expected, std::abs(sub - expected) / std::abs(expected)});
    }
  }
  // Remainder at the own vortex: e^{-i sigma theta} psi minus the four-term expansion.
  const double sigma = cfg.flux(ch.u);
  rep.gamma = std::min(2.0 - sigma, 1.0 + sigma);
  auto remainder = [&](double r) {
    double worst = 0.0;
    const int m = 64;
    for (int k = 0; k < m; ++k) {
      const double th = -pi + 2 * pi * (k + 0.5) / m;
      const PlanePoint x = ch.u == Center::A ? PlanePoint{r * std::cos(th), r * std::sin(th)}
                                             : PlanePoint{cfg.rho - r * std::cos(th), -r * std::sin(th)};
      const cplx val = f(x) * std::exp(-I * (sigma * th));
      const double a0 = sigma, a1 = 1.0 - sigma;
      const cplx model = c_sing[1] * std::pow(r, -a0) + c_sub[1] * std::pow(r, a0) +
                         (c_sing[0] * std::pow(r, -a1) + c_sub[0] * std::pow(r, a1)) * std::exp(-I * th);
      worst = std::max(worst, std::abs(val - model));
    }
    return worst;
  };
  rep.remainder_slope = std::log(remainder(r1) / remainder(r2)) / std::log(r1 / r2);
  return rep;
}

Eigen::Matrix4cd singular_coefficient_matrix(const DeficiencyBasis& basis, double r1, double r2) {
  const KernelContext& ctx = basis.context();
  const VortexPair& cfg = ctx.config();
  Eigen::Matrix4cd m;
  for (ChannelIndex col : all_channels) {
    PlaneFunction f = [&](const PlanePoint& x) { return basis.psi(col, x); };
    for (ChannelIndex row : all_channels) {
      const double mu = row.nu(cfg);
      const ModeFit fit = fit_mode(f, ctx, row.u, mu, r1, r2, std::sqrt(r1 * r2));
      m(row.flat() - 1, col.flat() - 1) = fit.A;
    }
  }
  return m;
}

cplx opposite_order_difference(const DeficiencyBasis& basis, ChannelIndex ch, const PlanePoint& x) {
  const double nu = ch.nu(basis.context().config());
  return chain_series(basis.context(), ch.u, nu, x, 1, -1).value -
         chain_series(basis.context(), ch.u, -nu, x, 1, -1).value;
}

double helmholtz_residual(const DeficiencyBasis& basis, ChannelIndex ch, const PlanePoint& x, double h) {
  auto p = [&](double dx, double dy) { return basis.psi(ch, {x.x1 + dx, x.x2 + dy}); };
  const cplx c = p(0, 0);
  const cplx lap = (p(h, 0) + p(-h, 0) + p(0, h) + p(0, -h) - 4.0 * c) / (h * h);
  return std::abs(lap + basis.context().energy().z * c) / std::abs(c);
}

} // namespace abv
