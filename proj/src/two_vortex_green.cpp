#include "abv/two_vortex_green.hpp"

#include "abv/errors.hpp"
#include "abv/one_vortex.hpp"

#include <cmath>
#include <unordered_map>

namespace abv {

std::vector<Center> ChainSpec::sequence() const {
  if (n < 2) fail(ErrorCode::InvalidArgument, "chains have length at least 2");
  std::vector<Center> s(n);
  Center c = top;
  for (int j = 0; j < n; ++j, c = other(c)) s[j] = c;
  return s;
}

namespace {

constexpr int adaptive_cap = 400;

struct PointData {
  Polar pa, pb, pa0, pb0;
  WindingFactors w;
  double dist;
};

PointData prepare(const KernelContext& ctx, const PlanePoint& x, const PlanePoint& x0) {
  const VortexPair& cfg = ctx.config();
  PointData d;
  d.pa = polar_about(x, Center::A, cfg);
  d.pb = polar_about(x, Center::B, cfg);
  d.pa0 = polar_about(x0, Center::A, cfg);
  d.pb0 = polar_about(x0, Center::B, cfg);
  d.dist = std::hypot(x.x1 - x0.x1, x.x2 - x0.x2);
  if (d.dist < 1e-14 && x.side == x0.side) fail(ErrorCode::CoincidentPoints, "x equals x0");
  d.w = winding_factors(x, x0, cfg, true);
  if (d.w.eta_a != 0.0 && d.w.eta_b != 0.0) fail(ErrorCode::DegenerateSegment, "segment crosses both cuts");
  return d;
}

cplx direct_part(const KernelContext& ctx, const PointData& d, double tol) {
  const VortexPair& cfg = ctx.config();
  const cplx kap = ctx.energy().kappa;
  cplx v = d.w.zeta_a * d.w.zeta_b * bessel_k(0.0, kap * d.dist) / (2 * pi);
  v -= d.w.zeta_a * flux_kernel_integral(kap, d.pa.r, d.pa0.r, d.pa.theta - d.pa0.theta - d.w.eta_a, cfg.alpha, tol) /
       (2 * pi);
  v -= d.w.zeta_b * flux_kernel_integral(kap, d.pb.r, d.pb0.r, d.pb.theta - d.pb0.theta - d.w.eta_b, cfg.beta, tol) /
       (2 * pi);
  return v;
}

// Resummed x0-side vector for chains whose top center is u.
Eigen::VectorXcd resummed_source(const KernelContext& ctx, Center u, const Eigen::VectorXcd& hu,
                                 const Eigen::VectorXcd& hv) {
  const Center v = other(u);
  Eigen::VectorXcd even = ctx.factor(v).solve(ctx.K() * hv);
  Eigen::VectorXcd odd = ctx.kd(v, ctx.factor(u).solve(ctx.K() * hu));
  return even - odd;
}

} // namespace

GreenValue green_two_detailed(const KernelContext& ctx, const PlanePoint& x, const PlanePoint& x0,
                              const TruncationPolicy& pol) {
  const PointData d = prepare(ctx, x, x0);
  GreenValue out;
  out.value = direct_part(ctx, d, pol.integral_tol);

  const Eigen::VectorXcd fa = ctx.f(x, Center::A), fb = ctx.f(x, Center::B);
  const Eigen::VectorXcd ha = ctx.f(x0, Center::A, -1), hb = ctx.f(x0, Center::B, -1);
  auto fx = [&](Center c) -> const Eigen::VectorXcd& { return c == Center::A ? fa : fb; };
  auto hx = [&](Center c) -> const Eigen::VectorXcd& { return c == Center::A ? ha : hb; };

  if (pol.mode == ChainMode::Resummed) {
    cplx chains = 0.0;
    for (Center u : {Center::A, Center::B}) chains += (fx(u).transpose() * resummed_source(ctx, u, hx(u), hx(other(u))))(0);
    out.value += chains / (2 * pi);
    return out;
  }

  const double q = ctx.contraction();
  const double hmax = std::max(ha.norm(), hb.norm());
  const double fsum = fa.norm() + fb.norm();
  auto tail = [&](int n) { return fsum * hmax * std::pow(q, n) / (2.0 * (1.0 - q)); };

  // Per top center: the even-length and odd-length x0-side vectors, advanced by K D_v K D_u.
  struct State {
    Center u;
    Eigen::VectorXcd even, odd;
  };
  std::vector<State> st;
  for (Center u : {Center::A, Center::B}) {
    const Center v = other(u);
    st.push_back({u, ctx.K() * hx(v), ctx.kd(v, ctx.K() * hx(u))});
  }
  cplx chains = 0.0;
  const int cap = pol.mode == ChainMode::Fixed ? pol.n_max : adaptive_cap;
  int n = 1;
  while (n < cap) {
    ++n;
    for (State& s : st) {
      const Center v = other(s.u);
      Eigen::VectorXcd& vec = n % 2 == 0 ? s.even : s.odd;
      const cplx t = (fx(s.u).transpose() * vec)(0);
      chains += (n % 2 == 0 ? 1.0 : -1.0) * t / (2 * pi);
      vec = ctx.kd(v, ctx.kd(s.u, vec));
    }
    if (pol.mode == ChainMode::Adaptive && n >= 3 &&
        tail(n) <= pol.tail_tol * std::max(std::abs(out.value + chains), 1e-300))
      break;
  }
  if (pol.mode == ChainMode::Adaptive && tail(n) > pol.tail_tol * std::max(std::abs(out.value + chains), 1e-300))
    fail(ErrorCode::NonConvergent, "chain sum did not reach the tail tolerance");
  out.value += chains;
  out.tail_bound = tail(n);
  out.chain_length = n;
  return out;
}

cplx green_two(const KernelContext& ctx, const PlanePoint& x, const PlanePoint& x0, const TruncationPolicy& pol) {
  return green_two_detailed(ctx, x, x0, pol).value;
}

GreenSource::GreenSource(ContextPtr ctx, const PlanePoint& x0, const TruncationPolicy& pol)
    : ctx_(std::move(ctx)), x0_(x0), pol_(pol) {
  polar_about(x0, Center::A, ctx_->config());
  polar_about(x0, Center::B, ctx_->config());
  const Eigen::VectorXcd ha = ctx_->f(x0, Center::A, -1), hb = ctx_->f(x0, Center::B, -1);
  ya_ = resummed_source(*ctx_, Center::A, ha, hb);
  yb_ = resummed_source(*ctx_, Center::B, hb, ha);
}

cplx GreenSource::operator()(const PlanePoint& x) const {
  const PointData d = prepare(*ctx_, x, x0_);
  cplx v = direct_part(*ctx_, d, pol_.integral_tol);
  v += ((ctx_->f(x, Center::A).transpose() * ya_)(0) + (ctx_->f(x, Center::B).transpose() * yb_)(0)) / (2 * pi);
  return v;
}

cplx chain_term(const KernelContext& ctx, const ChainSpec& spec, const PlanePoint& x, const PlanePoint& x0) {
  prepare(ctx, x, x0);
  const std::vector<Center> seq = spec.sequence();
  Eigen::VectorXcd w = ctx.K() * ctx.f(x0, seq.back(), -1);
  for (int j = spec.n - 2; j >= 1; --j) w = ctx.kd(seq[j], w);
  const cplx t = (ctx.f(x, seq.front()).transpose() * w)(0);
  return (spec.n % 2 == 0 ? 1.0 : -1.0) * t / (2 * pi);
}

cplx chain_term_tensor_oracle(const Energy& e, const VortexPair& cfg, Center top, const PlanePoint& x,
                              const PlanePoint& x0, double tol) {
  const Center bot = other(top);
  const Polar p = polar_about(x, top, cfg), p0 = polar_about(x0, bot, cfg);
  const double s_top = cfg.flux(top), s_bot = cfg.flux(bot);
  const cplx kap = e.kappa;
  // The inner rule samples the same tau_1 nodes for every tau_2.
  std::unordered_map<double, cplx> source;
  auto src = [&](double t1) {
    auto it = source.find(t1);
    if (it != source.end()) return it->second;
    const cplx v = bessel_k(cplx(0, t1), kap * p0.r) * std::exp(-p0.theta * t1) * flux_weight(s_bot, t1);
    source.emplace(t1, v);
    return v;
  };
  auto inner = [&](double t2) {
    return integrate_line([&](double t1) { return bessel_k(cplx(0, t1 - t2), kap * cfg.rho) * src(t1); },
                          LineDomain::Real, tol)
        .value;
  };
  auto outer = integrate_line(
      [&](double t2) {
        return bessel_k(cplx(0, t2), kap * p.r) * std::exp(p.theta * t2) * flux_weight(s_top, t2) * inner(t2);
      },
      LineDomain::Real, tol);
  return outer.value / (2 * pi);
}

SeriesValue l_coefficient(const KernelContext& ctx, Center u, double nu, const PlanePoint& x0,
                          const TruncationPolicy& pol) {
  const Polar p = polar_about(x0, u, ctx.config());
  const cplx lead = bessel_k(nu, ctx.energy().kappa * p.r) * std::exp(-I * (nu * p.theta));
  SeriesValue s;
  if (pol.mode == ChainMode::Resummed) {
    s = chain_series(ctx, u, nu, x0, -1, -1);
  } else if (pol.mode == ChainMode::Fixed) {
    s = chain_series(ctx, u, nu, x0, -1, pol.n_max - 1);
  } else {
    for (int n = 2;; n += 2) {
      s = chain_series(ctx, u, nu, x0, -1, n);
      if (s.tail_bound <= pol.tail_tol * std::abs(lead + s.value)) break;
      if (n > adaptive_cap) fail(ErrorCode::NonConvergent, "L series did not reach the tail tolerance");
    }
  }
  s.value += lead;
  return s;
}

} // namespace abv
