#include "abv/errors.hpp"
#include "abv/one_vortex.hpp"
#include "abv/two_vortex_green.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace abv;

namespace {

const VortexPair cfg{1.0 / 3, 2.0 / 3, 1.0};

const KernelContext& ctx_i() {
  static ContextPtr c = make_context(Energy::from(I), cfg);
  return *c;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ConfigError;
}

PlanePoint around(Center c, double r, double th) {
  if (c == Center::A) return {r * std::cos(th), r * std::sin(th)};
  // theta_b is the angle of b - x.
  return {cfg.rho - r * std::cos(th), -r * std::sin(th)};
}

} // namespace

TEST(ChainSpec, Alternates) {
  auto s = ChainSpec{5, Center::B}.sequence();
  ASSERT_EQ(s.size(), 5u);
  for (std::size_t j = 0; j + 1 < s.size(); ++j) EXPECT_NE(s[j], s[j + 1]);
  EXPECT_EQ(s.front(), Center::B);
  EXPECT_EQ(s.back(), Center::B);
  EXPECT_THROW((ChainSpec{1, Center::A}.sequence()), Error);
}

TEST(GreenTwo, HermitianSymmetry) {
  auto conj_ctx = make_context(Energy::from(-I), cfg);
  for (auto [x, x0] : {std::pair{PlanePoint{0.4, 0.2}, PlanePoint{-0.3, 0.5}},
                       std::pair{PlanePoint{1.6, -0.4}, PlanePoint{-0.5, 0.3}},
                       std::pair{PlanePoint{0.5, 0.1}, PlanePoint{0.7, -1.2}}}) {
    cplx g = green_two(ctx_i(), x, x0);
    cplx h = green_two(*conj_ctx, x0, x);
    EXPECT_LT(std::abs(std::conj(h) - g), 1e-8);
  }
}

TEST(GreenTwo, ReducesToOneVortex) {
  Energy z = Energy::from(I);
  auto c0 = make_context(z, {1.0 / 3, 0.0, 1.0});
  PlanePoint x{0.4, 0.2}, x0{-0.3, 0.5};
  EXPECT_LT(std::abs(green_two(*c0, x, x0) - green_one(z, 1.0 / 3, x, x0)), 1e-6);
  // Far second vortex: its influence is exponentially small.
  Energy w = Energy::from(-4.0);
  auto far = make_context(w, {1.0 / 3, 2.0 / 3, 12.0});
  EXPECT_LT(std::abs(green_two(*far, x, x0) - green_one(w, 1.0 / 3, x, x0)), 1e-8);
}

TEST(GreenTwo, VanishesAtVortices) {
  PlanePoint x0{-0.3, 0.5};
  for (Center c : {Center::A, Center::B}) {
    const double s = cfg.flux(c);
    auto g = [&](double r) { return std::abs(green_two(ctx_i(), around(c, r, 1.0), x0)); };
    const double slope = std::log(g(1e-3) / g(1e-4)) / std::log(10.0);
    EXPECT_NEAR(slope, std::min(s, 1 - s), 0.05);
  }
}

TEST(GreenTwo, CutConditionsAndContinuity) {
  PlanePoint x0{0.3, 0.6};
  const cplx ja = std::exp(2.0 * pi * I * cfg.alpha), jb = std::exp(2.0 * pi * I * cfg.beta);
  for (double r : {0.3, 0.9, 2.0}) {
    cplx up = green_two(ctx_i(), {-r, 0, Side::Upper}, x0), lo = green_two(ctx_i(), {-r, 0, Side::Lower}, x0);
    EXPECT_LT(std::abs(up - ja * lo), 1e-9) << r;
    // On L_b the lower side is theta_b = pi.
    up = green_two(ctx_i(), {cfg.rho + r, 0, Side::Upper}, x0);
    lo = green_two(ctx_i(), {cfg.rho + r, 0, Side::Lower}, x0);
    EXPECT_LT(std::abs(lo - jb * up), 1e-9) << r;
  }
  for (double x1 : {0.2, 0.5, 0.8}) {
    cplx u = green_two(ctx_i(), {x1, 1e-9}, x0), l = green_two(ctx_i(), {x1, -1e-9}, x0);
    EXPECT_LT(std::abs(u - l), 1e-8) << x1;
  }
}

TEST(GreenTwo, TensorOracleForShortestChain) {
  Energy z = Energy::from(I);
  PlanePoint x{0.4, 0.2}, x0{-0.3, 0.5};
  for (Center top : {Center::A, Center::B}) {
    cplx c = chain_term(ctx_i(), {2, top}, x, x0);
    cplx o = chain_term_tensor_oracle(z, cfg, top, x, x0);
    EXPECT_LT(std::abs(c - o), 1e-6);
  }
}

TEST(GreenTwo, ChainBoundsAndDecay) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 2.5);
  const double q = ctx_i().contraction();
  for (int i = 0; i < 6; ++i) {
    PlanePoint x{u(rng), u(rng)}, x0{u(rng), u(rng)};
    for (Center top : {Center::A, Center::B}) {
      const Center bot = other(top);
      cplx t2 = chain_term(ctx_i(), {2, top}, x, x0);
      const double bound = ctx_i().f(x, top).norm() * ctx_i().f(x0, bot, -1).norm() * pi * q / (2 * pi);
      EXPECT_LE(std::abs(t2), bound * (1 + 1e-6));
      for (int n = 2; n <= 6; ++n) {
        const double tn = ctx_i().f(x, top).norm() * ctx_i().f(x0, n % 2 ? top : bot, -1).norm() * std::pow(q, n - 1) / 2;
        EXPECT_LE(std::abs(chain_term(ctx_i(), {n, top}, x, x0)), tn * (1 + 1e-6));
      }
    }
  }
}

TEST(GreenTwo, TruncationCertificate) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.5, 2.5);
  for (int i = 0; i < 6; ++i) {
    PlanePoint x{u(rng), u(rng)}, x0{u(rng), u(rng)};
    cplx full = green_two(ctx_i(), x, x0);
    for (int n : {4, 6, 10}) {
      TruncationPolicy p;
      p.mode = ChainMode::Fixed;
      p.n_max = n;
      auto a = green_two_detailed(ctx_i(), x, x0, p);
      p.n_max = n + 2;
      auto b = green_two_detailed(ctx_i(), x, x0, p);
      EXPECT_GE(a.tail_bound, std::abs(a.value - b.value));
      EXPECT_GE(a.tail_bound, std::abs(a.value - full));
    }
    TruncationPolicy ad;
    ad.mode = ChainMode::Adaptive;
    auto v = green_two_detailed(ctx_i(), x, x0, ad);
    EXPECT_LE(std::abs(v.value - full), 1e-10 * std::abs(full) + 1e-14);
    EXPECT_LE(v.tail_bound, 1e-10 * std::abs(v.value));
  }
}

TEST(GreenTwo, SourceReuseMatchesDirect) {
  PlanePoint x0{-0.3, 0.5};
  GreenSource src(make_context(Energy::from(I), cfg), x0);
  for (PlanePoint x : {PlanePoint{0.4, 0.2}, PlanePoint{2.0, -0.7}, PlanePoint{-1.0, 0, Side::Lower}})
    EXPECT_LT(std::abs(src(x) - green_two(ctx_i(), x, x0)), 1e-14);
}

TEST(GreenTwo, RayThroughVortex) {
  // Segments from x0 through a (first) and through b (second); the value on the ray is the common limit.
  for (auto [x, x0] : {std::pair{PlanePoint{-1, 1}, PlanePoint{1, -1}}, std::pair{PlanePoint{1.5, -0.5}, PlanePoint{0.5, 0.5}}}) {
    const cplx on = green_two(ctx_i(), x, x0);
    for (double d : {1e-9, -1e-9})
      EXPECT_LT(std::abs(green_two(ctx_i(), {x.x1 + d, x.x2 + d}, x0) - on), 1e-8);
  }
}

TEST(GreenTwo, Errors) {
  EXPECT_EQ(code_of([] { green_two(ctx_i(), {0.4, 0.2}, {0.4, 0.2}); }), ErrorCode::CoincidentPoints);
  EXPECT_EQ(code_of([] { green_two(ctx_i(), {0, 0}, {0.4, 0.2}); }), ErrorCode::AtVortex);
  EXPECT_EQ(code_of([] { green_two(ctx_i(), {1, 0}, {0.4, 0.2}); }), ErrorCode::AtVortex);
  ContextOptions small;
  small.max_nodes = 100;
  EXPECT_EQ(code_of([&] { make_context(Energy::from(I), cfg, small); }), ErrorCode::GridBudgetExceeded);
}

TEST(LCoefficient, MatchesGreenExpansion) {
  PlanePoint x0{-0.3, 0.5};
  const cplx kap = ctx_i().energy().kappa;
  const int m = 64;
  for (Center c : {Center::A, Center::B}) {
    const double s = cfg.flux(c);
    for (double nu : {s - 1, s}) {
      const double a = std::abs(nu);
      const double r = 1e-2;
      cplx mode = 0.0;
      for (int k = 0; k < m; ++k) {
        const double th = -pi + 2 * pi * (k + 0.5) / m;
        mode += green_two(ctx_i(), around(c, r, th), x0) * std::exp(-I * (nu * th));
      }
      mode /= double(m);
      // The mode is an exact multiple of I_|nu|(kappa r).
      cplx coef = mode / bessel_i(a, kap * r) / std::tgamma(a + 1);
      cplx expect = std::sin(pi * s) / (2 * pi * pi) * std::tgamma(1 - a) / a *
                    l_coefficient(ctx_i(), c, nu, x0).value;
      EXPECT_LT(std::abs(coef - expect) / std::abs(expect), 1e-4) << int(c) << " " << nu;
    }
  }
}

TEST(LCoefficient, SeriesAndLargeSeparation) {
  PlanePoint x0{0.6, 0.0};
  cplx res = l_coefficient(ctx_i(), Center::A, cfg.alpha, x0).value;
  TruncationPolicy p;
  p.mode = ChainMode::Fixed;
  p.n_max = 30;
  EXPECT_LT(std::abs(l_coefficient(ctx_i(), Center::A, cfg.alpha, x0, p).value - res), 1e-12);
  // Between the vortices the side tag is irrelevant.
  EXPECT_EQ(l_coefficient(ctx_i(), Center::A, cfg.alpha, {0.6, 0, Side::Upper}).value, res);
  EXPECT_EQ(l_coefficient(ctx_i(), Center::A, cfg.alpha, {0.6, 0, Side::Lower}).value, res);
  PlanePoint y{-0.4, 0.3};
  const Energy z = Energy::from(I);
  double prev = 1e300;
  for (double rho : {2.0, 4.0, 8.0}) {
    auto c = make_context(z, {cfg.alpha, cfg.beta, rho});
    const Polar p0 = polar_about(y, Center::A, c->config());
    cplx lead = bessel_k(cfg.alpha - 1, z.kappa * p0.r) * std::exp(-I * ((cfg.alpha - 1) * p0.theta));
    const double dev = std::abs(l_coefficient(*c, Center::A, cfg.alpha - 1, y).value - lead);
    EXPECT_LT(dev, std::exp(-z.kappa.real() * rho));
    EXPECT_LT(dev, prev);
    prev = dev;
  }
}
