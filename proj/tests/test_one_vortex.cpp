#include "abv/errors.hpp"
#include "abv/one_vortex.hpp"
#include "abv/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace abv;

namespace {

PlanePoint polar_point(double r, double th) { return {r * std::cos(th), r * std::sin(th)}; }

} // namespace

TEST(GreenOne, PartialWaveOracleExample) {
  Energy e = Energy::from(-1.0);
  PlanePoint x{1, 0.4}, x0{0.3, -0.2};
  cplx g = green_one(e, 0.5, x, x0);
  auto pw = green_one_oracle(e, 0.5, x, x0, 80);
  EXPECT_LT(std::abs(g - pw.value), 1e-6 * std::abs(pw.value));
  EXPECT_LT(std::abs(g - pw.value), 1e-10);
}

TEST(GreenOne, CrossOracleRandom) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 20; ++i) {
    const double ang = -pi + 2 * pi * u(rng) * 0.98 + 0.01;
    Energy e = Energy::from(std::polar(0.3 + 2 * u(rng), ang));
    const double alpha = 0.05 + 0.9 * u(rng);
    PlanePoint x = polar_point(0.2 + 1.5 * u(rng), -pi + 2 * pi * u(rng));
    PlanePoint x0 = polar_point(0.2 + 1.5 * u(rng), -pi + 2 * pi * u(rng));
    if (std::abs(std::hypot(x.x1, x.x2) - std::hypot(x0.x1, x0.x2)) < 0.05) x0 = polar_point(2.0, 1.0);
    cplx g = green_one(e, alpha, x, x0);
    auto pw = green_one_oracle(e, alpha, x, x0, 200);
    cplx rs = green_one_rs_oracle(e, alpha, x, x0);
    const double scale = std::max(1.0, std::abs(g));
    EXPECT_LT(std::abs(g - pw.value), 1e-6 * scale) << i;
    EXPECT_LT(std::abs(g - rs), 1e-8 * scale) << i;
  }
}

TEST(GreenOne, DegenerateFluxIsFree) {
  Energy e = Energy::from(I);
  PlanePoint x{0.4, 0.2}, x0{-0.3, -0.5};
  cplx ref = bessel_k(0.0, e.kappa * std::hypot(0.7, 0.7)) / (2 * pi);
  EXPECT_LT(std::abs(green_one(e, 0.0, x, x0) - ref), 1e-15);
}

TEST(GreenOne, BranchContinuity) {
  Energy e = Energy::from(I);
  const double alpha = 1.0 / 3, r = 1.0, r0 = 0.7;
  for (double th0 : {-pi / 2, -1.2, 0.9}) {
    for (double side : {1.0, -1.0}) {
      const double th = th0 + side * pi;
      if (std::abs(th) >= pi) continue;
      const double d = 1e-10;
      cplx g1 = green_one(e, alpha, polar_point(r, th - d), polar_point(r0, th0));
      cplx g2 = green_one(e, alpha, polar_point(r, th + d), polar_point(r0, th0));
      EXPECT_LT(std::abs(g1 - g2), 1e-8) << th0 << " " << side;
      // On the ray itself.
      EXPECT_LT(std::abs(green_one(e, alpha, polar_point(r, th), polar_point(r0, th0)) - g1), 1e-8);
    }
  }
  // Exactly collinear with the vortex: the segment passes through it.
  const PlanePoint x0{0.5, 0.5};
  const cplx on = green_one(e, alpha, {-0.25, -0.25}, x0);
  for (double d : {1e-9, -1e-9}) EXPECT_LT(std::abs(green_one(e, alpha, {-0.25 + d, -0.25 - d}, x0) - on), 1e-8);
}

TEST(GreenOne, CutCondition) {
  Energy e = Energy::from(I);
  const double alpha = 1.0 / 3;
  const cplx jump = std::exp(2.0 * pi * I * alpha);
  PlanePoint x0{0.3, 0.5};
  for (double r : {0.4, 1.3}) {
    cplx up = green_one(e, alpha, {-r, 0, Side::Upper}, x0);
    cplx lo = green_one(e, alpha, {-r, 0, Side::Lower}, x0);
    EXPECT_LT(std::abs(up - jump * lo), 1e-10);
    // Second argument: the adjoint condition.
    cplx up0 = green_one(e, alpha, x0, {-r, 0, Side::Upper});
    cplx lo0 = green_one(e, alpha, x0, {-r, 0, Side::Lower});
    EXPECT_LT(std::abs(up0 - std::conj(jump) * lo0), 1e-10);
    // Radial derivatives.
    const double hstep = 1e-5 * r;
    auto dr = [&](Side s) {
      return (green_one(e, alpha, {-(r + hstep), 0, s}, x0) - green_one(e, alpha, {-(r - hstep), 0, s}, x0)) /
             (2 * hstep);
    };
    EXPECT_LT(std::abs(dr(Side::Upper) - jump * dr(Side::Lower)), 1e-6);
  }
}

TEST(GreenOne, Errors) {
  Energy e = Energy::from(I);
  EXPECT_THROW(green_one(e, 0.3, {0.2, 0.1}, {0.2, 0.1}), Error);
  try {
    green_one(e, 0.3, {0, 0}, {0.2, 0.1});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::AtVortex);
  }
  try {
    green_one(e, 0.3, {0.2, 0.1}, {0.2, 0.1});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::CoincidentPoints);
  }
}

TEST(Oracle, SelfConvergenceAndSymmetry) {
  Energy e = Energy::from(-1.0);
  PlanePoint x = polar_point(1.0, 0.3), x0 = polar_point(0.5, 0.0);
  auto a = green_one_oracle(e, 0.5, x, x0, 40), b = green_one_oracle(e, 0.5, x, x0, 80);
  EXPECT_LT(std::abs(a.value - b.value), 1e-10);
  EXPECT_LT(a.tail_bound, 1e-10);
  Energy z = Energy::from(cplx(0.7, 1.3));
  PlanePoint p{0.2, -0.9}, q{-0.6, 0.4};
  auto g = green_one_oracle(z, 0.4, p, q, 200);
  auto h = green_one_oracle(z.conj(), 0.4, q, p, 200);
  EXPECT_LT(std::abs(std::conj(h.value) - g.value), 1e-12);
  // Vanishing as x0 -> 0.
  auto tiny = green_one_oracle(z, 0.4, p, polar_point(1e-8, 0.5), 40);
  EXPECT_LT(std::abs(tiny.value), 1e-4);
}

TEST(RsOracle, DegenerateAnglesConverge) {
  Energy e = Energy::from(I);
  cplx a = green_one_rs_oracle(e, 1.0 / 3, polar_point(1.0, 0.4), polar_point(0.7, 0.4));
  EXPECT_TRUE(std::isfinite(std::abs(a)));
  EXPECT_LT(std::abs(a - green_one(e, 1.0 / 3, polar_point(1.0, 0.4), polar_point(0.7, 0.4))), 1e-9);
  // Near Delta theta = pi the denominator nearly vanishes at s = 0.
  PlanePoint x = polar_point(1.0, pi / 2 - 1e-6), x0 = polar_point(0.7, -pi / 2);
  cplx near = green_one_rs_oracle(e, 1.0 / 3, x, x0);
  EXPECT_LT(std::abs(near - green_one(e, 1.0 / 3, x, x0)), 1e-7);
}

TEST(GreenOne, VanishingAtVortex) {
  Energy e = Energy::from(I);
  for (double alpha : {1.0 / 3, 0.8}) {
    PlanePoint x{0.6, 0.4};
    auto g = [&](double r0) { return std::abs(green_one(e, alpha, x, polar_point(r0, 1.1))); };
    const double slope = std::log(g(1e-2) / g(1e-3)) / std::log(10.0);
    EXPECT_NEAR(slope, std::min(alpha, 1 - alpha), 0.05);
  }
}

TEST(GreenOne, AsymptoticCoefficients) {
  Energy e = Energy::from(I);
  const double alpha = 1.0 / 3;
  PlanePoint x{0.6, 0.4};
  const int m = 64;
  auto mode = [&](double r0, double nu) {
    cplx s = 0.0;
    for (int k = 0; k < m; ++k) {
      const double th0 = -pi + 2 * pi * (k + 0.5) / m;
      s += green_one(e, alpha, x, polar_point(r0, th0)) * std::exp(I * (nu * th0));
    }
    return s / double(m) / std::pow(r0, std::abs(nu));
  };
  for (double nu : {alpha - 1, alpha}) {
    // Richardson in r0^2 removes the next order.
    const double r1 = 2e-3, r2 = 1e-3;
    cplx c1 = mode(r1, nu), c2 = mode(r2, nu);
    cplx c = (4.0 * c2 - c1) / 3.0;
    const double a = std::abs(nu);
    cplx expect = std::sin(pi * alpha) / (2 * pi * pi) *
                  (nu < 0 ? std::tgamma(alpha) / (1 - alpha) : std::tgamma(1 - alpha) / alpha) *
                  std::exp(a * std::log(e.kappa / 2.0)) * deficiency_one(nu < 0 ? -1 : 0, e, alpha, x);
    EXPECT_LT(std::abs(c - expect) / std::abs(expect), 1e-4) << nu;
  }
}

TEST(DeficiencyOne, Values) {
  Energy e = Energy::from(-1.0);
  EXPECT_LT(std::abs(deficiency_one(0, e, 1.0 / 3, {1, 0}) - std::cyl_bessel_k(1.0 / 3, 1.0)), 1e-13);
  Energy z = Energy::from(I);
  const double alpha = 0.3;
  cplx up = deficiency_one(-1, z, alpha, {-0.8, 0, Side::Upper});
  cplx lo = deficiency_one(-1, z, alpha, {-0.8, 0, Side::Lower});
  EXPECT_LT(std::abs(up - std::exp(2.0 * pi * I * alpha) * lo), 1e-13);
  EXPECT_THROW(deficiency_one(1, z, alpha, {1, 0}), Error);
  // Radial L^2 quadrature of |K_alpha(kappa r)|^2 r converges to the closed form for real kappa.
  for (double nu : {alpha, 1 - alpha}) {
    auto li = integrate_line(
        [&](double r) { return cplx(std::norm(bessel_k(nu, e.kappa * r)) * r); }, LineDomain::HalfLine, 1e-10);
    EXPECT_NEAR(li.value.real(), pi * nu / (2 * std::sin(pi * nu)), 1e-9);
  }
}

TEST(ResolventMap, IdentityCaseAndExponent) {
  Energy z = Energy::from(I);
  auto r = resolvent_map_check(0, z, z, 1.0 / 3, {0.8, 0.3}, 25);
  EXPECT_EQ(r.residual, 0.0);
}

TEST(ResolventMap, DeskScale) {
  Energy z = Energy::from(I), w = Energy::from(2.0 * I);
  auto r = resolvent_map_check(0, z, w, 1.0 / 3, {0.8, 0.3}, 25);
  EXPECT_LT(r.residual, 1e-4);
  auto r1 = resolvent_map_check(-1, z, w, 1.0 / 3, {0.8, 0.3}, 25);
  EXPECT_LT(r1.residual, 1e-4);
  EXPECT_THROW(resolvent_map_check(0, z, w, 1.0 / 3, {0.8, 0.3}, 5), Error);
}
