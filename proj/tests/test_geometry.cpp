#include "abv/errors.hpp"
#include "abv/geometry.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace abv;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ConfigError;
}

} // namespace

TEST(Polar, Basic) {
  VortexPair cfg{1.0 / 3, 2.0 / 3, 2.0};
  Polar p = polar_about({0, 1}, Center::A, cfg);
  EXPECT_NEAR(p.r, 1.0, 1e-15);
  EXPECT_NEAR(p.theta, pi / 2, 1e-15);
  // Between the vortices: no cut, theta_b = 0.
  Polar q = polar_about({1.0, 0.0, Side::Upper}, Center::B, cfg);
  EXPECT_NEAR(q.r, 1.0, 1e-15);
  EXPECT_EQ(q.theta, 0.0);
  EXPECT_EQ(code_of([&] { polar_about({0, 0}, Center::A, cfg); }), ErrorCode::AtVortex);
  EXPECT_EQ(code_of([&] { polar_about({2, 0}, Center::B, cfg); }), ErrorCode::AtVortex);
}

TEST(Polar, CutSides) {
  VortexPair cfg{1.0 / 3, 2.0 / 3, 1.0};
  EXPECT_NEAR(polar_about({-1, 0, Side::Upper}, Center::A, cfg).theta, pi, 1e-15);
  EXPECT_NEAR(polar_about({-1, 0, Side::Lower}, Center::A, cfg).theta, -pi, 1e-15);
  // Upper side of L_b is theta_b = -pi, lower side +pi (counterclockwise angle of b - x).
  EXPECT_NEAR(polar_about({2, 0, Side::Upper}, Center::B, cfg).theta, -pi, 1e-15);
  EXPECT_NEAR(polar_about({2, 0, Side::Lower}, Center::B, cfg).theta, pi, 1e-15);
  EXPECT_NEAR(polar_about({2, 1e-9}, Center::B, cfg).theta, -pi, 1e-8);
  // On L_a, theta_b = 0 and r_b = r_a + rho.
  Polar pb = polar_about({-0.7, 0, Side::Upper}, Center::B, cfg);
  EXPECT_EQ(pb.theta, 0.0);
  EXPECT_NEAR(pb.r, 1.7, 1e-15);
  EXPECT_EQ(code_of([&] { polar_about({-1, 0}, Center::A, cfg); }), ErrorCode::MissingSideTag);
  EXPECT_EQ(code_of([&] { polar_about({3, 0}, Center::A, cfg); }), ErrorCode::MissingSideTag);
}

TEST(Polar, ThetaBNearA) {
  VortexPair cfg{1.0 / 3, 2.0 / 3, 1.0};
  for (double th : {0.3, 1.2, -2.0}) {
    double r = 1e-4;
    double tb = polar_about({r * std::cos(th), r * std::sin(th)}, Center::B, cfg).theta;
    EXPECT_NEAR(tb, -r * std::sin(th) / cfg.rho, 1e-8);
  }
}

TEST(Winding, Examples) {
  VortexPair cfg{1.0 / 3, 2.0 / 3, 1.0};
  auto w = winding_factors({0.5, -0.3}, {0.5, 0.3}, cfg);
  EXPECT_EQ(w.eta_a, 0.0);
  EXPECT_EQ(w.eta_b, 0.0);
  EXPECT_EQ(w.zeta_a, cplx(1.0));
  w = winding_factors({-1, 0.1}, {-1, -0.1}, cfg);
  EXPECT_EQ(w.eta_a, 2 * pi);
  EXPECT_NEAR(std::abs(w.zeta_a - std::exp(2.0 * pi * I * cfg.alpha)), 0.0, 1e-15);
  EXPECT_EQ(w.zeta_b, cplx(1.0));
  w = winding_factors({2, -0.1}, {2, 0.1}, cfg);
  EXPECT_EQ(w.eta_b, 2 * pi);
  EXPECT_NEAR(std::abs(w.zeta_b - std::exp(2.0 * pi * I * cfg.beta)), 0.0, 1e-15);
  EXPECT_EQ(w.zeta_a, cplx(1.0));
}

TEST(Winding, SweptAngleStaysCentral) {
  VortexPair cfg{1.0 / 3, 2.0 / 3, 1.0};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 4);
  for (int i = 0; i < 2000; ++i) {
    PlanePoint x{u(rng), u(rng)}, x0{u(rng), u(rng)};
    auto w = winding_factors(x, x0, cfg);
    double da = polar_about(x, Center::A, cfg).theta - polar_about(x0, Center::A, cfg).theta - w.eta_a;
    double db = polar_about(x, Center::B, cfg).theta - polar_about(x0, Center::B, cfg).theta - w.eta_b;
    EXPECT_LT(std::abs(da), pi);
    EXPECT_LT(std::abs(db), pi);
    // Exclusivity.
    EXPECT_TRUE(w.eta_a == 0.0 || w.eta_b == 0.0);
    // Swap antisymmetry.
    auto r = winding_factors(x0, x, cfg);
    EXPECT_EQ(r.eta_a, -w.eta_a);
    EXPECT_EQ(r.eta_b, -w.eta_b);
    // Homotopy stability: move both endpoints by less than half their clearance from the cuts and
    // the segment's clearance from the vortices.
    auto seg_dist = [&](double px, double py) {
      double dx = x.x1 - x0.x1, dy = x.x2 - x0.x2;
      double t = std::clamp(((px - x0.x1) * dx + (py - x0.x2) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
      return std::hypot(x0.x1 + t * dx - px, x0.x2 + t * dy - py);
    };
    auto cut_dist = [&](const PlanePoint& p) {
      double d = std::abs(p.x2);
      if (p.x1 >= 0 && p.x1 <= 1) d = std::min(std::hypot(p.x1, p.x2), std::hypot(p.x1 - 1, p.x2));
      return d;
    };
    double clear = std::min({cut_dist(x), cut_dist(x0), seg_dist(0, 0), seg_dist(1, 0)});
    double d = 0.45 * clear;
    auto p = winding_factors({x.x1 + 0.6 * d, x.x2 - 0.8 * d}, {x0.x1 - 0.8 * d, x0.x2 + 0.6 * d}, cfg);
    EXPECT_EQ(p.eta_a, w.eta_a);
    EXPECT_EQ(p.eta_b, w.eta_b);
  }
}

TEST(Winding, TaggedAndDegenerate) {
  VortexPair cfg{1.0 / 3, 2.0 / 3, 1.0};
  // Endpoint on the axis between the vortices: no crossing.
  auto w = winding_factors({0.5, 0.0}, {-1, -0.5}, cfg);
  EXPECT_EQ(w.eta_a, 0.0);
  // Tagged point on L_a, other point below.
  w = winding_factors({-1, 0, Side::Upper}, {-1, -0.5}, cfg);
  EXPECT_EQ(w.eta_a, 2 * pi);
  w = winding_factors({-1, 0, Side::Lower}, {-1, -0.5}, cfg);
  EXPECT_EQ(w.eta_a, 0.0);
  EXPECT_EQ(code_of([&] { winding_factors({-1, 0}, {-1, -0.5}, cfg); }), ErrorCode::DegenerateSegment);
  EXPECT_EQ(code_of([&] { winding_factors({-1, 1}, {1, -1}, cfg); }), ErrorCode::DegenerateSegment);
  EXPECT_EQ(code_of([&] { winding_factors({-1, 0.0}, {0.5, 0.0}, cfg); }), ErrorCode::DegenerateSegment);
  EXPECT_EQ(code_of([&] { winding_factors({-1, 1e-13}, {-1, 0.5}, cfg); }), ErrorCode::DegenerateSegment);
}

TEST(Reflection, SwapsCenters) {
  VortexPair cfg{0.2, 0.7, 1.3};
  for (PlanePoint x : {PlanePoint{0.4, 0.9}, PlanePoint{-2, -0.3}, PlanePoint{3, 0, Side::Upper}}) {
    PlanePoint y = reflect(x, cfg);
    VortexPair s = swapped(cfg);
    Polar pa = polar_about(x, Center::A, cfg), pb = polar_about(y, Center::B, s);
    EXPECT_NEAR(pa.r, pb.r, 1e-14);
    EXPECT_NEAR(pa.theta, pb.theta, 1e-14);
  }
  EXPECT_EQ(eta_single({-1, 0.1}, {-1, -0.1}), 2 * pi);
  EXPECT_EQ(eta_single({5, 0.1}, {5, -0.1}), 0.0);
}
