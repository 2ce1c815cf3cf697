#include "abv/geometry.hpp"

#include "abv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abv {

void VortexPair::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0))
    fail(ErrorCode::InvalidArgument, "fluxes must lie in [0, 1]");
  if (!(rho > 0.0)) fail(ErrorCode::DegenerateSeparation, "rho must be positive");
}

namespace {

// Signed vertical coordinate; an on-axis tagged point gets a signed zero.
double signed_y(const PlanePoint& x) {
  if (x.x2 != 0.0) return x.x2;
  if (x.side == Side::Upper) return 0.0;
  if (x.side == Side::Lower) return -0.0;
  return 0.0;
}

int side_sign(const PlanePoint& x) {
  if (x.x2 > 0.0) return 1;
  if (x.x2 < 0.0) return -1;
  if (x.side == Side::Upper) return 1;
  if (x.side == Side::Lower) return -1;
  return 0;
}

bool on_axis_cut(double x1, double rho) { return x1 < 0.0 || x1 > rho; }

} // namespace

bool on_cut(const PlanePoint& x, const VortexPair& cfg) { return x.x2 == 0.0 && on_axis_cut(x.x1, cfg.rho); }

Polar polar_raw(const PlanePoint& x, Center c, const VortexPair& cfg) {
  if (on_cut(x, cfg) && x.side == Side::None)
    fail(ErrorCode::MissingSideTag, "point lies on a cut and needs a side tag");
  const double y = signed_y(x);
  if (c == Center::A) return {std::hypot(x.x1, x.x2), std::atan2(y, x.x1)};
  return {std::hypot(cfg.rho - x.x1, x.x2), std::atan2(-y, cfg.rho - x.x1)};
}

Polar polar_about(const PlanePoint& x, Center c, const VortexPair& cfg, double eps) {
  Polar p = polar_raw(x, c, cfg);
  if (p.r < eps) fail(ErrorCode::AtVortex, c == Center::A ? "point at vortex a" : "point at vortex b");
  return p;
}

namespace {

enum class Crossing { None, La, Lb };

// Where the segment x0 -> x meets the real axis, when it changes half-plane.
Crossing classify(const PlanePoint& x, const PlanePoint& x0, double rho, bool vortex_limit) {
  const int s = side_sign(x), s0 = side_sign(x0);
  if (s == 0 || s0 == 0) {
    // An untagged endpoint on the axis: only legal off the cuts.
    if ((s == 0 && on_axis_cut(x.x1, rho)) || (s0 == 0 && on_axis_cut(x0.x1, rho)))
      fail(ErrorCode::DegenerateSegment, "untagged endpoint on a cut");
    if (x.x2 == 0.0 && x0.x2 == 0.0) {
      const double lo = std::min(x.x1, x0.x1), hi = std::max(x.x1, x0.x1);
      if ((lo < segment_eps && hi > -segment_eps) || (lo < rho + segment_eps && hi > rho - segment_eps))
        fail(ErrorCode::DegenerateSegment, "segment runs through a vortex");
    }
    return Crossing::None;
  }
  for (const PlanePoint* p : {&x, &x0})
    if (p->x2 != 0.0 && std::abs(p->x2) < segment_eps && on_axis_cut(p->x1, rho))
      fail(ErrorCode::DegenerateSegment, "endpoint inside the cut epsilon band; tag it");
  if (s == s0) return Crossing::None;
  double xc;
  const double y = x.x2, y0 = x0.x2;
  if (y == 0.0 && y0 == 0.0) xc = 0.5 * (x.x1 + x0.x1);
  else xc = x0.x1 + (x.x1 - x0.x1) * y0 / (y0 - y);
  if (std::abs(xc) < segment_eps || std::abs(xc - rho) < segment_eps) {
    // Both windings give the same value in the limit; take the one without a crossing.
    if (vortex_limit) return Crossing::None;
    fail(ErrorCode::DegenerateSegment, "segment passes through a vortex");
  }
  if (xc < 0.0) return Crossing::La;
  if (xc > rho) return Crossing::Lb;
  return Crossing::None;
}

} // namespace

WindingFactors winding_factors(const PlanePoint& x, const PlanePoint& x0, const VortexPair& cfg, bool vortex_limit) {
  WindingFactors w;
  const Crossing c = classify(x, x0, cfg.rho, vortex_limit);
  const int s0 = side_sign(x0);
  if (c == Crossing::La) w.eta_a = s0 < 0 ? 2 * pi : -2 * pi;
  if (c == Crossing::Lb) w.eta_b = s0 > 0 ? 2 * pi : -2 * pi;
  w.zeta_a = std::exp(I * (cfg.alpha * w.eta_a));
  w.zeta_b = std::exp(I * (cfg.beta * w.eta_b));
  return w;
}

double eta_single(const PlanePoint& x, const PlanePoint& x0, bool vortex_limit) {
  // A vortex pair with b pushed to infinity sees only L_a.
  const Crossing c = classify(x, x0, std::numeric_limits<double>::infinity(), vortex_limit);
  if (c != Crossing::La) return 0.0;
  return side_sign(x0) < 0 ? 2 * pi : -2 * pi;
}

PlanePoint reflect(const PlanePoint& x, const VortexPair& cfg) {
  Side s = x.side == Side::Upper ? Side::Lower : x.side == Side::Lower ? Side::Upper : Side::None;
  return {cfg.rho - x.x1, -x.x2, s};
}

VortexPair swapped(const VortexPair& cfg) { return {cfg.beta, cfg.alpha, cfg.rho}; }

} // namespace abv
