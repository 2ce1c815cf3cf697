#pragma once

#include "abv/special.hpp"

namespace abv {

enum class Side { None, Upper, Lower };
enum class Center { A, B };

struct VortexPair {
  double alpha = 1.0 / 3;
  double beta = 2.0 / 3;
  double rho = 1.0;

  double flux(Center c) const { return c == Center::A ? alpha : beta; }
  // Throws InvalidArgument unless fluxes lie in [0, 1] and rho > 0.
  void validate() const;
};

// Cartesian point; the side tag resolves points lying exactly on a cut.
struct PlanePoint {
  double x1 = 0.0;
  double x2 = 0.0;
  Side side = Side::None;
};

struct Polar {
  double r;
  double theta;
};

inline constexpr double at_vortex_eps = 1e-14;
inline constexpr double segment_eps = 1e-12;

// theta_a = arg(x - a); theta_b = arg(b - x), so theta_b = 0 on L_a and +-pi on the two sides of L_b.
Polar polar_about(const PlanePoint& x, Center c, const VortexPair& cfg, double eps = at_vortex_eps);

// Polar pair without the vortex check; r may be 0.
Polar polar_raw(const PlanePoint& x, Center c, const VortexPair& cfg);

bool on_cut(const PlanePoint& x, const VortexPair& cfg);

struct WindingFactors {
  cplx zeta_a{1.0};
  cplx zeta_b{1.0};
  double eta_a = 0.0;
  double eta_b = 0.0;
};

// Phase data for the segment from x0 to x. A segment through a vortex (endpoints off the axis) raises
// DegenerateSegment unless vortex_limit is set, in which case it counts as not crossing: the kernels
// are continuous across that ray, so either winding gives the same value.
WindingFactors winding_factors(const PlanePoint& x, const PlanePoint& x0, const VortexPair& cfg,
                               bool vortex_limit = false);

// Winding of the segment x0 -> x across the negative x1-axis only (single vortex at the origin).
double eta_single(const PlanePoint& x, const PlanePoint& x0, bool vortex_limit = false);

// x -> (rho - x1, -x2): exchanges the roles of a and b, preserving orientation.
PlanePoint reflect(const PlanePoint& x, const VortexPair& cfg);
VortexPair swapped(const VortexPair& cfg);

} // namespace abv
