#pragma once

#include "abv/geometry.hpp"
#include "abv/special.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace abv {

struct PlaneQuadOptions {
  double radius = 25.0;
  // Gauss-Legendre nodes per angular piece.
  int angular_nodes = 16;
  // Angular pieces are at most this wide (radians).
  double max_angular_piece = pi / 4;
  // First radial panel [0, r1] uses r = r1 t^3; further panels double in length.
  double first_radius = 0.25;
  int first_panel_nodes = 20;
  int panel_nodes = 12;
};

// int_{|y| < R} f(y) d^2y, split into the Voronoi cells of the given centers and integrated in
// polar coordinates about each center, so singularities at the centers are handled by the radial map.
// The sum is assembled in a fixed order.
cplx integrate_plane(const std::function<cplx(const PlanePoint&)>& f, const std::vector<PlanePoint>& centers,
                     const PlaneQuadOptions& opt = {});

// Same rule for n integrands at once, f returning a vector of length n.
Eigen::VectorXcd integrate_plane_many(const std::function<Eigen::VectorXcd(const PlanePoint&)>& f, Eigen::Index n,
                                      const std::vector<PlanePoint>& centers, const PlaneQuadOptions& opt = {});

} // namespace abv
