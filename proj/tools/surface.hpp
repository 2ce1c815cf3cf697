#pragma once

#include "abv/deficiency_two.hpp"

#include <string>
#include <vector>

namespace abv {

struct GridSpec {
  double x_min = -1.5, x_max = 2.5;
  double y_min = -1.5, y_max = 2.5;
  int nx = 161, ny = 161;

  PlanePoint point(int i, int j) const;
};

struct SurfaceGrid {
  GridSpec spec;
  std::string function;
  // Row-major, j (x2 index) outer.
  std::vector<cplx> values;
  std::vector<char> mask;
  std::size_t masked() const;
  cplx at(int i, int j) const { return values[static_cast<std::size_t>(j) * spec.nx + i]; }
  bool is_masked(int i, int j) const { return mask[static_cast<std::size_t>(j) * spec.nx + i] != 0; }
};

// Samples on the x1-axis carry the upper side tag. A cell is masked when its evaluation throws
// (vortex or source point); masked cells hold no value.
SurfaceGrid evaluate_grid(const PlaneFunction& f, const GridSpec& spec, int threads, const std::string& id);

struct SurfaceRequest {
  std::string function; // psi-{a,b}-{lower,upper}, green1, green2, pauli-green-{plus,minus}
  Energy energy = Energy::from(cplx(0.0, 1.0));
  VortexPair cfg;
  PlanePoint x0{0.5, 0.5};
  ContextOptions context;
};

// InvalidArgument for an unknown id. The returned function owns its contexts.
PlaneFunction surface_function(const SurfaceRequest& r);

// Grid index nearest to a point.
std::pair<int, int> nearest_index(const GridSpec& s, const PlanePoint& p);

} // namespace abv
