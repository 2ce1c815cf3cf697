#pragma once

#include "abv/geometry.hpp"
#include "abv/quadrature.hpp"

#include <Eigen/Dense>

#include <memory>
#include <mutex>

namespace abv {

struct ContextOptions {
  double tol = 1e-10;
  // Smallest distance to a vortex at which f vectors keep the grid tolerance.
  double min_radius = 1e-3;
  double step_scale = 1.0;
  std::size_t max_nodes = 4096;
};

// Everything shared by evaluations at one (z, cfg): the tau-grid, the weight-folded
// convolution matrix K, the two flux diagonals and lazily factorized I - K D_u K D_v.
class KernelContext {
public:
  KernelContext(const Energy& e, const VortexPair& cfg, const ContextOptions& opt = {});

  const Energy& energy() const { return energy_; }
  const VortexPair& config() const { return cfg_; }
  const ContextOptions& options() const { return opt_; }
  const TauGrid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }
  const Eigen::MatrixXcd& K() const { return k_; }
  const Eigen::VectorXcd& D(Center c) const { return c == Center::A ? da_ : db_; }

  // LU of I - K D_u K D_v with v the other vortex.
  const Eigen::PartialPivLU<Eigen::MatrixXcd>& factor(Center u) const;

  // K_{i tau}(kappa r_c) e^{s theta_c tau} D_c(tau), weight-folded; s = +1 for field points,
  // -1 for source points. At the vortex itself this is the delta limit e_0 / sqrt(h).
  Eigen::VectorXcd f(const PlanePoint& x, Center c, int s = 1) const;
  // K_{nu + i tau}(kappa rho), weight-folded.
  Eigen::VectorXcd g(double nu) const;
  // K (D_c y).
  Eigen::VectorXcd kd(Center c, const Eigen::VectorXcd& y) const;

  // e^{-Re kappa rho}: bound on |K D| per factor.
  double contraction() const;

private:
  Energy energy_;
  VortexPair cfg_;
  ContextOptions opt_;
  TauGrid grid_;
  Eigen::MatrixXcd k_;
  Eigen::VectorXcd da_, db_;
  mutable std::once_flag once_a_, once_b_;
  mutable Eigen::PartialPivLU<Eigen::MatrixXcd> lu_a_, lu_b_;
};

using ContextPtr = std::shared_ptr<const KernelContext>;

ContextPtr make_context(const Energy& e, const VortexPair& cfg, const ContextOptions& opt = {});

inline Center other(Center c) { return c == Center::A ? Center::B : Center::A; }

} // namespace abv

namespace abv {

struct SeriesValue {
  cplx value;
  double tail_bound = 0.0;
  int terms = 0;
};

// sum_{k>=1} S_k(u, nu; x) with the angles of x multiplied by s (s = -1 gives the
// source-point variant). n_max < 0 sums the series in closed form through factor(u).
SeriesValue chain_series(const KernelContext& ctx, Center u, double nu, const PlanePoint& x, int s, int n_max);

} // namespace abv
