#pragma once

#include "abv/kernel_context.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <vector>

namespace abv {

// Channel (u, nu) with nu = omega - 1 (lower) or omega (upper), omega the flux at u.
// Flat order 1..4: (a, alpha-1), (a, alpha), (b, beta-1), (b, beta).
struct ChannelIndex {
  Center u = Center::A;
  bool upper = false;

  int flat() const { return (u == Center::A ? 1 : 3) + (upper ? 1 : 0); }
  static ChannelIndex from_flat(int j);
  double nu(const VortexPair& cfg) const { return cfg.flux(u) - (upper ? 0.0 : 1.0); }
};

inline constexpr std::array<ChannelIndex, 4> all_channels{
    ChannelIndex{Center::A, false}, ChannelIndex{Center::A, true}, ChannelIndex{Center::B, false},
    ChannelIndex{Center::B, true}};

enum class PsiMethod { Series, Resummed };

// Entries indexed [i][j] with i the row order (0: sigma-1, 1: sigma) and j the channel order at
// the own vortex. S rows use the other vortex's flux, T rows the own flux.
struct AsymptoticMatrices {
  Center own = Center::A;
  Eigen::Matrix2cd S;
  Eigen::Matrix2cd T;
};

// The four deficiency functions at one (z, cfg), with the resolvent solves done once.
class DeficiencyBasis {
public:
  explicit DeficiencyBasis(ContextPtr ctx);

  const KernelContext& context() const { return *ctx_; }
  const ContextPtr& context_ptr() const { return ctx_; }

  // Resummed value; AtVortex at the channel's own vortex.
  cplx psi(ChannelIndex ch, const PlanePoint& x) const;
  // All four channels, sharing the two f vectors.
  std::array<cplx, 4> psi_all(const PlanePoint& x) const;
  // Leading term plus S_1..S_{n_max}, with the geometric tail bound.
  SeriesValue psi_series(ChannelIndex ch, const PlanePoint& x, int n_max) const;
  cplx psi(ChannelIndex ch, const PlanePoint& x, PsiMethod m, int n_max = 12) const;

  // Single summand S_n, n >= 0.
  cplx s_term(int n, ChannelIndex ch, const PlanePoint& x) const;

  // i, j in {0, 1} as in AsymptoticMatrices.
  cplx cal_S(Center own, int i, int j) const;
  cplx cal_T(Center own, int i, int j) const;
  AsymptoticMatrices matrices(Center own) const;

private:
  ContextPtr ctx_;
  // Per flat channel: y = (I - K D_u K D_v)^{-1} g_nu and w = K D_v y.
  std::array<Eigen::VectorXcd, 4> y_, w_;
};

using PlaneFunction = std::function<cplx(const PlanePoint&)>;

struct CutResidual {
  double value = 0.0;      // worst value jump residual
  double derivative = 0.0; // worst radial-derivative jump residual
  double normal = 0.0;     // worst jump residual of the derivative across the cut
  double worst() const { return std::max({value, derivative, normal}); }
};

// Jump residuals |e^{-i s pi} f(theta = pi) - e^{i s pi} f(theta = -pi)| on both cuts at the given
// distances from the vortex, for values and radial derivatives (central difference, step 1e-5 r,
// one Richardson level). The radial derivative is tangential to the cut; the normal derivative
// (one-sided second-order differences in x2, step 1e-4 r) is checked as well.
CutResidual cut_residual(const PlaneFunction& f, const VortexPair& cfg, const std::vector<double>& radii);
CutResidual verify_cut_conditions(const DeficiencyBasis& basis, ChannelIndex ch,
                                  const std::vector<double>& radii = {0.3, 0.9, 2.0});

// Mode nu of f about vortex c (weight e^{-i nu theta_c}) on a circle of radius r.
cplx angular_mode(const PlaneFunction& f, const VortexPair& cfg, Center c, double nu, double r, int nodes = 128);

// Exact radial form A K_|nu|(kappa r) + B I_|nu|(kappa r) of one angular mode, fitted from two
// radii and checked at a third.
struct ModeFit {
  cplx A, B;
  double residual; // relative misfit at the check radius
};
ModeFit fit_mode(const PlaneFunction& f, const KernelContext& ctx, Center c, double nu, double r1, double r2,
                 double r_check, int nodes = 128);

struct AsymptoticEntry {
  Center vortex;
  double mu;
  cplx fitted;
  cplx expected;
  double rel_error;
};

struct AsymptoticReport {
  // Coefficient of Gamma(|nu|)/2 (kappa r/2)^{-|nu|} e^{i nu theta} at the own vortex.
  AsymptoticEntry singular;
  // r^{|mu|} coefficients at both vortices against the S/T closed forms.
  std::vector<AsymptoticEntry> subleading;
  // Fitted K-part amplitudes of the other three channels' modes (ideally zero).
  double max_fit_residual = 0.0;
  // Exponent of the remainder after the four-term expansion, from two radii, and its expected value.
  double remainder_slope = 0.0;
  double gamma = 0.0;
};

// Radii default to 1e-2 and 1e-3 with 3e-3 as check radius.
AsymptoticReport asymptotic_check(const DeficiencyBasis& basis, ChannelIndex ch, double r1 = 1e-2,
                                  double r2 = 1e-3);

// Matrix of fitted K-part amplitudes: row (vortex, mode) in flat order, column channel.
// Its nonsingularity witnesses dim N(z) = 4.
Eigen::Matrix4cd singular_coefficient_matrix(const DeficiencyBasis& basis, double r1 = 1e-2, double r2 = 1e-3);

// sum_{n>=1} S_n(u, nu; x) - sum_{n>=1} S_n(u, -nu; x), both resummed.
cplx opposite_order_difference(const DeficiencyBasis& basis, ChannelIndex ch, const PlanePoint& x);

// Five-point (Delta + z) psi at x with mesh h, relative to |psi(x)|.
double helmholtz_residual(const DeficiencyBasis& basis, ChannelIndex ch, const PlanePoint& x, double h);

} // namespace abv
