#pragma once

#include "abv/deficiency_two.hpp"
#include "abv/two_vortex_green.hpp"

#include <array>

namespace abv {

enum class Spin { Plus, Minus };

// Flat channel indices (0-based) of the reduced block: {0, 2} for spin +, {1, 3} for spin -.
std::array<int, 2> krein_block(Spin s);

struct KreinMatrix {
  Spin spin = Spin::Plus;
  Eigen::Matrix2cd red;
  double condition = 0.0; // of the inverted 2x2 matrix
  // Embedding into the flat 4x4 order; all other entries are exactly zero.
  Eigen::Matrix4cd full() const;
};

// X_{jk} = kappa^{|mu_j| + |nu_k|} E_{jk}, E = T within a vortex and -S across, in flat order.
// P(z, w) = -2 pi (X(conj z) - X(w)) / (conj z - w) and M^{red} = (2 pi X^{red})^{-1}.
Eigen::Matrix4cd boundary_matrix(const DeficiencyBasis& basis);

KreinMatrix krein_matrix(const DeficiencyBasis& basis, Spin s);
inline KreinMatrix m_plus(const DeficiencyBasis& b) { return krein_matrix(b, Spin::Plus); }
inline KreinMatrix m_minus(const DeficiencyBasis& b) { return krein_matrix(b, Spin::Minus); }

// P(z, w) from the bases at conj z and at w. CoincidentSpectralParameters when conj z = w.
Eigen::Matrix4cd p_matrix(const DeficiencyBasis& at_conj_z, const DeficiencyBasis& at_w);
// Gram matrix P(z, z) from the basis at z alone (X(conj z) = conj X(z)). RealSpectralParameter on the axis.
Eigen::Matrix4cd p_matrix_diag(const DeficiencyBasis& at_z);

// Bases at z and conj z with the Pauli Green functions built on them.
class KreinSystem {
public:
  KreinSystem(const Energy& z, const VortexPair& cfg, const ContextOptions& opt = {});
  KreinSystem(ContextPtr at_z, ContextPtr at_conj_z);

  const DeficiencyBasis& basis() const { return bz_; }
  const DeficiencyBasis& conj_basis() const { return bc_; }
  const KreinMatrix& m(Spin s) const { return s == Spin::Plus ? mp_ : mm_; }
  KreinSystem conjugate() const;

  // f_z^j(x) = kappa^{|nu_j|} psi_j(x) in flat order.
  std::array<cplx, 4> f(const PlanePoint& x) const;
  // Same at conj z.
  std::array<cplx, 4> f_conj(const PlanePoint& x) const;

  // G(x, x0) + sum_{jk} M^{jk} f_z^j(x) conj(f_{conj z}^k(x0)).
  cplx pauli_green(Spin s, const PlanePoint& x, const PlanePoint& x0, const TruncationPolicy& pol = {}) const;
  cplx correction(Spin s, const PlanePoint& x, const PlanePoint& x0) const;

private:
  DeficiencyBasis bz_, bc_;
  KreinMatrix mp_, mm_;
};

struct ResolventResidual {
  double residual;
  double tail_estimate;
};

// |f_w(x) + (z - w) int_{|y|<R} G_z(x, y) f_w(y) d^2y - f_z(x)| for one channel.
// conj_z is the basis at conj z (used for G_z(x, .) = conj G_{conj z}(., x)).
ResolventResidual resolvent_identity_check(ChannelIndex ch, const DeficiencyBasis& at_z,
                                           const DeficiencyBasis& at_conj_z, const DeficiencyBasis& at_w,
                                           const PlanePoint& x, double R = 25.0, double tail_tol = 1e-5);

// int_{|y|<R} conj(f_z^j) f_w^k d^2y for all j, k.
Eigen::Matrix4cd p_matrix_quadrature(const DeficiencyBasis& at_z, const DeficiencyBasis& at_w, double R = 25.0);

// Aharonov-Casher zero modes with b at (rho, 0), w = (x1 + i x2)/rho:
// spin +: |w|^alpha |w-1|^beta / (w (1 - w)), needs alpha + beta < 1;
// spin -: 1 / (|w|^alpha |w-1|^beta), needs alpha + beta > 1.
cplx zero_mode(Spin s, const VortexPair& cfg, const PlanePoint& x);
// |(d/dzbar - (alpha/zbar + beta/(zbar - rho))/2) phi| for spin +, the d/dz analogue for spin -,
// by central differences with step h.
double zero_mode_residual(Spin s, const VortexPair& cfg, const PlanePoint& x, double h = 1e-5);

} // namespace abv
