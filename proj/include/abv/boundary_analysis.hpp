#pragma once

#include "abv/deficiency_two.hpp"
#include "abv/krein_pauli.hpp"

#include <string>
#include <vector>

namespace abv {

inline const std::vector<double> default_boundary_radii{1e-3, 2e-3, 4e-3, 8e-3, 1.6e-2};

// Phi_1^{-1}, Phi_2^{-1}, Phi_1^0, Phi_2^0 of a single-valued function about one vortex,
// with the standard local angle arg(y - c).
struct BoundaryData {
  cplx phi_1_m1, phi_2_m1, phi_1_0, phi_2_0;
  std::vector<double> radii;
  // Largest change of any functional when the smallest radius is dropped.
  double residual = 0.0;
  bool reliable = false;
};

// Coefficients of f e^{-i sigma theta_c} = c0 r^-s + d0 r^s + (cm1 r^{s-1} + dm1 r^{1-s}) e^{-i theta_c} + ...,
// theta_c the cut-convention angle about c, s the flux there.
struct SingularCoefficients {
  cplx c0, d0, c_m1, d_m1;
  double residual = 0.0;
};

// Mode amplitudes from trapezoid sums on 256 nodes per circle, then a least-squares fit in the
// powers {s-1, 1-s, 1+s, 3-s} (mode -1) and {-s, s, 2-s, 2+s} (mode 0).
// RadiiTooCoarse: fewer than five radii or less than a decade; FitIllConditioned on a degenerate design.
BoundaryData phi_functionals(const PlaneFunction& f, const VortexPair& cfg, Center c,
                             const std::vector<double>& radii = default_boundary_radii, double tol = 1e-5);
SingularCoefficients fit_singular_coefficients(const PlaneFunction& f, const VortexPair& cfg, Center c,
                                               const std::vector<double>& radii = default_boundary_radii);

// e^{-i alpha theta_a - i beta theta_b} f.
PlaneFunction gauge_transform(const PlaneFunction& f, const VortexPair& cfg);

// Functionals of the gauge-transformed function predicted from the four singular coefficients of f.
// At a: Phi_2^{-1} = d_{-1} - beta c0/(2 rho), Phi_2^0 = d0 + beta c_{-1}/(2 rho).
// At b (where e^{-i theta_b} = -e^{-i arg(y - b)}): Phi_1^{-1} = -c_{-1}, Phi_2^{-1} = -d_{-1} + alpha c0/(2 rho),
// Phi_2^0 = d0 + alpha c_{-1}/(2 rho).
BoundaryData gauge_map(const SingularCoefficients& s, const VortexPair& cfg, Center c);

// y -> conj G^s_z(x, y), evaluated as G^s_{conj z}(y, x) through a fixed-source Green function.
PlaneFunction pauli_green_in_source(const KreinSystem& sys, Spin s, const PlanePoint& x);

struct ExtensionSpec {
  Eigen::Matrix2cd A1 = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd A2 = Eigen::Matrix2cd::Zero();
  double alpha = 1.0 / 3;
};

enum class Extension { H0, HPlus, HMinus };
ExtensionSpec extension_spec(Extension e, double alpha);

struct Classification {
  bool valid = false;
  double smallest_singular_value = 0.0; // of the 2x4 matrix (A1, A2)
  double symmetry_residual = 0.0;       // Frobenius norm of A1 D^-1 A2* - A2 D^-1 A1*
  std::string reason;
};

Classification classify_extension(const ExtensionSpec& spec, double tol = 1e-10);
// True when (A1', A2') = G (A1, A2) for some invertible G.
bool same_condition(const ExtensionSpec& a, const ExtensionSpec& b, double tol = 1e-10);

struct Membership {
  bool in = false;
  double first = 0.0, second = 0.0; // moduli of the two functionals the condition sets to zero
};

// H0: Phi_1^{-1} = Phi_1^0 = 0; H+: Phi_2^{-1} = Phi_1^0 = 0; H-: Phi_1^{-1} = Phi_2^0 = 0.
// UnreliableBoundaryData when bd is not reliable.
Membership check_domain_membership(const BoundaryData& bd, Extension which, double tol);

} // namespace abv
