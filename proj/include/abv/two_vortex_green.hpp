#pragma once

#include "abv/kernel_context.hpp"

#include <vector>

namespace abv {

// Alternating chain (c_n, ..., c_1) of length n >= 2, given by n and the center c_n attached to x.
struct ChainSpec {
  int n = 2;
  Center top = Center::A;

  // (c_n, ..., c_1).
  std::vector<Center> sequence() const;
};

enum class ChainMode { Resummed, Fixed, Adaptive };

struct TruncationPolicy {
  ChainMode mode = ChainMode::Resummed;
  int n_max = 12;
  // Adaptive: dropped tail bounded by tail_tol times the magnitude of the value.
  double tail_tol = 1e-10;
  // Tolerance of the two single-vortex integrals.
  double integral_tol = 1e-12;
};

struct GreenValue {
  cplx value;
  double tail_bound = 0.0;
  int chain_length = -1; // longest chain summed; -1 when resummed
};

// Green function of the two-vortex operator at (x, x0).
GreenValue green_two_detailed(const KernelContext& ctx, const PlanePoint& x, const PlanePoint& x0,
                              const TruncationPolicy& pol = {});
cplx green_two(const KernelContext& ctx, const PlanePoint& x, const PlanePoint& x0, const TruncationPolicy& pol = {});

// Resummed chain part for a fixed source point, reused across many field points.
class GreenSource {
public:
  GreenSource(ContextPtr ctx, const PlanePoint& x0, const TruncationPolicy& pol = {});
  cplx operator()(const PlanePoint& x) const;

private:
  ContextPtr ctx_;
  PlanePoint x0_;
  TruncationPolicy pol_;
  Eigen::VectorXcd ya_, yb_;
};

// One chain of the sum, signs and 1/(2 pi) included.
cplx chain_term(const KernelContext& ctx, const ChainSpec& spec, const PlanePoint& x, const PlanePoint& x0);

// Direct two-dimensional quadrature of the n = 2 chain (independent of the grid).
cplx chain_term_tensor_oracle(const Energy& e, const VortexPair& cfg, Center top, const PlanePoint& x,
                              const PlanePoint& x0, double tol = 1e-7);

// Coefficient function L_nu(x0) of the expansion of G(x, x0) as x approaches vortex u,
// nu in {omega - 1, omega}.
SeriesValue l_coefficient(const KernelContext& ctx, Center u, double nu, const PlanePoint& x0,
                          const TruncationPolicy& pol = {});

} // namespace abv
