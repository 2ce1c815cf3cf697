#pragma once

#include "abv/special.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace abv {

enum class LineDomain { Real, HalfLine };

struct LineIntegral {
  cplx value;
  double err_est;
};

// Exp-sinh rule with level halving; the real line is split at 0.
LineIntegral integrate_line(const std::function<cplx(double)>& f, LineDomain domain, double tol,
                            int max_levels = 12);

struct GridOptions {
  // Fluxes whose 1/sin(pi(sigma + i tau)) poles bound the step size.
  std::vector<double> fluxes;
  // Smallest |x| at which K_{i tau}(x) vectors are contracted on this grid; default kappa*rho.
  double min_argument = 0.0;
  std::size_t max_nodes = 4096;
  // Multiplies the chosen step; values below 1 refine the grid.
  double step_scale = 1.0;
};

struct TauGrid {
  double T = 0.0;
  double h = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
  cplx kappa;
  double rho = 0.0;
  double tol = 0.0;
  std::vector<double> fluxes;
  std::string rule = "trapezoid";

  std::size_t size() const { return nodes.size(); }
  // Node j sits at (j - center()) * h.
  std::size_t center() const { return nodes.size() / 2; }
  Eigen::VectorXd sqrt_weights() const;
};

TauGrid build_tau_grid(const Energy& e, double rho, double tol, const GridOptions& opt = {});

// Same node spacing and span; used to compare grids and kernels.
bool same_grid(const TauGrid& a, const TauGrid& b);

// K_{i k h}(kappa rho) for k = 0..N-1. Read from and written to $ABV_CACHE_DIR when set.
std::vector<cplx> toeplitz_values(const TauGrid& grid);

enum class KernelKind { Convolution, Diagonal };

struct KernelParams {
  Energy energy;
  double rho = 0.0;   // Convolution
  double sigma = 0.0; // Diagonal
};

// Convolution kernels are stored weight-folded: W^{1/2} K W^{1/2}. Diagonal kernels are plain.
struct DiscreteKernel {
  KernelKind kind;
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd diagonal;
  KernelParams params;
};

DiscreteKernel discretize(KernelKind kind, const KernelParams& params, const TauGrid& grid);

// Entry of the diagonal kernel at order mu.
cplx flux_weight(double sigma, double mu);

// Weight-folded vectors: f(tau_j) = K_{i tau_j}(kappa r) e^{theta tau_j} D_sigma(tau_j) and
// g(tau_j) = K_{-i tau_j - nu}(kappa rho).
struct KernelVectors {
  Eigen::VectorXcd f;
  Eigen::VectorXcd g;
};

Eigen::VectorXcd f_vector(double r, double theta, double sigma, const TauGrid& grid);
// K_{omega + i tau_j}(kappa rho), weight-folded. With omega = nu this is g, since K is even in its order.
Eigen::VectorXcd order_shifted_vector(double omega, const TauGrid& grid);
KernelVectors kernel_vectors(double r, double theta, double sigma, double nu, const Energy& e, double rho,
                             const TauGrid& grid);

// sup over xi of |sum_k h K_{i k h}(kappa rho) e^{i k h xi}|, the norm of the discrete Toeplitz operator.
double convolution_symbol_norm(const TauGrid& grid);
// Largest singular value of a finite matrix by power iteration on A^* A.
double spectral_norm(const Eigen::MatrixXcd& a, int iterations = 300);

} // namespace abv
