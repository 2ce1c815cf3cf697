#include "abv/boundary_analysis.hpp"

#include "abv/errors.hpp"
#include "abv/two_vortex_green.hpp"

#include <cmath>
#include <memory>

namespace abv {

namespace {

constexpr int circle_nodes = 256;

void check_radii(const std::vector<double>& radii) {
  if (radii.size() < 5) fail(ErrorCode::RadiiTooCoarse, "need at least five radii");
  const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  if (!(*lo > 0.0) || *hi < 10.0 * *lo) fail(ErrorCode::RadiiTooCoarse, "radii must span a decade");
}

void check_flux(double s) {
  if (!(s > 0.0 && s < 1.0)) fail(ErrorCode::InvalidArgument, "boundary functionals need a flux in (0, 1)");
}

// Least squares m(r) = sum_j x_j r^{p_j}, columns scaled to unit norm.
Eigen::VectorXcd fit_powers(const std::vector<double>& r, const std::vector<cplx>& m, const std::vector<double>& p) {
  const Eigen::Index n = static_cast<Eigen::Index>(r.size()), k = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd a(n, k);
  Eigen::VectorXcd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = std::pow(r[i], p[j]);
    b(i) = m[i];
  }
  Eigen::VectorXd scale(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    scale(j) = a.col(j).norm();
    a.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(k - 1) > 1e-12 * sv(0))) fail(ErrorCode::FitIllConditioned, "power fit is degenerate");
  const Eigen::MatrixXcd u = svd.matrixU().cast<cplx>(), v = svd.matrixV().cast<cplx>();
  Eigen::VectorXcd x = v * ((u.adjoint() * b).array() / sv.array().cast<cplx>()).matrix();
  for (Eigen::Index j = 0; j < k; ++j) x(j) /= scale(j);
  return x;
}

std::vector<double> mode_powers(double s, int mode) {
  return mode == -1 ? std::vector<double>{s - 1, 1 - s, 1 + s, 3 - s} : std::vector<double>{-s, s, 2 - s, 2 + s};
}

// (c, d) pairs of modes -1 and 0 from mode samples, with and without the smallest radius.
struct PairFit {
  cplx c_m1, d_m1, c0, d0;
};

PairFit fit_pairs(const std::vector<double>& r, const std::vector<cplx>& m1, const std::vector<cplx>& m0, double s) {
  const Eigen::VectorXcd x1 = fit_powers(r, m1, mode_powers(s, -1));
  const Eigen::VectorXcd x0 = fit_powers(r, m0, mode_powers(s, 0));
  return {x1(0), x1(1), x0(0), x0(1)};
}

double pair_distance(const PairFit& a, const PairFit& b) {
  return std::max({std::abs(a.c_m1 - b.c_m1), std::abs(a.d_m1 - b.d_m1), std::abs(a.c0 - b.c0),
                   std::abs(a.d0 - b.d0)});
}

template <class Modes>
std::pair<PairFit, double> fit_with_check(const std::vector<double>& radii, double s, Modes modes) {
  std::vector<double> r = radii;
  std::sort(r.begin(), r.end());
  std::vector<cplx> m1(r.size()), m0(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto [a, b] = modes(r[i]);
    m1[i] = a;
    m0[i] = b;
  }
  const PairFit all = fit_pairs(r, m1, m0, s);
  const std::vector<double> r2(r.begin() + 1, r.end());
  const std::vector<cplx> m12(m1.begin() + 1, m1.end()), m02(m0.begin() + 1, m0.end());
  const PairFit drop = fit_pairs(r2, m12, m02, s);
  return {all, pair_distance(all, drop)};
}

PlanePoint center_of(Center c, const VortexPair& cfg) { return c == Center::A ? PlanePoint{0, 0} : PlanePoint{cfg.rho, 0}; }

} // namespace

BoundaryData phi_functionals(const PlaneFunction& f, const VortexPair& cfg, Center c, const std::vector<double>& radii,
                             double tol) {
  check_radii(radii);
  const double s = cfg.flux(c);
  check_flux(s);
  const PlanePoint o = center_of(c, cfg);
  auto modes = [&](double r) {
    cplx m1 = 0.0, m0 = 0.0;
    for (int k = 0; k < circle_nodes; ++k) {
      const double t = -pi + 2 * pi * (k + 0.5) / circle_nodes;
      const cplx v = f({o.x1 + r * std::cos(t), o.x2 + r * std::sin(t)});
      m1 += v * std::exp(I * t);
      m0 += v;
    }
    return std::pair<cplx, cplx>{m1 / double(circle_nodes), m0 / double(circle_nodes)};
  };
  const auto [p, res] = fit_with_check(radii, s, modes);
  BoundaryData bd{p.c_m1, p.d_m1, p.c0, p.d0, radii, res, res < tol};
  return bd;
}

SingularCoefficients fit_singular_coefficients(const PlaneFunction& f, const VortexPair& cfg, Center c,
                                               const std::vector<double>& radii) {
  check_radii(radii);
  const double s = cfg.flux(c);
  check_flux(s);
  auto modes = [&](double r) {
    return std::pair<cplx, cplx>{angular_mode(f, cfg, c, s - 1, r, circle_nodes), angular_mode(f, cfg, c, s, r, circle_nodes)};
  };
  const auto [p, res] = fit_with_check(radii, s, modes);
  return {p.c0, p.d0, p.c_m1, p.d_m1, res};
}

PlaneFunction gauge_transform(const PlaneFunction& f, const VortexPair& cfg) {
  return [f, cfg](const PlanePoint& y) {
    const double ta = polar_about(y, Center::A, cfg).theta, tb = polar_about(y, Center::B, cfg).theta;
    return std::exp(-I * (cfg.alpha * ta + cfg.beta * tb)) * f(y);
  };
}

BoundaryData gauge_map(const SingularCoefficients& s, const VortexPair& cfg, Center c) {
  BoundaryData bd;
  bd.residual = s.residual;
  bd.reliable = true;
  bd.phi_1_0 = s.c0;
  if (c == Center::A) {
    bd.phi_1_m1 = s.c_m1;
    bd.phi_2_m1 = s.d_m1 - cfg.beta * s.c0 / (2 * cfg.rho);
    bd.phi_2_0 = s.d0 + cfg.beta * s.c_m1 / (2 * cfg.rho);
  } else {
    bd.phi_1_m1 = -s.c_m1;
    bd.phi_2_m1 = -s.d_m1 + cfg.alpha * s.c0 / (2 * cfg.rho);
    bd.phi_2_0 = s.d0 + cfg.alpha * s.c_m1 / (2 * cfg.rho);
  }
  return bd;
}

PlaneFunction pauli_green_in_source(const KreinSystem& sys, Spin s, const PlanePoint& x) {
  auto keep = std::make_shared<const KreinSystem>(sys);
  auto g = std::make_shared<const GreenSource>(sys.conj_basis().context_ptr(), x);
  const auto fx = sys.f(x);
  const auto b = krein_block(s);
  const Eigen::Matrix2cd m = sys.m(s).red;
  return [keep, g, fx, b, m](const PlanePoint& y) {
    const auto fy = keep->f_conj(y);
    cplx v = (*g)(y);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) v += std::conj(m(r, c) * fx[b[r]]) * fy[b[c]];
    return v;
  };
}

ExtensionSpec extension_spec(Extension e, double alpha) {
  ExtensionSpec s;
  s.alpha = alpha;
  switch (e) {
  case Extension::H0:
    s.A1 = Eigen::Matrix2cd::Identity();
    break;
  case Extension::HPlus:
    s.A1(0, 1) = 1.0;
    s.A2(1, 0) = 1.0;
    break;
  case Extension::HMinus:
    s.A1(0, 0) = 1.0;
    s.A2(1, 1) = 1.0;
    break;
  }
  return s;
}

namespace {

Eigen::Matrix<cplx, 2, 4> joined(const ExtensionSpec& s) {
  Eigen::Matrix<cplx, 2, 4> m;
  m << s.A1, s.A2;
  return m;
}

} // namespace

Classification classify_extension(const ExtensionSpec& spec, double tol) {
  Classification c;
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
    c.reason = "alpha outside (0, 1)";
    return c;
  }
  const Eigen::Matrix<cplx, 2, 4> m = joined(spec);
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 2, 4>> svd(m);
  const double smax = svd.singularValues()(0);
  c.smallest_singular_value = svd.singularValues()(1);
  const Eigen::Matrix2cd dinv = Eigen::Vector2cd(1.0 / (1.0 - spec.alpha), 1.0 / spec.alpha).asDiagonal();
  c.symmetry_residual = (spec.A1 * dinv * spec.A2.adjoint() - spec.A2 * dinv * spec.A1.adjoint()).norm();
  const double scale = std::max(smax, 1e-300);
  if (!(c.smallest_singular_value > tol * scale) || smax == 0.0) {
    c.reason = "rank (A1, A2) < 2";
    return c;
  }
  if (c.symmetry_residual > tol * scale * scale / std::min(spec.alpha, 1.0 - spec.alpha)) {
    c.reason = "A1 D^-1 A2* != A2 D^-1 A1*";
    return c;
  }
  c.valid = true;
  return c;
}

bool same_condition(const ExtensionSpec& a, const ExtensionSpec& b, double tol) {
  if (a.alpha != b.alpha) return false;
  if (!classify_extension(a, tol).valid || !classify_extension(b, tol).valid) return false;
  const Eigen::Matrix<cplx, 2, 4> ma = joined(a), mb = joined(b);
  // G = mb ma^+ with ma of full row rank.
  const Eigen::Matrix2cd g = mb * ma.adjoint() * (ma * ma.adjoint()).inverse();
  const double err = (g * ma - mb).norm();
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(g);
  return err <= tol * std::max(1.0, mb.norm()) && svd.singularValues()(1) > tol * svd.singularValues()(0);
}

Membership check_domain_membership(const BoundaryData& bd, Extension which, double tol) {
  if (!bd.reliable) fail(ErrorCode::UnreliableBoundaryData, "boundary fit residual above tolerance");
  Membership m;
  switch (which) {
  case Extension::H0:
    m.first = std::abs(bd.phi_1_m1);
    m.second = std::abs(bd.phi_1_0);
    break;
  case Extension::HPlus:
    m.first = std::abs(bd.phi_2_m1);
    m.second = std::abs(bd.phi_1_0);
    break;
  case Extension::HMinus:
    m.first = std::abs(bd.phi_1_m1);
    m.second = std::abs(bd.phi_2_0);
    break;
  }
  m.in = m.first < tol && m.second < tol;
  return m;
}

} // namespace abv
