#include "abv/errors.hpp"
#include "abv/krein_pauli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace abv;

namespace {

const VortexPair cfg{1.0 / 3, 2.0 / 3, 1.0};

const KreinSystem& sys_i() {
  static KreinSystem s(Energy::from(I), cfg);
  return s;
}

const DeficiencyBasis& basis_2i() {
  static DeficiencyBasis b(make_context(Energy::from(2.0 * I), cfg));
  return b;
}

const KreinSystem& sys_2i() {
  static KreinSystem s(basis_2i().context_ptr(), make_context(Energy::from(-2.0 * I), cfg));
  return s;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST(Krein, ZeroPattern) {
  for (Spin s : {Spin::Plus, Spin::Minus}) {
    const Eigen::Matrix4cd m = sys_i().m(s).full();
    const auto b = krein_block(s);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        const bool in = (j == b[0] || j == b[1]) && (k == b[0] || k == b[1]);
        if (!in) EXPECT_EQ(m(j, k), cplx(0.0));
        else EXPECT_NE(m(j, k), cplx(0.0));
      }
    EXPECT_LT(sys_i().m(s).condition, 1e3);
  }
}

TEST(Krein, ConjugateTranspose) {
  // The conj z basis is built from its own grid, not by conjugating the z basis.
  const KreinSystem c = sys_i().conjugate();
  for (Spin s : {Spin::Plus, Spin::Minus}) EXPECT_LT(max_abs(sys_i().m(s).red.adjoint() - c.m(s).red), 1e-9);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> fl(0.2, 0.8), ang(0.3, 2.8), rho(0.7, 2.0);
  for (int i = 0; i < 3; ++i) {
    const VortexPair p{fl(rng), fl(rng), rho(rng)};
    const Energy z = Energy::from(std::polar(1.0, ang(rng)));
    const KreinSystem a(z, p);
    const KreinSystem b = a.conjugate();
    for (Spin s : {Spin::Plus, Spin::Minus}) EXPECT_LT(max_abs(a.m(s).red.adjoint() - b.m(s).red), 1e-9);
  }
}

TEST(Krein, ReducedBlockIdentity) {
  const Eigen::Matrix4cd p = p_matrix(sys_i().conj_basis(), basis_2i());
  const cplx zc = -I, w = 2.0 * I;
  for (Spin s : {Spin::Plus, Spin::Minus}) {
    const auto b = krein_block(s);
    Eigen::Matrix2cd pr;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) pr(r, c) = p(b[r], b[c]);
    const Eigen::Matrix2cd rhs =
        krein_matrix(basis_2i(), s).red.inverse() - krein_matrix(sys_i().conj_basis(), s).red.inverse();
    EXPECT_LT(max_abs((zc - w) * pr - rhs), 1e-8);
  }
}

TEST(Krein, HilbertIdentity) {
  const cplx z = I, w = 2.0 * I;
  // P(conj z, w) needs the basis at conj(conj z) = z.
  const Eigen::Matrix4cd p = p_matrix(sys_i().basis(), basis_2i());
  for (Spin s : {Spin::Plus, Spin::Minus}) {
    const Eigen::Matrix4cd mz = sys_i().m(s).full(), mw = sys_2i().m(s).full();
    EXPECT_LT(max_abs(mz - mw - (z - w) * mz * p * mw), 1e-6);
  }
}

TEST(Krein, GramMatrix) {
  const Eigen::Matrix4cd p = p_matrix_diag(sys_i().basis());
  EXPECT_LT(max_abs(p - p.adjoint()), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(p);
  EXPECT_GT(es.eigenvalues()(0), 0.0);
  // Norm formula for psi itself.
  const Energy z = sys_i().basis().context().energy();
  for (ChannelIndex ch : all_channels) {
    const double a = std::abs(ch.nu(cfg));
    const int i = ch.upper ? 1 : 0;
    const cplx t = sys_i().basis().cal_T(ch.u, i, i);
    const double norm = -2 * pi / z.z.imag() * (std::pow(z.kappa / std::conj(z.kappa), a) * t).imag();
    const int j = ch.flat() - 1;
    EXPECT_NEAR(norm, p(j, j).real() / std::pow(std::abs(z.kappa), 2 * a), 1e-10);
  }
}

TEST(Krein, GramMatchesQuadrature) {
  const Eigen::Matrix4cd q = p_matrix_quadrature(sys_i().basis(), sys_i().basis());
  EXPECT_LT(max_abs(q - p_matrix_diag(sys_i().basis())), 1e-3);
}

TEST(Krein, InnerProductMatchesQuadrature) {
  const Eigen::Matrix4cd q = p_matrix_quadrature(sys_i().basis(), basis_2i());
  const Eigen::Matrix4cd p = p_matrix(sys_i().conj_basis(), basis_2i());
  EXPECT_LT(max_abs(q - p), 1e-3);
  // Cross blocks carry the minus sign of S.
  const Eigen::Matrix4cd x = boundary_matrix(basis_2i());
  const Energy w = basis_2i().context().energy();
  EXPECT_LT(std::abs(x(0, 2) + w.kappa_pow(2 - cfg.alpha - cfg.beta) * basis_2i().cal_S(Center::B, 0, 0)), 1e-14);
}

TEST(Krein, ResolventIdentity) {
  const PlanePoint x{0.6, 0.4};
  for (ChannelIndex ch : {all_channels[1], all_channels[2]}) {
    const ResolventResidual r = resolvent_identity_check(ch, sys_i().basis(), sys_i().conj_basis(), basis_2i(), x);
    EXPECT_LT(r.residual, 1e-3) << ch.flat();
    EXPECT_LT(r.tail_estimate, 1e-5);
  }
  const ResolventResidual same =
      resolvent_identity_check(all_channels[0], sys_i().basis(), sys_i().conj_basis(), sys_i().basis(), x);
  EXPECT_EQ(same.residual, 0.0);
  try {
    resolvent_identity_check(all_channels[0], sys_i().basis(), sys_i().conj_basis(), basis_2i(), x, 3.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TailNotNegligible);
  }
}

TEST(Pauli, HermitianSymmetry) {
  const KreinSystem c = sys_i().conjugate();
  const std::vector<std::pair<PlanePoint, PlanePoint>> pts{
      {{0.4, 0.3}, {-0.2, 0.7}}, {{1.5, -0.4}, {0.5, 0.2}}, {{-0.7, -0.6}, {2.0, 0.9}}};
  for (Spin s : {Spin::Plus, Spin::Minus})
    for (const auto& [x, x0] : pts)
      EXPECT_LT(std::abs(std::conj(c.pauli_green(s, x, x0)) - sys_i().pauli_green(s, x0, x)), 1e-6);
}

TEST(Pauli, CorrectionHasRankTwo) {
  const std::vector<PlanePoint> xs{{0.4, 0.3}, {-0.5, 0.8}, {1.7, -0.3}}, ys{{0.2, -0.6}, {1.3, 0.5}, {-1.0, -0.2}};
  for (Spin s : {Spin::Plus, Spin::Minus}) {
    Eigen::Matrix3cd c;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) c(i, k) = sys_i().correction(s, xs[i], ys[k]);
    const double scale = std::pow(max_abs(c), 3);
    EXPECT_LT(std::abs(c.determinant()) / scale, 1e-8);
    // A 2x2 minor does not vanish.
    EXPECT_GT(std::abs(c.topLeftCorner<2, 2>().determinant()) / (max_abs(c) * max_abs(c)), 1e-6);
  }
}

TEST(Krein, LargeSeparationLimit) {
  const Energy z = Energy::from(I);
  const double rho = 6.0;
  const KreinSystem s(z, {cfg.alpha, cfg.beta, rho});
  const double q = std::exp(-z.kappa.real() * rho);
  const cplx ma = std::sin(pi * cfg.alpha) / (pi * pi) * z.kappa_pow(2 * cfg.alpha - 2);
  const cplx mb = std::sin(pi * cfg.beta) / (pi * pi) * z.kappa_pow(2 * cfg.beta - 2);
  const Eigen::Matrix2cd m = s.m(Spin::Plus).red;
  EXPECT_LT(std::abs(m(0, 0) / ma - 1.0), 10 * q);
  EXPECT_LT(std::abs(m(1, 1) / mb - 1.0), 10 * q);
  EXPECT_LT(std::abs(m(0, 1)), 10 * q * std::abs(ma));
  // Norm of psi_{a, alpha} tends to the one-vortex value.
  const double one = -2 * pi / z.z.imag() *
                     (std::pow(z.kappa / std::conj(z.kappa), cfg.alpha) * (pi / (2 * std::sin(pi * cfg.alpha)))).imag();
  const double p = p_matrix_diag(s.basis())(1, 1).real() / std::pow(std::abs(z.kappa), 2 * cfg.alpha);
  EXPECT_LT(std::abs(p / one - 1.0), 10 * q);
}

TEST(ZeroMode, OperatorResidual) {
  const VortexPair plus{1.0 / 3, 1.0 / 3, 1.0}, minus{2.0 / 3, 2.0 / 3, 1.0};
  for (PlanePoint x : {PlanePoint{0.4, 0.3}, PlanePoint{-0.6, 0.9}, PlanePoint{1.4, -0.2}}) {
    EXPECT_LT(zero_mode_residual(Spin::Plus, plus, x), 1e-6);
    EXPECT_LT(zero_mode_residual(Spin::Minus, minus, x), 1e-6);
  }
  // Scaled separation.
  EXPECT_LT(zero_mode_residual(Spin::Plus, {0.25, 0.4, 2.5}, {0.7, 0.8}), 1e-6);
}

TEST(ZeroMode, MeanCoefficientNearA) {
  // Angular mean of the spin + mode on a small circle about a, divided by r^alpha.
  const VortexPair plus{1.0 / 3, 1.0 / 3, 1.0};
  auto mean = [&](double r) {
    cplx s = 0.0;
    const int n = 256;
    for (int k = 0; k < n; ++k) {
      const double t = 2 * pi * (k + 0.5) / n;
      s += zero_mode(Spin::Plus, plus, {r * std::cos(t), r * std::sin(t)});
    }
    return s / double(n) / std::pow(r, plus.alpha);
  };
  // Next correction is O(r).
  const cplx m1 = mean(1e-3), m2 = mean(5e-4);
  EXPECT_LT(std::abs(2.0 * m2 - m1 - (1.0 - plus.beta / 2)), 1e-5);
}

TEST(Krein, Errors) {
  try {
    p_matrix(sys_i().conj_basis(), sys_i().conj_basis());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CoincidentSpectralParameters);
  }
  try {
    zero_mode(Spin::Plus, cfg, {0.3, 0.2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FluxSumIncompatible);
  }
  try {
    zero_mode(Spin::Minus, {0.2, 0.3, 1.0}, {0.3, 0.2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FluxSumIncompatible);
  }
  try {
    zero_mode(Spin::Minus, {0.7, 0.7, 1.0}, {1.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AtVortex);
  }
  try {
    p_matrix_diag(DeficiencyBasis(make_context(Energy::from(-1.0), cfg)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RealSpectralParameter);
  }
  EXPECT_THROW(KreinSystem(sys_i().basis().context_ptr(), basis_2i().context_ptr()), Error);
}
