#include "abv/krein_pauli.hpp"

#include "abv/errors.hpp"
#include "abv/plane_quadrature.hpp"

#include <cmath>
#include <sstream>

namespace abv {

std::array<int, 2> krein_block(Spin s) {
  return s == Spin::Plus ? std::array<int, 2>{0, 2} : std::array<int, 2>{1, 3};
}

Eigen::Matrix4cd KreinMatrix::full() const {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  const auto b = krein_block(spin);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(b[r], b[c]) = red(r, c);
  return m;
}

namespace {

std::array<cplx, 4> kappa_scales(const KernelContext& ctx) {
  std::array<cplx, 4> out;
  for (ChannelIndex ch : all_channels) out[ch.flat() - 1] = ctx.energy().kappa_pow(std::abs(ch.nu(ctx.config())));
  return out;
}

} // namespace

Eigen::Matrix4cd boundary_matrix(const DeficiencyBasis& basis) {
  const KernelContext& ctx = basis.context();
  const std::array<AsymptoticMatrices, 2> mats{basis.matrices(Center::A), basis.matrices(Center::B)};
  const auto sc = kappa_scales(ctx);
  Eigen::Matrix4cd x;
  for (ChannelIndex cj : all_channels)
    for (ChannelIndex ck : all_channels) {
      const int j = cj.flat() - 1, k = ck.flat() - 1;
      const AsymptoticMatrices& m = mats[ck.u == Center::A ? 0 : 1];
      const int ij = cj.upper ? 1 : 0, ik = ck.upper ? 1 : 0;
      const cplx e = cj.u == ck.u ? m.T(ij, ik) : -m.S(ij, ik);
      x(j, k) = sc[j] * sc[k] * e;
    }
  return x;
}

KreinMatrix krein_matrix(const DeficiencyBasis& basis, Spin s) {
  const Eigen::Matrix4cd x = boundary_matrix(basis);
  const auto b = krein_block(s);
  Eigen::Matrix2cd a;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) a(r, c) = 2 * pi * x(b[r], b[c]);
  const cplx det = a.determinant();
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(a);
  const double smax = svd.singularValues()(0), smin = svd.singularValues()(1);
  if (!(smin > 1e-13 * smax)) {
    std::ostringstream os;
    os.precision(17);
    os << "determinant " << det.real() << (det.imag() < 0 ? "" : "+") << det.imag() << "i";
    fail(ErrorCode::KreinMatrixSingular, os.str());
  }
  KreinMatrix m;
  m.spin = s;
  m.red = a.inverse();
  m.condition = smax / smin;
  return m;
}

Eigen::Matrix4cd p_matrix(const DeficiencyBasis& at_conj_z, const DeficiencyBasis& at_w) {
  const cplx zc = at_conj_z.context().energy().z, w = at_w.context().energy().z;
  if (std::abs(zc - w) <= 1e-12 * (1.0 + std::abs(w)))
    fail(ErrorCode::CoincidentSpectralParameters, "conj z = w, use p_matrix_diag");
  return -2 * pi * (boundary_matrix(at_conj_z) - boundary_matrix(at_w)) / (zc - w);
}

Eigen::Matrix4cd p_matrix_diag(const DeficiencyBasis& at_z) {
  const cplx z = at_z.context().energy().z;
  if (std::abs(z.imag()) <= 1e-12 * (1.0 + std::abs(z)))
    fail(ErrorCode::RealSpectralParameter, "Im z = 0");
  const Eigen::Matrix4cd x = boundary_matrix(at_z);
  return -2 * pi * (x.conjugate() - x) / (std::conj(z) - z);
}

KreinSystem::KreinSystem(const Energy& z, const VortexPair& cfg, const ContextOptions& opt)
    : KreinSystem(make_context(z, cfg, opt), make_context(z.conj(), cfg, opt)) {}

KreinSystem::KreinSystem(ContextPtr at_z, ContextPtr at_conj_z)
    : bz_(std::move(at_z)), bc_(std::move(at_conj_z)), mp_(krein_matrix(bz_, Spin::Plus)),
      mm_(krein_matrix(bz_, Spin::Minus)) {
  if (std::abs(bz_.context().energy().z - std::conj(bc_.context().energy().z)) > 1e-14 * (1.0 + std::abs(bz_.context().energy().z)))
    fail(ErrorCode::InvalidArgument, "second context must sit at conj z");
}

KreinSystem KreinSystem::conjugate() const { return KreinSystem(bc_.context_ptr(), bz_.context_ptr()); }

std::array<cplx, 4> KreinSystem::f(const PlanePoint& x) const {
  auto p = bz_.psi_all(x);
  const auto sc = kappa_scales(bz_.context());
  for (int j = 0; j < 4; ++j) p[j] *= sc[j];
  return p;
}

std::array<cplx, 4> KreinSystem::f_conj(const PlanePoint& x) const {
  auto p = bc_.psi_all(x);
  const auto sc = kappa_scales(bc_.context());
  for (int j = 0; j < 4; ++j) p[j] *= sc[j];
  return p;
}

cplx KreinSystem::correction(Spin s, const PlanePoint& x, const PlanePoint& x0) const {
  const auto fx = f(x), f0 = f_conj(x0);
  const auto b = krein_block(s);
  const Eigen::Matrix2cd& m = this->m(s).red;
  cplx sum = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) sum += m(r, c) * fx[b[r]] * std::conj(f0[b[c]]);
  return sum;
}

cplx KreinSystem::pauli_green(Spin s, const PlanePoint& x, const PlanePoint& x0, const TruncationPolicy& pol) const {
  return green_two(bz_.context(), x, x0, pol) + correction(s, x, x0);
}

ResolventResidual resolvent_identity_check(ChannelIndex ch, const DeficiencyBasis& at_z,
                                           const DeficiencyBasis& at_conj_z, const DeficiencyBasis& at_w,
                                           const PlanePoint& x, double R, double tail_tol) {
  const Energy z = at_z.context().energy(), w = at_w.context().energy();
  const VortexPair& cfg = at_z.context().config();
  const double nu = std::abs(ch.nu(cfg));
  const cplx target = z.kappa_pow(nu) * at_z.psi(ch, x);
  auto fw = [&](const PlanePoint& y) { return w.kappa_pow(nu) * at_w.psi(ch, y); };
  if (z.z == w.z) return {std::abs(fw(x) - target), 0.0};
  const double decay = z.kappa.real() + w.kappa.real();
  const double tail = 2 * pi * (R + 1.0) / decay * std::exp(-decay * (R - std::hypot(x.x1, x.x2)));
  if (tail > tail_tol) fail(ErrorCode::TailNotNegligible, "disk radius too small for the requested tolerance");
  // G_z(x, y) = conj G_{conj z}(y, x).
  const GreenSource g(at_conj_z.context_ptr(), x);
  PlaneQuadOptions opt;
  opt.radius = R;
  auto integrand = [&](const PlanePoint& y) { return std::conj(g(y)) * fw(y); };
  const cplx integral = integrate_plane(integrand, {PlanePoint{0, 0}, PlanePoint{cfg.rho, 0}, x}, opt);
  return {std::abs(fw(x) + (z.z - w.z) * integral - target), tail};
}

Eigen::Matrix4cd p_matrix_quadrature(const DeficiencyBasis& at_z, const DeficiencyBasis& at_w, double R) {
  const auto sz = kappa_scales(at_z.context()), sw = kappa_scales(at_w.context());
  const VortexPair& cfg = at_z.context().config();
  auto integrand = [&](const PlanePoint& y) {
    const auto pz = at_z.psi_all(y), pw = at_w.psi_all(y);
    Eigen::VectorXcd v(16);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) v(4 * j + k) = std::conj(sz[j] * pz[j]) * sw[k] * pw[k];
    return v;
  };
  PlaneQuadOptions opt;
  opt.radius = R;
  const Eigen::VectorXcd v = integrate_plane_many(integrand, 16, {PlanePoint{0, 0}, PlanePoint{cfg.rho, 0}}, opt);
  Eigen::Matrix4cd p;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) p(j, k) = v(4 * j + k);
  return p;
}

cplx zero_mode(Spin s, const VortexPair& cfg, const PlanePoint& x) {
  const double sum = cfg.alpha + cfg.beta;
  if (s == Spin::Plus && !(sum < 1.0)) fail(ErrorCode::FluxSumIncompatible, "spin + zero mode needs alpha + beta < 1");
  if (s == Spin::Minus && !(sum > 1.0)) fail(ErrorCode::FluxSumIncompatible, "spin - zero mode needs alpha + beta > 1");
  const cplx w = cplx(x.x1, x.x2) / cfg.rho;
  if (std::abs(w) < 1e-14 || std::abs(w - 1.0) < 1e-14) fail(ErrorCode::AtVortex, "zero mode at a vortex");
  const double m = std::pow(std::abs(w), cfg.alpha) * std::pow(std::abs(w - 1.0), cfg.beta);
  return s == Spin::Plus ? m / (w * (1.0 - w)) : cplx(1.0 / m);
}

double zero_mode_residual(Spin s, const VortexPair& cfg, const PlanePoint& x, double h) {
  auto phi = [&](double dx, double dy) { return zero_mode(s, cfg, {x.x1 + dx, x.x2 + dy}); };
  const cplx dx = (phi(h, 0) - phi(-h, 0)) / (2 * h), dy = (phi(0, h) - phi(0, -h)) / (2 * h);
  const cplx z(x.x1, x.x2);
  const cplx p = phi(0, 0);
  if (s == Spin::Plus) {
    const cplx zb = std::conj(z);
    return std::abs(0.5 * (dx + I * dy) - 0.5 * (cfg.alpha / zb + cfg.beta / (zb - cfg.rho)) * p);
  }
  return std::abs(0.5 * (dx - I * dy) + 0.5 * (cfg.alpha / z + cfg.beta / (z - cfg.rho)) * p);
}

} // namespace abv
