#include "surface.hpp"

#include "abv/errors.hpp"
#include "abv/krein_pauli.hpp"
#include "abv/one_vortex.hpp"
#include "abv/two_vortex_green.hpp"

#include <atomic>
#include <cmath>
#include <memory>
#include <thread>

namespace abv {

PlanePoint GridSpec::point(int i, int j) const {
  const double x1 = nx > 1 ? x_min + (x_max - x_min) * i / (nx - 1) : x_min;
  const double x2 = ny > 1 ? y_min + (y_max - y_min) * j / (ny - 1) : y_min;
  // Exact zero keeps the side tag meaningful on the axis.
  return {x1, std::abs(x2) < 1e-13 ? 0.0 : x2, Side::Upper};
}

std::size_t SurfaceGrid::masked() const {
  std::size_t n = 0;
  for (char m : mask) n += m != 0;
  return n;
}

SurfaceGrid evaluate_grid(const PlaneFunction& f, const GridSpec& spec, int threads, const std::string& id) {
  if (spec.nx < 1 || spec.ny < 1) fail(ErrorCode::InvalidArgument, "grid needs at least one sample per axis");
  SurfaceGrid g;
  g.spec = spec;
  g.function = id;
  const std::size_t n = static_cast<std::size_t>(spec.nx) * spec.ny;
  g.values.assign(n, cplx(0.0));
  g.mask.assign(n, 0);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int j = next++; j < spec.ny; j = next++) {
      for (int i = 0; i < spec.nx; ++i) {
        const std::size_t k = static_cast<std::size_t>(j) * spec.nx + i;
        try {
          g.values[k] = f(spec.point(i, j));
        } catch (const Error&) {
          g.mask[k] = 1;
        }
      }
    }
  };
  const int t = std::max(1, threads);
  if (t == 1) worker();
  else {
    std::vector<std::thread> pool;
    for (int k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return g;
}

PlaneFunction surface_function(const SurfaceRequest& r) {
  const std::string& id = r.function;
  if (id.rfind("psi-", 0) == 0) {
    ChannelIndex ch;
    if (id == "psi-a-lower") ch = {Center::A, false};
    else if (id == "psi-a-upper") ch = {Center::A, true};
    else if (id == "psi-b-lower") ch = {Center::B, false};
    else if (id == "psi-b-upper") ch = {Center::B, true};
    else fail(ErrorCode::InvalidArgument, "unknown function id " + id);
    auto b = std::make_shared<const DeficiencyBasis>(make_context(r.energy, r.cfg, r.context));
    return [b, ch](const PlanePoint& x) { return b->psi(ch, x); };
  }
  if (id == "green1") {
    const Energy e = r.energy;
    const double a = r.cfg.alpha;
    const PlanePoint x0 = r.x0;
    return [e, a, x0](const PlanePoint& x) { return green_one(e, a, x, x0); };
  }
  if (id == "green2") {
    auto g = std::make_shared<const GreenSource>(make_context(r.energy, r.cfg, r.context), r.x0);
    return [g](const PlanePoint& x) { return (*g)(x); };
  }
  if (id == "pauli-green-plus" || id == "pauli-green-minus") {
    const Spin s = id == "pauli-green-plus" ? Spin::Plus : Spin::Minus;
    auto sys = std::make_shared<const KreinSystem>(r.energy, r.cfg, r.context);
    auto g = std::make_shared<const GreenSource>(sys->basis().context_ptr(), r.x0);
    const auto f0 = sys->f_conj(r.x0);
    return [sys, g, s, f0](const PlanePoint& x) {
      const auto fx = sys->f(x);
      const auto b = krein_block(s);
      const Eigen::Matrix2cd& m = sys->m(s).red;
      cplx v = (*g)(x);
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) v += m(p, q) * fx[b[p]] * std::conj(f0[b[q]]);
      return v;
    };
  }
  fail(ErrorCode::InvalidArgument, "unknown function id " + id);
}

std::pair<int, int> nearest_index(const GridSpec& s, const PlanePoint& p) {
  auto idx = [](double v, double lo, double hi, int n) {
    if (n < 2) return 0;
    const long k = std::lround((v - lo) / (hi - lo) * (n - 1));
    return static_cast<int>(std::clamp<long>(k, 0, n - 1));
  };
  return {idx(p.x1, s.x_min, s.x_max, s.nx), idx(p.x2, s.y_min, s.y_max, s.ny)};
}

} // namespace abv
