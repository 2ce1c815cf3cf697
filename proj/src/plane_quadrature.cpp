#include "abv/plane_quadrature.hpp"

#include "abv/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>

namespace abv {

namespace {

struct Rule {
  std::vector<double> x; // on [0, 1]
  std::vector<double> w;
};

template <unsigned N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& a = G::abscissa();
  const auto& wt = G::weights();
  Rule r;
  // Boost stores the non-negative half of the symmetric rule.
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double xi = a[i], wi = wt[i];
    if (xi == 0.0) {
      r.x.push_back(0.5);
      r.w.push_back(0.5 * wi);
      continue;
    }
    r.x.push_back(0.5 - 0.5 * xi);
    r.w.push_back(0.5 * wi);
    r.x.push_back(0.5 + 0.5 * xi);
    r.w.push_back(0.5 * wi);
  }
  return r;
}

const Rule& rule(int n) {
  static const Rule r8 = make_rule<8>(), r12 = make_rule<12>(), r16 = make_rule<16>(), r20 = make_rule<20>(),
                    r24 = make_rule<24>(), r32 = make_rule<32>(), r48 = make_rule<48>();
  switch (n) {
  case 8: return r8;
  case 12: return r12;
  case 16: return r16;
  case 20: return r20;
  case 24: return r24;
  case 32: return r32;
  case 48: return r48;
  default: fail(ErrorCode::InvalidArgument, "supported Gauss-Legendre sizes: 8 12 16 20 24 32 48");
  }
}

struct Cell {
  double cx, cy;
  std::vector<std::pair<double, double>> others; // other centers
  double R;

  // Distance from the center to the cell boundary along direction phi.
  double reach(double phi) const {
    const double ux = std::cos(phi), uy = std::sin(phi);
    const double cu = cx * ux + cy * uy, cc = cx * cx + cy * cy;
    double s = -cu + std::sqrt(std::max(0.0, cu * cu - cc + R * R));
    for (auto [ox, oy] : others) {
      const double dx = ox - cx, dy = oy - cy;
      const double den = dx * ux + dy * uy;
      if (den > 0.0) s = std::min(s, 0.5 * (dx * dx + dy * dy) / den);
    }
    return std::max(s, 0.0);
  }
};

double wrap(double a) {
  a = std::fmod(a, 2 * pi);
  return a < 0 ? a + 2 * pi : a;
}

// Directions from the cell center where the boundary switches between constraints.
std::vector<double> kink_angles(const Cell& c) {
  std::vector<double> out;
  // Bisector lines as n . y = k.
  struct Line {
    double nx, ny, k;
  };
  std::vector<Line> lines;
  for (auto [ox, oy] : c.others) {
    const double nx = ox - c.cx, ny = oy - c.cy;
    lines.push_back({nx, ny, nx * 0.5 * (ox + c.cx) + ny * 0.5 * (oy + c.cy)});
  }
  auto add_point = [&](double px, double py) { out.push_back(wrap(std::atan2(py - c.cy, px - c.cx))); };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const double det = lines[i].nx * lines[j].ny - lines[i].ny * lines[j].nx;
      if (std::abs(det) < 1e-14) continue;
      add_point((lines[i].k * lines[j].ny - lines[i].ny * lines[j].k) / det,
                (lines[i].nx * lines[j].k - lines[i].k * lines[j].nx) / det);
    }
    // Intersections with the outer circle.
    const Line& l = lines[i];
    const double nn = l.nx * l.nx + l.ny * l.ny;
    const double px = l.k * l.nx / nn, py = l.k * l.ny / nn;
    const double d2 = c.R * c.R - (px * px + py * py);
    if (d2 > 0.0) {
      const double t = std::sqrt(d2 / nn);
      add_point(px - t * l.ny, py + t * l.nx);
      add_point(px + t * l.ny, py - t * l.nx);
    }
  }
  return out;
}

template <class V, class F>
V integrate_core(const F& f, const std::vector<PlanePoint>& centers, const PlaneQuadOptions& opt, const V& zero) {
  const Rule& ga = rule(opt.angular_nodes);
  const Rule& g1 = rule(opt.first_panel_nodes);
  const Rule& gp = rule(opt.panel_nodes);
  V total = zero;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    Cell cell{centers[k].x1, centers[k].x2, {}, opt.radius};
    if (std::hypot(cell.cx, cell.cy) >= opt.radius) fail(ErrorCode::InvalidArgument, "center outside the disk");
    for (std::size_t j = 0; j < centers.size(); ++j)
      if (j != k) cell.others.push_back({centers[j].x1, centers[j].x2});
    std::vector<double> cuts = kink_angles(cell);
    cuts.push_back(0.0);
    cuts.push_back(2 * pi);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> breaks;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      if (b - a < 1e-13) continue;
      const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / opt.max_angular_piece)));
      for (int p = 0; p < pieces; ++p) breaks.push_back(a + (b - a) * p / pieces);
    }
    breaks.push_back(2 * pi);
    V cell_sum = zero;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double a = breaks[i], b = breaks[i + 1];
      for (std::size_t q = 0; q < ga.x.size(); ++q) {
        const double phi = a + (b - a) * ga.x[q];
        const double wphi = (b - a) * ga.w[q];
        const double ux = std::cos(phi), uy = std::sin(phi);
        const double smax = cell.reach(phi);
        if (smax <= 0.0) continue;
        auto at = [&](double s) { return f(PlanePoint{cell.cx + s * ux, cell.cy + s * uy}); };
        V ray = zero;
        const double r1 = std::min(opt.first_radius, smax);
        for (std::size_t m = 0; m < g1.x.size(); ++m) {
          const double t = g1.x[m];
          const double s = r1 * t * t * t;
          ray += (g1.w[m] * 3.0 * r1 * t * t * s) * at(s);
        }
        double lo = r1;
        while (lo < smax) {
          const double hi = std::min(smax, 2.0 * lo);
          for (std::size_t m = 0; m < gp.x.size(); ++m) {
            const double s = lo + (hi - lo) * gp.x[m];
            ray += ((hi - lo) * gp.w[m] * s) * at(s);
          }
          lo = hi;
        }
        cell_sum += wphi * ray;
      }
    }
    total += cell_sum;
  }
  return total;
}

} // namespace

cplx integrate_plane(const std::function<cplx(const PlanePoint&)>& f, const std::vector<PlanePoint>& centers,
                     const PlaneQuadOptions& opt) {
  return integrate_core(f, centers, opt, cplx(0.0));
}

Eigen::VectorXcd integrate_plane_many(const std::function<Eigen::VectorXcd(const PlanePoint&)>& f, Eigen::Index n,
                                      const std::vector<PlanePoint>& centers, const PlaneQuadOptions& opt) {
  return integrate_core(f, centers, opt, Eigen::VectorXcd::Zero(n).eval());
}

} // namespace abv
