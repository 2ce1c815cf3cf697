#include "cli.hpp"

#include "run_config.hpp"
#include "surface.hpp"
#include "verify.hpp"

#include "abv/errors.hpp"
#include "abv/krein_pauli.hpp"
#include "abv/one_vortex.hpp"
#include "abv/two_vortex_green.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#ifndef ABV_VERSION
#define ABV_VERSION "0.0.0"
#endif

namespace abv {

namespace {

struct Overrides {
  std::string config_path;
  std::optional<double> alpha, beta, rho, tol_scale;
  std::optional<std::string> z;
  std::optional<int> threads;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "run config file (key = value)");
  sub->add_option("--alpha", o.alpha, "flux at a");
  sub->add_option("--beta", o.beta, "flux at b");
  sub->add_option("--rho", o.rho, "vortex separation");
  sub->add_option("--z", o.z, "spectral parameter, e.g. 0+1i");
  sub->add_option("--tol-scale", o.tol_scale, "multiplies every verification tolerance");
  sub->add_option("--threads", o.threads, "worker threads (overrides ABV_THREADS)");
}

struct Resolved {
  RunConfig cfg;
  std::string threads_source = "config";
};

Resolved resolve(const Overrides& o) {
  Resolved r;
  r.cfg = o.config_path.empty() ? RunConfig{} : RunConfig::load(o.config_path);
  if (const char* env = std::getenv("ABV_THREADS"); env && *env) {
    RunConfig t = RunConfig::parse("threads = " + std::string(env));
    r.cfg.threads = t.threads;
    r.threads_source = "ABV_THREADS";
  }
  if (o.alpha) r.cfg.alpha = *o.alpha;
  if (o.beta) r.cfg.beta = *o.beta;
  if (o.rho) r.cfg.rho = *o.rho;
  if (o.tol_scale) r.cfg.tol_scale = *o.tol_scale;
  if (o.z) {
    const cplx z = parse_complex(*o.z);
    r.cfg.z_re = z.real();
    r.cfg.z_im = z.imag();
  }
  if (o.threads) {
    r.cfg.threads = *o.threads;
    r.threads_source = "option";
  }
  // Re-parse validates the merged values.
  r.cfg = RunConfig::parse(r.cfg.to_text());
  return r;
}

ContextOptions context_options(const RunConfig& c) {
  ContextOptions opt;
  opt.tol = c.grid_tol;
  return opt;
}

Side parse_side(const std::string& s) {
  if (s == "none") return Side::None;
  if (s == "upper") return Side::Upper;
  if (s == "lower") return Side::Lower;
  fail(ErrorCode::ConfigError, "side must be none, upper or lower");
}

Center parse_center(const std::string& s) {
  if (s == "a") return Center::A;
  if (s == "b") return Center::B;
  fail(ErrorCode::ConfigError, "vortex must be a or b");
}

Spin parse_spin(const std::string& s) {
  if (s == "plus" || s == "+") return Spin::Plus;
  if (s == "minus" || s == "-") return Spin::Minus;
  fail(ErrorCode::ConfigError, "spin must be plus or minus");
}

std::string cplx_text(cplx v) { return format_double(v.real()) + " " + format_double(v.imag()); }

struct EvalArgs {
  std::string target;
  std::optional<std::string> x, x0;
  std::string side = "none", side0 = "none";
  std::string u = "a", nu = "lower", spin = "plus", own = "a", chain = "resummed";
};

int cmd_eval(const EvalArgs& a, const Resolved& r, std::ostream& out) {
  const RunConfig& c = r.cfg;
  const VortexPair cfg = c.pair();
  cfg.validate();
  const Energy e = Energy::from(c.z());
  const ContextOptions copt = context_options(c);
  auto need_x = [&] {
    if (!a.x) fail(ErrorCode::ConfigError, "eval " + a.target + " needs --x");
    PlanePoint p = parse_point(*a.x);
    p.side = parse_side(a.side);
    return p;
  };
  auto source = [&] {
    PlanePoint p = a.x0 ? parse_point(*a.x0) : PlanePoint{c.source_x1, c.source_x2};
    p.side = parse_side(a.side0);
    return p;
  };
  TruncationPolicy pol;
  pol.tail_tol = c.tail_tol;
  if (a.chain == "adaptive") pol.mode = ChainMode::Adaptive;
  else if (a.chain != "resummed") fail(ErrorCode::ConfigError, "chain must be resummed or adaptive");

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, std::string>> lines;
  double bound = c.grid_tol;
  if (a.target == "green1") {
    const PlanePoint x = need_x(), x0 = source();
    const double tol = 1e-12;
    lines.push_back({"value", cplx_text(green_one(e, cfg.alpha, x, x0, tol))});
    bound = tol;
  } else if (a.target == "green2") {
    const PlanePoint x = need_x(), x0 = source();
    const GreenValue g = green_two_detailed(*make_context(e, cfg, copt), x, x0, pol);
    lines.push_back({"value", cplx_text(g.value)});
    if (g.chain_length >= 0) lines.push_back({"chain_length", std::to_string(g.chain_length)});
    bound = c.grid_tol + g.tail_bound;
  } else if (a.target == "psi") {
    const PlanePoint x = need_x();
    ChannelIndex ch{parse_center(a.u), false};
    if (a.nu == "upper") ch.upper = true;
    else if (a.nu != "lower") fail(ErrorCode::ConfigError, "nu must be lower or upper");
    const DeficiencyBasis b(make_context(e, cfg, copt));
    lines.push_back({"channel", std::to_string(ch.flat())});
    lines.push_back({"nu", format_double(ch.nu(cfg))});
    lines.push_back({"value", cplx_text(b.psi(ch, x))});
  } else if (a.target == "pauli-green") {
    const PlanePoint x = need_x(), x0 = source();
    const KreinSystem sys(e, cfg, copt);
    lines.push_back({"spin", a.spin});
    lines.push_back({"value", cplx_text(sys.pauli_green(parse_spin(a.spin), x, x0, pol))});
  } else if (a.target == "S" || a.target == "T") {
    const Center own = parse_center(a.own);
    const DeficiencyBasis b(make_context(e, cfg, copt));
    const AsymptoticMatrices m = b.matrices(own);
    const Eigen::Matrix2cd& v = a.target == "S" ? m.S : m.T;
    lines.push_back({"own", a.own});
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        lines.push_back({"value[" + std::to_string(i) + "][" + std::to_string(j) + "]", cplx_text(v(i, j))});
  } else if (a.target == "M") {
    const Spin s = parse_spin(a.spin);
    const DeficiencyBasis b(make_context(e, cfg, copt));
    const KreinMatrix m = krein_matrix(b, s);
    const auto blk = krein_block(s);
    lines.push_back({"spin", a.spin});
    lines.push_back({"flat_indices", std::to_string(blk[0] + 1) + " " + std::to_string(blk[1] + 1)});
    lines.push_back({"embedding", "rows and columns flat_indices of the 4x4 matrix; all other entries 0"});
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        lines.push_back({"value[" + std::to_string(i) + "][" + std::to_string(j) + "]", cplx_text(m.red(i, j))});
    lines.push_back({"condition", format_double(m.condition)});
    bound = c.grid_tol * m.condition;
  } else {
    fail(ErrorCode::ConfigError, "unknown eval target '" + a.target + "'");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  out << "target = " << a.target << "\n";
  out << "z = " << cplx_text(c.z()) << "\n";
  out << "alpha = " << format_double(cfg.alpha) << "\nbeta = " << format_double(cfg.beta)
      << "\nrho = " << format_double(cfg.rho) << "\n";
  for (const auto& [k, v] : lines) out << k << " = " << v << "\n";
  out << "error_bound = " << format_double(bound) << "\n";
  out << "elapsed_s = " << format_double(secs) << "\n";
  return 0;
}

int cmd_verify(const std::string& which, const Resolved& r, std::ostream& out) {
  verify::SuiteOptions opt;
  opt.cfg = r.cfg.pair();
  opt.z = r.cfg.z();
  opt.context = context_options(r.cfg);
  opt.tol_scale = r.cfg.tol_scale;
  opt.grid_n = r.cfg.grid.nx;
  opt.threads = r.cfg.threads;
  bool found = false, all_pass = true;
  int n = 0, failed = 0;
  for (const auto& s : verify::suites()) {
    if (which != "all" && which != s.name) continue;
    found = true;
    const auto checks = s.run(opt);
    for (const auto& ch : checks) {
      out << s.name << "  " << verify::format_check(ch) << "\n";
      ++n;
      if (!ch.pass) {
        ++failed;
        all_pass = false;
      }
    }
  }
  if (!found) fail(ErrorCode::ConfigError, "unknown suite '" + which + "'");
  out << "summary  checks=" << n << " failed=" << failed << " tol_scale=" << format_double(r.cfg.tol_scale) << "\n";
  return all_pass ? 0 : 1;
}

const char* plot_template = R"(import csv
import sys

import matplotlib.pyplot as plt
import numpy as np

NX, NY = @NX@, @NY@
rows = list(csv.DictReader(open(sys.argv[1] if len(sys.argv) > 1 else "@CSV@")))
x1 = np.array([float(r["x1"]) for r in rows]).reshape(NY, NX)
x2 = np.array([float(r["x2"]) for r in rows]).reshape(NY, NX)
mod = np.array([float(r["abs"]) if r["masked"] == "0" else np.nan for r in rows]).reshape(NY, NX)

fig = plt.figure(figsize=(7, 6))
ax = fig.add_subplot(projection="3d")
ax.plot_surface(x1, x2, np.ma.masked_invalid(mod), cmap="viridis", rstride=2, cstride=2)
ax.set_xlabel("x1")
ax.set_ylabel("x2")
ax.set_zlabel("|@FUNC@|")
fig.savefig("@STEM@.png", dpi=150)
)";

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) s.replace(p, from.size(), to);
  return s;
}

struct GridArgs {
  std::string function;
  std::optional<std::string> x0, out, box;
  std::optional<int> nx, ny;
};

int cmd_grid(const GridArgs& a, Resolved r, std::ostream& out, std::ostream& err) {
  RunConfig& c = r.cfg;
  if (a.x0) {
    const PlanePoint p = parse_point(*a.x0);
    c.source_x1 = p.x1;
    c.source_x2 = p.x2;
  }
  if (a.out) c.output_dir = *a.out;
  if (a.nx) c.grid.nx = *a.nx;
  if (a.ny) c.grid.ny = *a.ny;
  if (a.box) {
    std::vector<double> v;
    std::string s = *a.box;
    for (std::size_t p = 0; p <= s.size();) {
      const std::size_t q = std::min(s.find(',', p), s.size());
      v.push_back(parse_complex(s.substr(p, q - p)).real());
      p = q + 1;
    }
    if (v.size() != 4) fail(ErrorCode::ConfigError, "--box expects x_min,x_max,y_min,y_max");
    c.grid.x_min = v[0];
    c.grid.x_max = v[1];
    c.grid.y_min = v[2];
    c.grid.y_max = v[3];
  }
  c = RunConfig::parse(c.to_text());
  c.pair().validate();

  SurfaceRequest req;
  req.function = a.function;
  req.energy = Energy::from(c.z());
  req.cfg = c.pair();
  req.x0 = {c.source_x1, c.source_x2};
  req.context = context_options(c);
  const SurfaceGrid g = evaluate_grid(surface_function(req), c.grid, c.threads, a.function);

  namespace fs = std::filesystem;
  fs::create_directories(c.output_dir);
  const fs::path dir(c.output_dir);
  const std::string csv_name = a.function + ".csv", json_name = a.function + ".json",
                    plot_name = a.function + "_plot.py";

  {
    std::ofstream f(dir / csv_name, std::ios::binary);
    f << "x1,x2,re,im,abs,masked\n";
    for (int j = 0; j < c.grid.ny; ++j)
      for (int i = 0; i < c.grid.nx; ++i) {
        const PlanePoint p = c.grid.point(i, j);
        f << format_double(p.x1) << "," << format_double(p.x2) << ",";
        if (g.is_masked(i, j)) f << ",,,1\n";
        else {
          const cplx v = g.at(i, j);
          f << format_double(v.real()) << "," << format_double(v.imag()) << "," << format_double(std::abs(v)) << ",0\n";
        }
      }
  }

  nlohmann::ordered_json meta;
  meta["function"] = a.function;
  meta["version"] = ABV_VERSION;
  meta["config"] = c.to_json();
  meta["tolerances"] = {{"grid_tol", c.grid_tol},
                        {"tail_tol", c.tail_tol},
                        {"tol_scale", c.tol_scale},
                        {"min_radius", req.context.min_radius}};
  meta["threads"] = {{"count", c.threads}, {"source", r.threads_source}};
  meta["grid"] = {{"layout", "row-major, x2 outer, x1 inner"}, {"axis_side", "upper"}};
  meta["mask"] = {{"count", g.masked()}, {"budget", c.mask_budget}};
  meta["files"] = {{"csv", csv_name}, {"plot", plot_name}};
  {
    std::ofstream f(dir / json_name, std::ios::binary);
    f << meta.dump(2) << "\n";
  }
  {
    std::string s = replace_all(plot_template, "@NX@", std::to_string(c.grid.nx));
    s = replace_all(s, "@NY@", std::to_string(c.grid.ny));
    s = replace_all(s, "@CSV@", csv_name);
    s = replace_all(s, "@FUNC@", a.function);
    s = replace_all(s, "@STEM@", a.function);
    std::ofstream f(dir / plot_name, std::ios::binary);
    f << s;
  }
  out << "csv = " << (dir / csv_name).string() << "\n";
  out << "metadata = " << (dir / json_name).string() << "\n";
  out << "plot = " << (dir / plot_name).string() << "\n";
  out << "masked = " << g.masked() << "\n";
  if (static_cast<long>(g.masked()) > c.mask_budget) {
    err << "error = MaskBudgetExceeded: " << g.masked() << " masked cells, budget " << c.mask_budget << "\n";
    return 2;
  }
  return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aharonov-Bohm two-vortex Green functions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ABV_VERSION);

  Overrides eo, vo, go;
  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "evaluate one quantity");
  eval->add_option("target", ea.target, "green1|green2|psi|pauli-green|S|T|M")->required();
  eval->add_option("--x,--at", ea.x, "field point x1,x2");
  eval->add_option("--x0", ea.x0, "source point x1,x2");
  eval->add_option("--side", ea.side, "side tag of x: none|upper|lower");
  eval->add_option("--side0", ea.side0, "side tag of x0");
  eval->add_option("--u", ea.u, "vortex of the channel: a|b");
  eval->add_option("--nu", ea.nu, "channel order: lower|upper");
  eval->add_option("--spin", ea.spin, "plus|minus");
  eval->add_option("--own", ea.own, "own vortex of S/T: a|b");
  eval->add_option("--chain", ea.chain, "resummed|adaptive");
  add_common(eval, eo);

  std::string suite = "all";
  auto* ver = app.add_subcommand("verify", "run verification suites");
  ver->add_option("suite", suite, "identities|one-vortex|green|cuts|asymptotics|krein|zero-modes|figures|all");
  add_common(ver, vo);

  GridArgs ga;
  auto* grid = app.add_subcommand("grid", "write a surface grid");
  grid->add_option("--function", ga.function, "psi-{a,b}-{lower,upper}|green1|green2|pauli-green-{plus,minus}")
      ->required();
  grid->add_option("--x0", ga.x0, "source point x1,x2");
  grid->add_option("--out", ga.out, "output directory");
  grid->add_option("--box", ga.box, "x_min,x_max,y_min,y_max");
  grid->add_option("--nx", ga.nx, "samples along x1");
  grid->add_option("--ny", ga.ny, "samples along x2");
  add_common(grid, go);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) return cmd_eval(ea, resolve(eo), out);
    if (*ver) return cmd_verify(suite, resolve(vo), out);
    if (*grid) return cmd_grid(ga, resolve(go), out, err);
  } catch (const Error& e) {
    err << "error = " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error = InternalError: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

} // namespace abv
