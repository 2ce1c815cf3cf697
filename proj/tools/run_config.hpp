#pragma once

#include "surface.hpp"

#include <json.hpp>

#include <string>

namespace abv {

// Flat "key = value" text with typed keys; '#' starts a comment.
struct RunConfig {
  static constexpr int current_schema = 1;

  int schema_version = current_schema;
  double alpha = 1.0 / 3;
  double beta = 2.0 / 3;
  double rho = 1.0;
  double z_re = 0.0;
  double z_im = 1.0;
  double grid_tol = 1e-10;
  double tail_tol = 1e-10;
  double tol_scale = 1.0;
  GridSpec grid;
  double source_x1 = 0.5;
  double source_x2 = 0.5;
  int mask_budget = 25;
  std::string output_dir = ".";
  int threads = 1;

  VortexPair pair() const { return {alpha, beta, rho}; }
  cplx z() const { return {z_re, z_im}; }

  // ConfigError on unknown keys, bad values or a schema mismatch.
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  std::string to_text() const;
  nlohmann::ordered_json to_json() const;
};

// "a+bi", "a-bi", "bi", "a" or "a,b".
cplx parse_complex(const std::string& s);
// "x1,x2".
PlanePoint parse_point(const std::string& s);

// 17 significant digits.
std::string format_double(double v);

} // namespace abv
