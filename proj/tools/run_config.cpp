#include "run_config.hpp"

#include "abv/errors.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace abv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) fail(ErrorCode::ConfigError, key + ": expected a real number, got '" + v + "'");
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  int i = 0;
  try {
    i = std::stoi(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) fail(ErrorCode::ConfigError, key + ": expected an integer, got '" + v + "'");
  return i;
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
  std::function<nlohmann::ordered_json(const RunConfig&)> json;
};

template <class T>
Field real_field(T RunConfig::*m) {
  return {[m](RunConfig& c, const std::string& k, const std::string& v) { c.*m = to_double(k, v); },
          [m](const RunConfig& c) { return format_double(c.*m); },
          [m](const RunConfig& c) { return nlohmann::ordered_json(c.*m); }};
}

Field int_field(int RunConfig::*m) {
  return {[m](RunConfig& c, const std::string& k, const std::string& v) { c.*m = to_int(k, v); },
          [m](const RunConfig& c) { return std::to_string(c.*m); },
          [m](const RunConfig& c) { return nlohmann::ordered_json(c.*m); }};
}

Field grid_real(double GridSpec::*m) {
  return {[m](RunConfig& c, const std::string& k, const std::string& v) { c.grid.*m = to_double(k, v); },
          [m](const RunConfig& c) { return format_double(c.grid.*m); },
          [m](const RunConfig& c) { return nlohmann::ordered_json(c.grid.*m); }};
}

Field grid_int(int GridSpec::*m) {
  return {[m](RunConfig& c, const std::string& k, const std::string& v) { c.grid.*m = to_int(k, v); },
          [m](const RunConfig& c) { return std::to_string(c.grid.*m); },
          [m](const RunConfig& c) { return nlohmann::ordered_json(c.grid.*m); }};
}

// Schema in output order.
const std::vector<std::pair<std::string, Field>>& schema() {
  static const std::vector<std::pair<std::string, Field>> s{
      {"schema_version", int_field(&RunConfig::schema_version)},
      {"alpha", real_field(&RunConfig::alpha)},
      {"beta", real_field(&RunConfig::beta)},
      {"rho", real_field(&RunConfig::rho)},
      {"z_re", real_field(&RunConfig::z_re)},
      {"z_im", real_field(&RunConfig::z_im)},
      {"grid_tol", real_field(&RunConfig::grid_tol)},
      {"tail_tol", real_field(&RunConfig::tail_tol)},
      {"tol_scale", real_field(&RunConfig::tol_scale)},
      {"grid_x_min", grid_real(&GridSpec::x_min)},
      {"grid_x_max", grid_real(&GridSpec::x_max)},
      {"grid_y_min", grid_real(&GridSpec::y_min)},
      {"grid_y_max", grid_real(&GridSpec::y_max)},
      {"grid_nx", grid_int(&GridSpec::nx)},
      {"grid_ny", grid_int(&GridSpec::ny)},
      {"source_x1", real_field(&RunConfig::source_x1)},
      {"source_x2", real_field(&RunConfig::source_x2)},
      {"mask_budget", int_field(&RunConfig::mask_budget)},
      {"output_dir",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; },
        [](const RunConfig& c) { return c.output_dir; },
        [](const RunConfig& c) { return nlohmann::ordered_json(c.output_dir); }}},
      {"threads", int_field(&RunConfig::threads)},
  };
  return s;
}

const Field* find_field(const std::string& key) {
  for (const auto& [k, f] : schema())
    if (k == key) return &f;
  return nullptr;
}

void validate(const RunConfig& c) {
  if (c.schema_version != RunConfig::current_schema)
    fail(ErrorCode::ConfigError, "unsupported schema_version " + std::to_string(c.schema_version));
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0 && c.beta >= 0.0 && c.beta <= 1.0))
    fail(ErrorCode::ConfigError, "fluxes must lie in [0, 1]");
  if (!(c.rho > 0.0)) fail(ErrorCode::ConfigError, "rho must be positive");
  if (!(c.grid_tol > 0.0) || !(c.tail_tol > 0.0) || !(c.tol_scale > 0.0))
    fail(ErrorCode::ConfigError, "tolerances must be positive");
  if (c.grid.nx < 1 || c.grid.ny < 1 || !(c.grid.x_max > c.grid.x_min) || !(c.grid.y_max > c.grid.y_min))
    fail(ErrorCode::ConfigError, "empty surface grid");
  if (c.threads < 1) fail(ErrorCode::ConfigError, "threads must be at least 1");
  if (c.mask_budget < 0) fail(ErrorCode::ConfigError, "mask_budget must be nonnegative");
}

} // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorCode::ConfigError, "line " + std::to_string(n) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const Field* f = find_field(key);
    if (!f) fail(ErrorCode::ConfigError, "line " + std::to_string(n) + ": unknown key '" + key + "'");
    if (seen[key]++) fail(ErrorCode::ConfigError, "line " + std::to_string(n) + ": duplicate key '" + key + "'");
    f->set(c, key, value);
  }
  validate(c);
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::ConfigError, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, f] : schema()) out += k + " = " + f.get(*this) + "\n";
  return out;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  for (const auto& [k, f] : schema()) j[k] = f.json(*this);
  return j;
}

cplx parse_complex(const std::string& s0) {
  std::string s;
  for (char ch : s0)
    if (ch != ' ') s += ch;
  auto bad = [&] { fail(ErrorCode::ConfigError, "cannot parse complex number '" + s0 + "'"); };
  if (s.empty()) bad();
  const auto comma = s.find(',');
  if (comma != std::string::npos) return {to_double("re", s.substr(0, comma)), to_double("im", s.substr(comma + 1))};
  if (s.back() != 'i' && s.back() != 'j') return {to_double("re", s), 0.0};
  s.pop_back();
  // Split at the last sign that is not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) {
    if (s.empty() || s == "+") return {0.0, 1.0};
    if (s == "-") return {0.0, -1.0};
    return {0.0, to_double("im", s)};
  }
  std::string im = s.substr(split);
  if (im == "+") im = "1";
  if (im == "-") im = "-1";
  return {to_double("re", s.substr(0, split)), to_double("im", im)};
}

PlanePoint parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) fail(ErrorCode::ConfigError, "expected a point 'x1,x2', got '" + s + "'");
  return {to_double("x1", trim(s.substr(0, comma))), to_double("x2", trim(s.substr(comma + 1)))};
}

} // namespace abv
