#include "bonnet/config.hpp"

#include <cmath>
#include <sstream>

namespace bonnet {

using nlohmann::json;

namespace {

template <class T>
void read(const json& obj, const char* key, T& target) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  if (!doc.contains(key)) return empty;
  if (!doc.at(key).is_object()) throw ConfigError(std::string("config section '") + key + "' must be an object");
  return doc.at(key);
}

}  // namespace

OdeOptions RunConfig::ode_options() const {
  OdeOptions o;
  o.rtol = ode.rtol;
  o.atol = ode.atol;
  return o;
}

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (double v : {ode.xi_start, ode.h, ode.h1, ode.h2, ode.xi_end}) {
    if (!std::isfinite(v)) throw ConfigError("ode values must be finite");
  }
  if (!(ode.rtol > 0.0) || !(ode.atol > 0.0)) throw ConfigError("ode.rtol and ode.atol must be > 0");
  if (ode.h1 == 0.0) throw ConfigError("ode.h1 must be nonzero: the ODE is singular at h' = 0");
  if (ode.xi_start == ode.xi_end) throw ConfigError("ode.xi_start and ode.xi_end must differ");
  if (ode.xi_start == params.xi0) throw ConfigError("ode.xi_start must differ from xi0");
  if ((params.xi0 - ode.xi_start) * (params.xi0 - ode.xi_end) <= 0.0) {
    throw ConfigError("the interval [xi_start, xi_end] must exclude xi0");
  }
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (series_window < 6) throw ConfigError("series_window must be at least 6");
  try {
    const Rational kappa = parse_rational(painleve.kappa);
    if (painleve.f4_override) parse_rational(*painleve.f4_override);
    const Rational a = exact_from_double(params.a);
    const Rational bound = 4 * (a < 0 ? Rational(-a) : a);
    if (kappa == 0 || (kappa < 0 ? Rational(-kappa) : kappa) <= bound) {
      throw ConfigError("painleve.kappa must satisfy |kappa| > 4|a| and kappa != 0");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("painleve: ") + e.what());
  }
  if (!(verify.metric_scale > 0.0)) throw ConfigError("verify.metric_scale must be > 0");
  if (!(verify.threshold > 0.0)) throw ConfigError("verify.threshold must be > 0");
  for (double s : verify.fd_steps) {
    if (!(s > 0.0)) throw ConfigError("verify.fd_steps must be positive");
  }
}

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  const json& p = section(doc, "params");
  read(p, "a", c.params.a);
  read(p, "xi0", c.params.xi0);
  read(p, "c", c.params.c);
  c.params.z0 = {c.params.xi0, 0.0};
  if (p.contains("z0")) {
    std::vector<double> z0;
    read(p, "z0", z0);
    if (z0.size() != 2) throw ConfigError("params.z0 must be [re, im]");
    c.params.z0 = {z0[0], z0[1]};
  }
  const json& o = section(doc, "ode");
  read(o, "xi_start", c.ode.xi_start);
  read(o, "h", c.ode.h);
  read(o, "h1", c.ode.h1);
  read(o, "h2", c.ode.h2);
  read(o, "xi_end", c.ode.xi_end);
  read(o, "rtol", c.ode.rtol);
  read(o, "atol", c.ode.atol);
  const json& g = section(doc, "grid");
  read(g, "x_min", c.grid.x_min);
  read(g, "x_max", c.grid.x_max);
  read(g, "y_min", c.grid.y_min);
  read(g, "y_max", c.grid.y_max);
  read(g, "nx", c.grid.nx);
  read(g, "ny", c.grid.ny);
  read(doc, "series_window", c.series_window);
  const json& pt = section(doc, "painleve");
  read(pt, "kappa", c.painleve.kappa);
  if (pt.contains("f4_override") && !pt.at("f4_override").is_null()) {
    std::string v;
    read(pt, "f4_override", v);
    c.painleve.f4_override = v;
  }
  const json& v = section(doc, "verify");
  read(v, "metric_scale", c.verify.metric_scale);
  read(v, "fd_steps", c.verify.fd_steps);
  read(v, "threshold", c.verify.threshold);
  const json& out = section(doc, "output");
  if (out.contains("format")) {
    std::string f;
    read(out, "format", f);
    c.output.format = parse_format(f);
  }
  read(out, "path", c.output.path);
  return c;
}

json to_json(const RunConfig& c) {
  json doc;
  doc["params"] = {{"a", c.params.a},
                   {"xi0", c.params.xi0},
                   {"c", c.params.c},
                   {"z0", {c.params.z0.real(), c.params.z0.imag()}}};
  doc["ode"] = {{"xi_start", c.ode.xi_start}, {"h", c.ode.h},           {"h1", c.ode.h1},
                {"h2", c.ode.h2},             {"xi_end", c.ode.xi_end}, {"rtol", c.ode.rtol},
                {"atol", c.ode.atol}};
  doc["grid"] = {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"y_min", c.grid.y_min},
                 {"y_max", c.grid.y_max}, {"nx", c.grid.nx},       {"ny", c.grid.ny}};
  doc["series_window"] = c.series_window;
  doc["painleve"] = {{"kappa", c.painleve.kappa},
                     {"f4_override", c.painleve.f4_override ? json(*c.painleve.f4_override) : json()}};
  doc["verify"] = {{"metric_scale", c.verify.metric_scale},
                   {"fd_steps", c.verify.fd_steps},
                   {"threshold", c.verify.threshold}};
  doc["output"] = {{"format", to_string(c.output.format)}, {"path", c.output.path}};
  return doc;
}

Rational exact_from_double(double value) {
  if (!std::isfinite(value)) throw ConfigError("cannot convert a non-finite value to a rational");
  return parse_rational(json(value).dump());
}

void apply_grid_flag(RunConfig& config, const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos) throw ConfigError("--grid expects \"x0:x1:nx,y0:y1:ny\"");
  auto axis = [&](const std::string& part, double& lo, double& hi, int& n) {
    std::istringstream in(part);
    char c1 = 0, c2 = 0;
    if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof()) {
      throw ConfigError("--grid axis '" + part + "' is not of the form lo:hi:n");
    }
  };
  axis(spec.substr(0, comma), config.grid.x_min, config.grid.x_max, config.grid.nx);
  axis(spec.substr(comma + 1), config.grid.y_min, config.grid.y_max, config.grid.ny);
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + text + "' (expected csv or json)");
}

std::string to_string(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "json"; }

}  // namespace bonnet
