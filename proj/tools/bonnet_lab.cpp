// bonnet-lab: integrate the Bonnet ODE, run the Painleve test, tabulate the
// surface fields and verify the Gauss-Codazzi system.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bonnet/commands.hpp"
#include "bonnet/config.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> out, format, grid, a, xi0, c, rtol, f4_override, metric_scale, kappa;
  std::optional<int> window;
};

double parse_number(const std::string& flag, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw bonnet::ConfigError(flag + " expects a number, got '" + text + "'");
  }
}

bonnet::RunConfig build_config(const Overrides& o) {
  bonnet::RunConfig config;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw bonnet::ConfigError("cannot open config file '" + o.config_path + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw bonnet::ConfigError("config file is not valid JSON: " + std::string(e.what()));
    }
    config = bonnet::config_from_json(doc);
  }
  const bool z0_tracks_xi0 = config.params.z0 == std::complex<double>(config.params.xi0, 0.0);
  if (o.a) config.params.a = parse_number("--a", *o.a);
  if (o.xi0) {
    config.params.xi0 = parse_number("--xi0", *o.xi0);
    if (z0_tracks_xi0) config.params.z0 = {config.params.xi0, 0.0};
  }
  if (o.c) config.params.c = parse_number("--c", *o.c);
  if (o.rtol) config.ode.rtol = parse_number("--rtol", *o.rtol);
  if (o.grid) bonnet::apply_grid_flag(config, *o.grid);
  if (o.format) config.output.format = bonnet::parse_format(*o.format);
  if (o.out) config.output.path = *o.out;
  if (o.f4_override) config.painleve.f4_override = *o.f4_override;
  if (o.kappa) config.painleve.kappa = *o.kappa;
  if (o.metric_scale) config.verify.metric_scale = parse_number("--metric-scale", *o.metric_scale);
  if (o.window) config.series_window = *o.window;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bonnet surface laboratory"};
  app.require_subcommand(1);
  Overrides o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--out", o.out, "output file (default: standard output)");
    cmd->add_option("--format", o.format, "csv or json");
    cmd->add_option("--a", o.a, "the constant a");
    cmd->add_option("--xi0", o.xi0, "the shift xi0");
    cmd->add_option("--c", o.c, "ambient curvature constant c");
    cmd->add_option("--rtol", o.rtol, "relative tolerance of the integrator");
    cmd->add_option("--grid", o.grid, "grid as x0:x1:nx,y0:y1:ny");
  };

  auto* solve = app.add_subcommand("solve", "integrate the ODE and monitor the first integral");
  auto* painleve = app.add_subcommand("painleve-test", "run the Painleve test in exact arithmetic");
  auto* fields = app.add_subcommand("fields", "tabulate Q, |Q|^2, e^upsilon and H on a grid");
  auto* verify = app.add_subcommand("verify", "check the Gauss-Codazzi equations on a grid");
  for (auto* cmd : {solve, painleve, fields, verify}) add_common(cmd);
  painleve->add_option("--f4-override", o.f4_override, "replace F4 by this rational constant");
  painleve->add_option("--kappa", o.kappa, "4a coth(4a(xi* - xi0)) at the expansion point");
  painleve->add_option("--window", o.window, "series window");
  verify->add_option("--metric-scale", o.metric_scale, "multiply e^upsilon (perturbation probe)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : bonnet::kExitConfigError;
  }

  bonnet::RunConfig config;
  try {
    config = build_config(o);
  } catch (const bonnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return bonnet::kExitConfigError;
  }

  std::ostringstream buffer;
  int code = 0;
  if (*solve) code = bonnet::cmd_solve(config, buffer, std::cerr);
  if (*painleve) code = bonnet::cmd_painleve_test(config, buffer, std::cerr);
  if (*fields) code = bonnet::cmd_fields(config, buffer, std::cerr);
  if (*verify) code = bonnet::cmd_verify(config, buffer, std::cerr);

  if (config.output.path.empty()) {
    std::cout << buffer.str();
  } else if (!buffer.str().empty()) {
    std::ofstream file(config.output.path);
    if (!file) {
      std::cerr << "cannot write '" << config.output.path << "'\n";
      return bonnet::kExitConfigError;
    }
    file << buffer.str();
  }
  return code;
}
