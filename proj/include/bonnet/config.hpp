#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "bonnet/fields.hpp"
#include "bonnet/ode.hpp"
#include "bonnet/series.hpp"

namespace bonnet {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  BonnetParams params;
  struct Ode {
    double xi_start = 0.5, h = 1.0, h1 = 1.0, h2 = 0.0, xi_end = 2.5;
    double rtol = 1e-10, atol = 1e-12;
  } ode;
  GridSpec grid;
  int series_window = kDefaultSeriesWindow;
  struct Painleve {
    std::string kappa = "2";                 // 4a coth(4a(xi* - xi0)) at the expansion point
    std::optional<std::string> f4_override;  // constant replacing F4
  } painleve;
  struct Verify {
    double metric_scale = 1.0;
    std::vector<double> fd_steps{0.05, 0.025, 0.0125};
    double threshold = 1e-8;
  } verify;
  struct Output {
    OutputFormat format = OutputFormat::csv;
    std::string path;  // empty: standard output
  } output;

  /// Throws ConfigError naming the violated constraint.
  void validate() const;

  Jet3 jet0() const { return {ode.xi_start, ode.h, ode.h1, ode.h2}; }
  OdeOptions ode_options() const;
};

/// Reads a config document; missing keys keep their defaults.  z0 defaults to
/// (xi0, 0).
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& config);

/// Exact rational with the same shortest decimal spelling as `value`.
Rational exact_from_double(double value);

/// Parses "x0:x1:nx,y0:y1:ny" into the grid of `config`.
void apply_grid_flag(RunConfig& config, const std::string& spec);

OutputFormat parse_format(const std::string& text);
std::string to_string(OutputFormat format);

}  // namespace bonnet
