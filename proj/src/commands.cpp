#include "bonnet/commands.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "bonnet/fields.hpp"
#include "bonnet/painleve.hpp"
#include "bonnet/verify.hpp"

namespace bonnet {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

template <class Body>
int guarded(std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::out_of_range& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::domain_error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

double k_or_nan(const Jet3& j, const BonnetParams& p) {
  try {
    return first_integral_k(j, p);
  } catch (const SingularJetError&) {
    return std::nan("");
  }
}

/// Integrates the configured jet; logs and reports early termination.
Trajectory solve_trajectory(const RunConfig& config, std::ostream& log) {
  auto traj = integrate(config.params, config.jet0(), config.ode.xi_end, config.ode_options());
  if (!traj.completed()) {
    log << "early termination: " << to_string(traj.termination()) << " (" << traj.message() << ")\n";
  }
  return traj;
}

std::string indices_text(const std::vector<int>& v) {
  std::ostringstream s;
  s << "{";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  s << "}";
  return s.str();
}

json report_json(const painleve::ResonanceReport& r) {
  json j;
  j["family"] = painleve::to_string(r.family);
  j["leading_order"] = {{"exponent", r.leading.exponent},
                        {"coefficient", r.leading.coefficient ? json(to_string(*r.leading.coefficient)) : json()}};
  j["fuchs_indices"] = r.fuchs.indices;
  j["indicial_polynomial"] = r.fuchs.indicial_polynomial.to_string();
  j["fuchs_diagnostic"] = r.fuchs.diagnostic;
  json conditions = json::object();
  for (const auto& [i, s] : r.compatibility_residuals) {
    conditions[std::to_string(i)] = {{"series", to_string(s)}, {"zero", s.is_zero()}};
  }
  j["conditions"] = conditions;
  json recursion = json::object();
  for (const auto& [i, v] : r.laurent_residuals) recursion[std::to_string(i)] = to_string(v);
  j["recursion_obstructions"] = recursion;
  j["passed"] = r.passed;
  return j;
}

void report_text(std::ostream& out, const painleve::ResonanceReport& r,
                 const std::vector<std::string>& names) {
  out << painleve::to_string(r.family) << ": leading order " << r.leading.describe()
      << ", Fuchs indices " << indices_text(r.fuchs.indices) << "\n";
  out << "  indicial polynomial: " << r.fuchs.indicial_polynomial.to_string() << "\n";
  if (!r.fuchs.diagnostic.empty()) out << "  diagnostic: " << r.fuchs.diagnostic << "\n";
  std::size_t k = 0;
  for (const auto& [i, s] : r.compatibility_residuals) {
    const std::string name = k < names.size() ? names[k] : "condition";
    out << "  " << name << " (index " << i << "): " << (s.is_zero() ? "zero series" : "NONZERO  " + to_string(s))
        << "\n";
    ++k;
  }
  for (const auto& [i, v] : r.laurent_residuals) {
    out << "  recursion obstruction at index " << i << ": " << to_string(v) << "\n";
  }
  out << "  " << (r.passed ? "passed" : "failed") << "\n";
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    const auto traj = solve_trajectory(config, log);
    const double drift = k_drift(traj, config.params);
    log << "samples: " << traj.samples().size() << ", K drift: " << format_double(drift) << "\n";

    if (config.output.format == OutputFormat::csv) {
      out << "xi,h,h1,h2,K\n";
      for (const auto& j : traj.samples()) {
        out << format_double(j.xi) << ',' << format_double(j.h) << ',' << format_double(j.h1) << ','
            << format_double(j.h2) << ',' << format_double(k_or_nan(j, config.params)) << '\n';
      }
    } else {
      json doc;
      doc["command"] = "solve";
      doc["config"] = to_json(config);
      doc["termination"] = to_string(traj.termination());
      doc["message"] = traj.message();
      doc["k_drift"] = drift;
      json samples = json::array();
      for (const auto& j : traj.samples()) {
        samples.push_back({{"xi", j.xi}, {"h", j.h}, {"h1", j.h1}, {"h2", j.h2},
                           {"K", number_or_null(k_or_nan(j, config.params))}});
      }
      doc["samples"] = std::move(samples);
      out << doc.dump(2) << "\n";
    }
    return traj.completed() ? kExitOk : kExitEarlyTermination;
  });
}

int cmd_painleve_test(const RunConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    using namespace painleve;
    const Rational a = exact_from_double(config.params.a);
    const Rational c = exact_from_double(config.params.c);
    const Rational kappa = parse_rational(config.painleve.kappa);
    const int window = config.series_window;

    auto coeffs = canonical_coefficients(a, kappa, c * c, window);
    if (config.painleve.f4_override) {
      coeffs.f4 = Series::constant(parse_rational(*config.painleve.f4_override), window);
    }
    const auto h_report = resonance_conditions_h(coeffs);
    const auto restricted = restrict_ode(coeffs);
    const auto g_report = resonance_conditions_g(restricted);

    const Series g4_closed = canonical_coefficients(a, kappa, c * c, window).f4;
    const Series g4_condition = condition_g(g4_closed, coeffs.f1);
    const G4Profile profile(config.params.a, 2.0, config.params.xi0);
    double float_residual = 0.0;
    constexpr int kSamples = 281;
    for (int k = 0; k < kSamples; ++k) {
      const double xi = config.params.xi0 + 0.2 + 2.8 * k / (kSamples - 1);
      float_residual = std::max(float_residual, std::abs(profile.condition_residual(xi)));
    }
    const bool passed = h_report.passed && g_report.passed && g4_condition.is_zero();

    if (config.output.format == OutputFormat::json) {
      json doc;
      doc["command"] = "painleve-test";
      doc["config"] = to_json(config);
      doc["a"] = to_string(a);
      doc["c2"] = to_string(c * c);
      doc["h_family"] = report_json(h_report);
      doc["g_family"] = report_json(g_report);
      doc["g4_condition"] = {{"series", to_string(g4_condition)},
                             {"zero", g4_condition.is_zero()},
                             {"max_float_residual", float_residual}};
      doc["result"] = passed ? "PASSED" : "FAILED";
      out << doc.dump(2) << "\n";
    } else {
      out << "Painleve test: a = " << to_string(a) << ", c^2 = " << to_string(c * c)
          << ", kappa = " << to_string(kappa) << ", window = " << window;
      if (config.painleve.f4_override) out << ", F4 overridden to " << *config.painleve.f4_override;
      out << "\n";
      report_text(out, h_report, {"Q1", "Q2"});
      report_text(out, g_report, {"G4 condition"});
      out << "G4 closed form: condition series " << (g4_condition.is_zero() ? "is zero" : to_string(g4_condition))
          << "; max float residual on [xi0+0.2, xi0+3] = " << format_double(float_residual) << "\n";
      out << (passed ? "PASSED" : "FAILED") << "\n";
    }
    log << "painleve-test " << (passed ? "PASSED" : "FAILED") << "\n";
    return passed ? kExitOk : kExitThresholdBreach;
  });
}

int cmd_fields(const RunConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    const auto traj = solve_trajectory(config, log);
    if (!traj.completed()) return static_cast<int>(kExitEarlyTermination);
    const auto fields = evaluate_fields(config.params, traj, config.grid);
    const long total = static_cast<long>(config.grid.nx) * config.grid.ny;
    if (fields.masked_count() == total) throw std::domain_error("every grid point lies in the pole band");
    if (fields.masked_count() > 0) {
      log << "warning: " << fields.masked_count() << " of " << total
          << " grid points masked near the pole wall Re z = " << format_double(config.params.z0.real()) << "\n";
    }
    const auto& g = config.grid;
    if (config.output.format == OutputFormat::csv) {
      out << "x,y,re_Q,im_Q,re_Qbar,im_Qbar,mod_Q2,exp_upsilon,H,masked\n";
      for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
          const bool m = fields.masked(i, j);
          auto v = [m](double x) { return m ? std::string("nan") : format_double(x); };
          out << format_double(g.x(i)) << ',' << format_double(g.y(j)) << ',' << v(fields.q(i, j).real()) << ','
              << v(fields.q(i, j).imag()) << ',' << v(fields.qbar(i, j).real()) << ','
              << v(fields.qbar(i, j).imag()) << ',' << v(fields.mod_q2(i, j)) << ','
              << v(fields.exp_upsilon(i, j)) << ',' << v(fields.h(i, j)) << ',' << (m ? 1 : 0) << '\n';
        }
      }
    } else {
      json doc;
      doc["command"] = "fields";
      doc["config"] = to_json(config);
      doc["masked_count"] = fields.masked_count();
      json points = json::array();
      for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
          json p = {{"x", g.x(i)}, {"y", g.y(j)}, {"masked", bool(fields.masked(i, j))}};
          if (!fields.masked(i, j)) {
            p["re_Q"] = fields.q(i, j).real();
            p["im_Q"] = fields.q(i, j).imag();
            p["re_Qbar"] = fields.qbar(i, j).real();
            p["im_Qbar"] = fields.qbar(i, j).imag();
            p["mod_Q2"] = fields.mod_q2(i, j);
            p["exp_upsilon"] = fields.exp_upsilon(i, j);
            p["H"] = fields.h(i, j);
          }
          points.push_back(std::move(p));
        }
      }
      doc["points"] = std::move(points);
      out << doc.dump(2) << "\n";
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    const auto traj = solve_trajectory(config, log);
    if (!traj.completed()) return static_cast<int>(kExitEarlyTermination);

    BonnetSurface::Perturbation perturbation;
    perturbation.metric_scale = config.verify.metric_scale;
    const BonnetSurface surface(config.params, traj, perturbation);
    check_coverage(traj, config.params, config.grid, 0.0);
    const auto analytic =
        gauss_codazzi_residuals(surface, config.params, config.grid, DerivativeMode::analytic);

    std::vector<ResidualReport> fd;
    for (double step : config.verify.fd_steps) {
      check_coverage(traj, config.params, config.grid, step);
      fd.push_back(gauss_codazzi_residuals(surface, config.params, config.grid,
                                           DerivativeMode::finite_difference, step));
    }
    std::optional<ConvergenceOrders> orders;
    if (fd.size() >= 3) orders = convergence_order(fd);

    const double drift = k_drift(traj, config.params);
    const auto s_id = s_identity_residual(traj, config.params);
    const bool ok = analytic.worst() <= config.verify.threshold;

    if (config.output.format == OutputFormat::json) {
      json doc;
      doc["command"] = "verify";
      doc["config"] = to_json(config);
      auto summary = [](const ResidualReport& r) {
        json j = {{"mode", to_string(r.mode)},
                  {"gauss_max", r.gauss_max},
                  {"codazzi1_max", r.codazzi1_max},
                  {"codazzi2_max", r.codazzi2_max},
                  {"gauss_raw_max", r.gauss_raw_max},
                  {"codazzi1_raw_max", r.codazzi1_raw_max},
                  {"codazzi2_raw_max", r.codazzi2_raw_max},
                  {"conjugation_gap", r.conjugation_gap},
                  {"masked_count", r.masked.count()}};
        if (r.mode == DerivativeMode::finite_difference) j["fd_step"] = r.fd_step;
        return j;
      };
      doc["analytic"] = summary(analytic);
      json fd_json = json::array();
      for (const auto& r : fd) fd_json.push_back(summary(r));
      doc["finite_difference"] = std::move(fd_json);
      if (orders) {
        doc["estimated_order"] = {{"gauss", orders->gauss},
                                  {"codazzi1", orders->codazzi1},
                                  {"codazzi2", orders->codazzi2}};
      }
      doc["k_drift"] = drift;
      doc["s_identity"] = {{"s_minus_h2", s_id.s_minus_h2}, {"gs_identity", s_id.gs_identity}};
      doc["threshold"] = config.verify.threshold;
      doc["passed"] = ok;
      out << doc.dump(2) << "\n";
    } else {
      out << "x,y,gauss,re_codazzi1,im_codazzi1,re_codazzi2,im_codazzi2,masked\n";
      const auto& g = config.grid;
      for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
          out << format_double(g.x(i)) << ',' << format_double(g.y(j)) << ','
              << format_double(analytic.gauss(i, j)) << ',' << format_double(analytic.codazzi1(i, j).real())
              << ',' << format_double(analytic.codazzi1(i, j).imag()) << ','
              << format_double(analytic.codazzi2(i, j).real()) << ','
              << format_double(analytic.codazzi2(i, j).imag()) << ',' << (analytic.masked(i, j) ? 1 : 0)
              << '\n';
        }
      }
    }
    log << "analytic residual maxima (normalized): gauss " << format_double(analytic.gauss_max)
        << ", codazzi1 " << format_double(analytic.codazzi1_max) << ", codazzi2 "
        << format_double(analytic.codazzi2_max) << "\n";
    if (orders) {
      log << "finite-difference order: gauss " << format_double(orders->gauss) << ", codazzi1 "
          << format_double(orders->codazzi1) << ", codazzi2 " << format_double(orders->codazzi2) << "\n";
    }
    log << "K drift " << format_double(drift) << ", S identity " << format_double(s_id.s_minus_h2) << " / "
        << format_double(s_id.gs_identity) << "\n";
    log << (ok ? "verify passed" : "verify FAILED: residual above threshold") << "\n";
    return ok ? static_cast<int>(kExitOk) : static_cast<int>(kExitThresholdBreach);
  });
}

}  // namespace bonnet
