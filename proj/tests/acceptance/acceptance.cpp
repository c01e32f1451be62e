// One line per acceptance criterion; the exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bonnet/fields.hpp"
#include "bonnet/ode.hpp"
#include "bonnet/painleve.hpp"
#include "bonnet/verify.hpp"

using namespace bonnet;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

BonnetParams demo_params() {
  BonnetParams p;
  p.a = 0.3;
  return p;
}

const Jet3 kDemoJet{0.5, 1.0, 1.0, 0.0};

Trajectory demo_trajectory(double rtol, double atol) {
  OdeOptions o;
  o.rtol = rtol;
  o.atol = atol;
  return integrate(demo_params(), kDemoJet, 2.5, o);
}

std::string indices(const std::vector<int>& v) {
  std::ostringstream s;
  s << "{";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  s << "}";
  return s.str();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

painleve::OdeFamilyCoefficients canonical() {
  return painleve::canonical_coefficients(Rational(3, 10), Rational(2));
}

Outcome fuchs_indices() {
  const auto coeffs = canonical();
  const auto h = painleve::fuchs_indices_h(coeffs).indices;
  const auto g = painleve::fuchs_indices_g(painleve::restrict_ode(coeffs)).indices;
  return {h == std::vector<int>{-1, 1, 2} && g == std::vector<int>{-1, 0, 2},
          "h " + indices(h) + ", g " + indices(g)};
}

Outcome resonance_vanishing() {
  const auto report = painleve::resonance_conditions_h(canonical());
  bool zero = report.compatibility_residuals.size() == 2;
  std::string detail;
  for (const auto& [index, series] : report.compatibility_residuals) {
    zero = zero && series.is_zero();
    detail += "r=" + std::to_string(index) + ": " + to_string(series) + "; ";
  }
  return {zero && report.passed, detail + (report.passed ? "recursion unobstructed" : "recursion obstructed")};
}

Outcome g4_condition() {
  const auto coeffs = canonical();
  const Series residual = painleve::condition_g(coeffs.f4, coeffs.f1);
  const auto profile = painleve::solve_g4(0.3);
  double worst = 0.0;
  for (int k = 0; k <= 280; ++k) {
    worst = std::max(worst, std::abs(profile.condition_residual(0.2 + 2.8 * k / 280)));
  }
  return {residual.is_zero() && worst <= 1e-10, "series " + to_string(residual) + ", float max " + sci(worst)};
}

Outcome first_integral() {
  const auto fine = demo_trajectory(1e-10, 1e-12);
  const auto finer = demo_trajectory(2.5e-11, 2.5e-13);
  if (!fine.completed() || !finer.completed()) return {false, "integration terminated early"};
  const double d1 = k_drift(fine, demo_params());
  const double d2 = k_drift(finer, demo_params());
  return {d1 <= 1e-8 && d1 >= 4.0 * d2, "drift " + sci(d1) + ", quartered " + sci(d2) + ", ratio " + sci(d1 / d2)};
}

Outcome s_identity() {
  const auto r = s_identity_residual(demo_trajectory(1e-10, 1e-12), demo_params());
  return {r.s_minus_h2 <= 1e-6 && r.gs_identity <= 1e-5,
          "|S - h^2| " + sci(r.s_minus_h2) + ", |(gS')^2 - 4S| " + sci(r.gs_identity)};
}

Outcome field_identities() {
  const auto p = demo_params();
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> ux(0.2, 3.0), uy(-2.0, 2.0);
  double rep = 0.0, qzbar = 0.0;
  for (int k = 0; k < 100; ++k) {
    const ComplexPoint pt{ux(rng), uy(rng)};
    const auto v = closed_form_q(pt, p);
    rep = std::max(rep, v.representation_gap());
    // |Q|^2 from the coth form, not the sinh form the derivative shares.
    const double mod2 = std::norm(v.q);
    qzbar = std::max(qzbar, std::abs(analytic_q_derivatives(pt, p).q_zbar - mod2) / std::max(1.0, mod2));
  }
  return {rep <= 1e-12 && qzbar <= 1e-10, "representation gap " + sci(rep) + ", |Q_zbar - |Q|^2| " + sci(qzbar)};
}

Outcome system_verification() {
  const auto p = demo_params();
  const auto traj = demo_trajectory(1e-10, 1e-12);
  const GridSpec grid;
  const auto analytic = gauss_codazzi_residuals(p, traj, grid, DerivativeMode::analytic);
  std::vector<ResidualReport> fd;
  for (double h : {0.05, 0.025, 0.0125}) {
    fd.push_back(gauss_codazzi_residuals(p, traj, grid, DerivativeMode::finite_difference, h));
  }
  const auto order = convergence_order(fd);
  const bool ok = analytic.gauss_max <= 1e-8 && analytic.codazzi1_max <= 1e-8 &&
                  analytic.codazzi2_max <= 1e-8 && order.min() >= 1.8 && order.max() <= 2.2;
  return {ok, "analytic " + sci(analytic.gauss_max) + "/" + sci(analytic.codazzi1_max) + "/" +
                  sci(analytic.codazzi2_max) + ", fd orders " + sci(order.gauss) + "/" +
                  sci(order.codazzi1) + "/" + sci(order.codazzi2)};
}

Outcome reconstruction() {
  const auto p = demo_params();
  const auto map = ReductionMap::canonical(p);
  const GridSpec grid;
  double worst = 0.0;
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      const ComplexPoint pt{grid.x(i), grid.y(j)};
      const auto v = closed_form_q(pt, p);
      const auto [q, qbar] = reconstruct_q(map, p.a, pt);
      worst = std::max({worst, std::abs(q - v.q) / std::abs(v.q), std::abs(qbar - v.qbar) / std::abs(v.qbar)});
    }
  }
  return {worst <= 1e-12, "max relative gap " + sci(worst)};
}

Outcome small_a_limit() {
  auto gap = [](double a) { return std::abs(painleve::solve_g4(a).value(1.0) - (32.0 * a * a / 3.0 - 2.0)); };
  const double ratio = gap(1e-2) / gap(1e-3);
  return {ratio >= 0.8e4 && ratio <= 1.2e4, "gap ratio " + sci(ratio)};
}

Outcome functional_gauge() {
  const auto p = demo_params();
  const auto map = ReductionMap::canonical(p);
  const GridSpec grid;
  double f1 = 0.0, f2 = 0.0;
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      const ComplexPoint pt{grid.x(i), grid.y(j)};
      const auto f = f_functionals(analytic_q_derivatives(pt, p), phi_derivatives(map, pt));
      f1 = std::max(f1, std::abs(f.f1 - 2.0));
      f2 = std::max(f2, std::abs(f.f2));
    }
  }
  return {f1 <= 1e-10 && f2 <= 1e-10, "|F1 - 2| " + sci(f1) + ", |F2| " + sci(f2)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Fuchs indices", fuchs_indices},
      {"resonance conditions vanish", resonance_vanishing},
      {"G4 condition", g4_condition},
      {"first integral conservation", first_integral},
      {"S identity", s_identity},
      {"field identities", field_identities},
      {"Gauss-Codazzi verification", system_verification},
      {"Q reconstruction", reconstruction},
      {"a -> 0 limit", small_a_limit},
      {"F-functional gauge", functional_gauge},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.passed ? 0 : 1;
    std::printf("%s %2zu. %s: %s (%.2fs)\n", o.passed ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
