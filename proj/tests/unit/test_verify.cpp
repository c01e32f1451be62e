#include "doctest.h"

#include <cmath>

#include "bonnet/verify.hpp"

using namespace bonnet;

namespace {

BonnetParams params(double a) {
  BonnetParams p;
  p.a = a;
  return p;
}

const Trajectory& reference_trajectory() {
  static const Trajectory traj = integrate(params(0.3), {0.5, 1.0, 1.0, 0.0}, 2.5, OdeOptions{});
  return traj;
}

// Unit sphere in stereographic coordinates: Q = 0, H = 1, e^upsilon = 4/(1+|z|^2)^2.
class UnitSphere : public SurfaceModel {
 public:
  SurfacePoint values(const ComplexPoint& p) const override {
    SurfacePoint s;
    const double r2 = p.x * p.x + p.y * p.y;
    s.exp_upsilon = 4.0 / ((1.0 + r2) * (1.0 + r2));
    s.upsilon = std::log(s.exp_upsilon);
    s.h = 1.0;
    return s;
  }
  SurfacePoint analytic(const ComplexPoint& p) const override {
    SurfacePoint s = values(p);
    const double r2 = p.x * p.x + p.y * p.y;
    s.upsilon_zzbar = -2.0 / ((1.0 + r2) * (1.0 + r2));
    return s;
  }
  double c() const override { return 0.0; }
};

}  // namespace

TEST_CASE("residuals of a surface known independently") {
  const auto r = gauss_codazzi_residuals(UnitSphere{}, params(0.3), GridSpec{0.6, 2.4, -1.0, 1.0, 8, 8},
                                         DerivativeMode::analytic);
  CHECK(r.worst() < 1e-15);
}

TEST_CASE("analytic residuals of the Bonnet surface vanish") {
  const auto r = gauss_codazzi_residuals(params(0.3), reference_trajectory(), GridSpec{},
                                         DerivativeMode::analytic);
  CHECK(r.worst() < 1e-8);
  CHECK(r.conjugation_gap < 1e-14);
  CHECK_FALSE(r.masked.any());
  CHECK(to_string(r.mode) == "analytic");
}

TEST_CASE("finite-difference residuals converge at second order") {
  const GridSpec grid{0.6, 2.4, -1.0, 1.0, 16, 16};
  std::vector<ResidualReport> reports;
  for (double h : {0.04, 0.02, 0.01}) {
    reports.push_back(gauss_codazzi_residuals(params(0.3), reference_trajectory(), grid,
                                              DerivativeMode::finite_difference, h));
  }
  CHECK(reports[0].gauss_max / reports[1].gauss_max == doctest::Approx(4.0).epsilon(0.1));
  const auto order = convergence_order(reports);
  CHECK(order.min() > 1.8);
  CHECK(order.max() < 2.2);

  CHECK_THROWS_AS(convergence_order({reports[0], reports[1]}), std::invalid_argument);
  reports[0].mode = DerivativeMode::analytic;
  CHECK_THROWS_AS(convergence_order(reports), std::invalid_argument);
  CHECK_THROWS_AS(gauss_codazzi_residuals(params(0.3), reference_trajectory(), grid,
                                          DerivativeMode::finite_difference, 0.0),
                  std::invalid_argument);
}

TEST_CASE("a scaled metric leaves a predictable Gauss and Codazzi defect") {
  const auto p = params(0.3);
  const GridSpec grid{0.7, 2.3, -0.5, 0.5, 5, 3};
  const double s = 1.01;
  const BonnetSurface exact(p, reference_trajectory());
  const BonnetSurface scaled(p, reference_trajectory(), {s, std::nullopt});
  const auto r = gauss_codazzi_residuals(scaled, p, grid, DerivativeMode::analytic);
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      const auto e = exact.analytic({grid.x(i), grid.y(j)});
      const double t2 = 0.5 * e.h * e.h * e.exp_upsilon;
      const double t3 = 2.0 * e.mod_q2 / e.exp_upsilon;
      CHECK(r.gauss_raw(i, j) == doctest::Approx((s - 1.0) * t2 + (1.0 - 1.0 / s) * t3).epsilon(1e-6));
      CHECK(std::abs(r.codazzi1_raw(i, j) + 0.5 * (s - 1.0) * e.h_z * e.exp_upsilon) < 1e-12);
    }
  }
  CHECK(r.worst() > 1e-3);
}

TEST_CASE("a constant mean curvature leaves Q_zbar as the Codazzi defect") {
  const auto p = params(0.3);
  const GridSpec grid{0.7, 2.3, -0.5, 0.5, 4, 4};
  const BonnetSurface surface(p, reference_trajectory(), {1.0, 1.5});
  const auto r = gauss_codazzi_residuals(surface, p, grid, DerivativeMode::analytic);
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      const double m = closed_form_q({grid.x(i), grid.y(j)}, p).mod_q2;
      CHECK(std::abs(r.codazzi1_raw(i, j) - m) < 1e-10 * m);
    }
  }
}

TEST_CASE("coverage and argument checks") {
  const auto p = params(0.3);
  CHECK_THROWS_AS(gauss_codazzi_residuals(p, reference_trajectory(), GridSpec{0.6, 2.6, -1, 1, 4, 4},
                                          DerivativeMode::analytic),
                  std::out_of_range);
  CHECK_THROWS_AS(check_coverage(reference_trajectory(), p, GridSpec{}, 0.2), std::out_of_range);
  CHECK_NOTHROW(check_coverage(reference_trajectory(), p, GridSpec{}, 0.05));
  CHECK_THROWS_AS(BonnetSurface(p, reference_trajectory(), {0.0, std::nullopt}), std::invalid_argument);
}
