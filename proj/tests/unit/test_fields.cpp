#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "bonnet/fields.hpp"
#include "bonnet/painleve.hpp"

using namespace bonnet;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

BonnetParams params(double a, Complex z0 = {0.0, 0.0}) {
  BonnetParams p;
  p.a = a;
  p.xi0 = z0.real();
  p.z0 = z0;
  return p;
}

double gap(Complex u, Complex v) { return std::abs(u - v) / std::max(1.0, std::abs(v)); }

}  // namespace

TEST_CASE("closed-form Q on the real axis") {
  const auto v = closed_form_q({1.0, 0.0}, params(0.25));
  const Big half_csch = Big(0.5) / sinh(Big(1));
  CHECK(v.mod_q2 == doctest::Approx((half_csch * half_csch).convert_to<double>()).epsilon(1e-15));
  CHECK(v.q.imag() == doctest::Approx(0.0));
  CHECK(v.q == v.qbar);
  CHECK(std::norm(v.q) == doctest::Approx(v.mod_q2).epsilon(1e-14));
}

TEST_CASE("the two Q representations agree and Qbar is the conjugate for real a") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ux(0.3, 2.5), uy(-1.2, 1.2);
  const auto p = params(0.3, {0.1, 0.2});
  for (int k = 0; k < 100; ++k) {
    const ComplexPoint pt{ux(rng), uy(rng)};
    const auto v = closed_form_q(pt, p);
    CHECK(v.representation_gap() < 1e-12);
    CHECK(gap(v.qbar, std::conj(v.q)) < 1e-13);
    CHECK(std::norm(v.q) == doctest::Approx(v.mod_q2).epsilon(1e-12));
  }
}

TEST_CASE("closed-form Q at a = 0") {
  const ComplexPoint pt{1.0, 0.5};
  const Complex w = pt.z();
  const auto v = closed_form_q(pt, params(0.0));
  CHECK(gap(v.q, 1.0 / w - 0.5) < 1e-15);
  CHECK(v.mod_q2 == doctest::Approx(0.25));
  // Continuity in a.
  CHECK(gap(closed_form_q(pt, params(1e-7)).q, v.q) < 1e-10);
}

TEST_CASE("points on the fixed singular line are rejected") {
  CHECK_THROWS_AS(closed_form_q({0.0, 0.3}, params(0.3)), PoleProximityError);
  CHECK_THROWS_AS(closed_form_q({1e-14, 0.0}, params(0.0)), PoleProximityError);
}

TEST_CASE("analytic Q derivatives match finite differences with second-order error") {
  const auto p = params(0.3);
  const ComplexPoint pt{1.1, 0.4};
  const auto an = analytic_q_derivatives(pt, p);
  const auto fd1 = finite_difference_q_derivatives(pt, p, 2e-3);
  const auto fd2 = finite_difference_q_derivatives(pt, p, 1e-3);
  auto check = [](Complex exact, Complex coarse, Complex fine) {
    const double e1 = std::abs(coarse - exact), e2 = std::abs(fine - exact);
    CHECK(e2 < 1e-5);
    if (e2 > 1e-11) CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  };
  check(an.q_z, fd1.q_z, fd2.q_z);
  check(an.q_zbar, fd1.q_zbar, fd2.q_zbar);
  check(an.qbar_z, fd1.qbar_z, fd2.qbar_z);
  check(an.q_zz, fd1.q_zz, fd2.q_zz);
  check(an.q_zzbar, fd1.q_zzbar, fd2.q_zzbar);
  // Q_zbar is real and equal to |Q|^2.
  CHECK(std::abs(an.q_zbar - closed_form_q(pt, p).mod_q2) < 1e-10);
}

TEST_CASE("metric factor") {
  const auto p = params(0.25);
  const double m = closed_form_q({1.0, 0.0}, p).mod_q2;
  CHECK(metric_exp_upsilon(1.0, 4.0 * m, p) == doctest::Approx(1.0));
  CHECK(metric_exp_upsilon(1.0, 1.0, p) == doctest::Approx(4.0 * m));
  CHECK_THROWS_AS(metric_exp_upsilon(1.0, 0.0, p), MetricSignError);
  CHECK_THROWS_AS(metric_exp_upsilon(1.0, -2.0, p), MetricSignError);
}

TEST_CASE("reduction constraint with the canonical reduction map") {
  const auto p = params(0.3, {0.0, 0.1});
  const auto map = ReductionMap::canonical(p);
  for (const ComplexPoint pt : {ComplexPoint{0.7, 0.2}, ComplexPoint{1.9, -0.8}}) {
    const auto q = analytic_q_derivatives(pt, p);
    const auto phi = phi_derivatives(map, pt);
    const auto r = reduction_constraint(q, phi);
    CHECK(std::abs(r.corrected) < 1e-10);
    CHECK(std::abs(r.as_printed) > 1e-3);
  }
}

TEST_CASE("phi = z - z0 reduces the printed constraint to Q_z") {
  const auto p = params(0.3);
  const ReductionMap map{OneVariableMap::affine(2.0, 0.0), OneVariableMap::zero()};
  const ComplexPoint pt{1.3, 0.6};
  const auto q = analytic_q_derivatives(pt, p);
  const auto r = reduction_constraint(q, phi_derivatives(map, pt));
  CHECK(gap(r.as_printed, q.q_z) < 1e-15);
}

TEST_CASE("F functionals of the canonical surface") {
  const double a = 0.3;
  const auto p = params(a);
  const auto map = ReductionMap::canonical(p);
  const painleve::G4Profile g4(a);
  for (const ComplexPoint pt : {ComplexPoint{0.8, 0.0}, ComplexPoint{1.5, 0.7}, ComplexPoint{2.2, -0.9}}) {
    const auto f = f_functionals(analytic_q_derivatives(pt, p), phi_derivatives(map, pt));
    const double m = closed_form_q(pt, p).mod_q2;
    CHECK(std::abs(f.f1 - 2.0) < 1e-10);
    CHECK(std::abs(f.f2) < 1e-10);
    CHECK(gap(f.f3_printed, 8.0 * m) < 1e-10);
    CHECK(gap(f.f3_effective, -f.f3_printed) < 1e-15);
    CHECK(gap(f.f4_effective, g4.value(pt.x)) < 1e-9);
    CHECK(gap(f.f3_effective, g4.value(pt.x)) < 1e-9);
  }
}

TEST_CASE("Q reconstructed from the reduction map") {
  const double a = 0.3;
  const auto p = params(a, {0.0, 0.25});
  const auto map = ReductionMap::canonical(p);
  const ComplexPoint pt{1.2, -0.4};
  const auto v = closed_form_q(pt, p);
  const auto [q, qbar] = reconstruct_q(map, a, pt);
  CHECK(gap(q, v.q) < 1e-12);
  CHECK(gap(qbar, v.qbar) < 1e-12);
  CHECK(std::abs(q * qbar - v.mod_q2) < 1e-12);

  // Doubling both maps doubles the effective parameter: Q -> 2 Q(2a).
  const ReductionMap doubled{OneVariableMap::affine(2.0, -2.0 * p.z0),
                             OneVariableMap::affine(2.0, -2.0 * std::conj(p.z0))};
  const auto scaled = closed_form_q(pt, params(2.0 * a, p.z0));
  CHECK(gap(reconstruct_q(doubled, a, pt).first, 2.0 * scaled.q) < 1e-12);

  CHECK_THROWS_AS(reconstruct_q({OneVariableMap::zero(), map.fb}, a, pt), std::domain_error);
  CHECK_THROWS_AS(reconstruct_q(map, a, {0.0, 0.5}), PoleProximityError);
}

TEST_CASE("grid geometry and pole band") {
  GridSpec g;
  CHECK(g.x(0) == 0.6);
  CHECK(g.x(63) == doctest::Approx(2.4));
  CHECK(g.y(63) == doctest::Approx(1.0));
  g.nx = 1;
  CHECK_THROWS(g.validate());
  g = GridSpec{};
  g.x_max = g.x_min;
  CHECK_THROWS(g.validate());
  CHECK(pole_band(params(0.3)) == doctest::Approx(0.05 / 1.2));
  CHECK(pole_band(params(0.1)) == doctest::Approx(0.05));
  CHECK(in_pole_band(0.02, params(0.1)));
  CHECK_FALSE(in_pole_band(0.2, params(0.1)));
}

TEST_CASE("field grid values") {
  const auto p = params(0.3);
  OdeOptions o;
  const auto traj = integrate(p, {0.5, 1.0, 1.0, 0.0}, 2.5, o);
  REQUIRE(traj.completed());
  GridSpec g{0.6, 2.4, -1.0, 1.0, 16, 9};
  const auto f = evaluate_fields(p, traj, g);
  CHECK(f.masked_count() == 0);
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 1; j < g.ny; ++j) CHECK(f.mod_q2(i, j) == doctest::Approx(f.mod_q2(i, 0)).epsilon(1e-14));
    CHECK(f.h(i, 0) == doctest::Approx(traj.at(g.x(i)).h).epsilon(1e-14));
    CHECK(f.exp_upsilon(i, 0) == doctest::Approx(4.0 * f.mod_q2(i, 0) / traj.at(g.x(i)).h1));
  }

  // Thread count must not change the numbers.
  setenv("BONNET_LAB_THREADS", "1", 1);
  const auto serial = evaluate_fields(p, traj, g);
  setenv("BONNET_LAB_THREADS", "4", 1);
  const auto threaded = evaluate_fields(p, traj, g);
  unsetenv("BONNET_LAB_THREADS");
  CHECK((serial.q == threaded.q).all());
  CHECK((serial.exp_upsilon == threaded.exp_upsilon).all());
}

TEST_CASE("field grid masks the pole band and rejects uncovered columns") {
  const auto p = params(0.3);
  const auto traj = integrate(p, {0.5, 1.0, 1.0, 0.0}, 2.5, OdeOptions{});
  const GridSpec band{0.0, 0.6, -0.5, 0.5, 2, 3};
  const auto f = evaluate_fields(p, traj, band);
  CHECK(f.masked.row(0).all());
  CHECK_FALSE(f.masked.row(1).any());
  CHECK(f.masked_count() == 3);
  CHECK_THROWS_AS(evaluate_fields(p, traj, GridSpec{0.6, 3.0, -1.0, 1.0, 4, 4}), std::out_of_range);
}
